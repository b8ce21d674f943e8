"""Chains of coupled n-level systems: operators, spectra, thermal states,
and the sweep driver, backed by the C++ core."""

try:
    from ._thermoscale import *  # noqa: F401,F403
    from ._thermoscale import __doc__ as _core_doc  # noqa: F401
except ImportError:
    # In-tree builds put the extension next to this package on sys.path
    # instead of inside it.
    from _thermoscale import *  # noqa: F401,F403
