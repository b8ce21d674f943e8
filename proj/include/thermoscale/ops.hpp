// ops.hpp -- SU(n) generator sets, site embeddings, partial trace.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace thermoscale {

// Raised when a computation breaks one of the hard numerical identities
// the pipeline is supposed to maintain. Distinct from invalid_argument so
// callers can map it to its own exit code.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Tolerance ladder used throughout: exact constructions, trace identities,
// and identities that pass through an eigendecomposition.
inline constexpr double kConstructionTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kSpectralTol = 1e-9;

namespace ops {

// The n^2 - 1 traceless Hermitian generators of su(n), rescaled so that
// Tr[s_a s_b] = 2 delta_ab on one site. Families are ordered symmetric,
// antisymmetric, diagonal; within the off-diagonal families index pairs
// (j, k), j < k, run lexicographically. For n = 2 this yields exactly
// (sigma_x, sigma_y, sigma_z).
struct GeneratorSet {
    int n = 0;
    std::vector<Matrix> matrices;

    int count() const { return static_cast<int>(matrices.size()); }
    const Matrix& operator[](int alpha) const { return matrices.at(alpha); }
};

// A Hermitian operator on the full n^L-dimensional chain space, tagged with
// the chain geometry it was built for.
struct ChainOperator {
    int n = 0;
    int L = 0;
    Matrix mat;

    Eigen::Index dim() const { return mat.rows(); }
};

inline Eigen::Index space_dim(int n, int sites) {
    Eigen::Index d = 1;
    for (int i = 0; i < sites; ++i) d *= n;
    return d;
}

Matrix kron(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tol = kConstructionTol);

GeneratorSet build_generators(int n);

// Next site along the ring, 1-based.
inline int successor(int site, int L) { return site % L + 1; }

// s_alpha acting on `site` (1-based, site 1 is the leftmost Kronecker
// factor), identity everywhere else.
ChainOperator embed_single(const GeneratorSet& gens, int alpha, int site, int L);

// s_alpha(site) s_beta(site + 1), with the bond (L, 1) wrapping around.
ChainOperator embed_pair(const GeneratorSet& gens, int alpha, int beta, int site, int L);

// Places a k-site block operator on sites first .. first + k - 1.
ChainOperator embed_block(const Matrix& block, int n, int first_site, int block_sites, int L);

// Traces out everything but `keep`, which must be a contiguous ascending
// run of 1-based site indices. Trace and Hermiticity are preserved.
Matrix partial_trace(const Matrix& full, int n, int L, const std::vector<int>& keep);

inline Matrix partial_trace(const ChainOperator& op, const std::vector<int>& keep) {
    return partial_trace(op.mat, op.n, op.L, keep);
}

}  // namespace ops
}  // namespace thermoscale
