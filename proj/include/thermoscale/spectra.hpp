// spectra.hpp -- exact diagonalization and the two energy scales of the
// partitioned chain: level width and interaction strength.

#pragma once

#include "thermoscale/chain.hpp"
#include "thermoscale/ops.hpp"

#include <vector>

namespace thermoscale {
namespace spectra {

struct Spectrum {
    RealVector energies;  // ascending
    Matrix states;        // column mu is the eigenvector for energies(mu)
    double mean_energy = 0.0;
};

Spectrum diagonalize(const ops::ChainOperator& H);

// RMS spread of the full spectrum, sqrt(Tr[(H - E_mean)^2] / dim).
double level_width(const ops::ChainOperator& H);

// Same quantity in closed form from the coefficients alone:
// sqrt(L) * (n/2) * sqrt(sum C^2 + (2/n) sum A^2).
double level_width(const chain::ChainSpec& spec);

// RMS strength sqrt(Tr[I^2] / dim) of a group-boundary interaction.
double interaction_strength(const ops::ChainOperator& interaction);

// Closed form (n/2) * sqrt(group_count * sum C^2).
double interaction_strength(const chain::ChainSpec& spec, const chain::PartitionSpec& partition);

struct ScalingRow {
    int group_size = 0;
    double ratio = 0.0;      // interaction strength over level width
    double reference = 0.0;  // 1 / sqrt(group_size)
};

// Ratio table over a list of group sizes, computed through the operators
// (build, split, trace), not the closed forms.
std::vector<ScalingRow> scaling_ratio(const chain::ChainSpec& spec,
                                      const std::vector<int>& group_sizes,
                                      const ops::GeneratorSet& gens);

}  // namespace spectra
}  // namespace thermoscale
