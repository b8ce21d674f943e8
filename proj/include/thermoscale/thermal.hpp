// thermal.hpp -- canonical states, the product eigenbasis of the group
// part, overlap distributions, and the spectral temperature.

#pragma once

#include "thermoscale/chain.hpp"
#include "thermoscale/ops.hpp"
#include "thermoscale/spectra.hpp"

#include <utility>
#include <vector>

namespace thermoscale {
namespace thermal {

enum class StateBasis { Site, Energy, Product };

struct DensityMatrix {
    Matrix mat;
    StateBasis basis = StateBasis::Site;

    Eigen::Index dim() const { return mat.rows(); }
};

// Eigenbasis of the group part H0: product states |j> made of one group
// eigenvector per group, with composite energies E_j. Group 1 occupies the
// leftmost Kronecker slot. All groups share one spectrum.
struct ProductBasis {
    int n = 0;
    chain::PartitionSpec partition;
    spectra::Spectrum group_spectrum;
    RealVector energies;  // composite sums in Kronecker order
    Matrix states;        // column j is |j>, in the site basis

    Eigen::Index dim() const { return states.rows(); }
    int sites() const { return partition.group_size * partition.group_count; }
};

// The distribution w_j(mu) = |<j|mu>|^2 of one product state over the
// exact eigenstates, together with its conditional energy spread.
struct OverlapDistribution {
    int j_index = 0;
    double product_energy = 0.0;        // E_j
    RealVector level_energies;          // E_mu, ascending
    RealVector weights;                 // w_j(mu)
    double conditional_second_moment = 0.0;  // sum_mu (E_mu - E_j)^2 w_j(mu)
    RealVector rescaled_x;              // (E_mu - E_j) / sqrt(second moment)
};

// <j|I|j> and <j|I^2|j> for every product state, straight from the
// interaction operator. The overlap-sum route must reproduce `second`
// exactly up to roundoff; that identity is what makes the conditional
// spread computable without the full spectrum.
struct InteractionMoments {
    RealVector first;
    RealVector second;
};

struct EnergyHistogram {
    double origin = 0.0;
    double bin_width = 0.0;
    std::vector<int> counts;
    int total = 0;

    // Normalised as a probability density: integrates to one over the
    // spectrum's support. Zero outside it.
    double density_at(double energy) const;
};

struct DecaySample {
    double x = 0.0;                 // rescaled energy difference
    double weighted_density = 0.0;  // w_j(mu) * eta(E_mu - E_j)
    double envelope = 0.0;          // amplitude * exp(-beta |E_mu - E_j|)
};

struct DecayProfile {
    std::vector<DecaySample> samples;
    int tail_count = 0;       // samples with |x| > 1
    int tail_violations = 0;  // tail samples above the envelope
    bool pass = true;         // violations below 5% of the tail
};

struct DiagonalRecord {
    double exact = 0.0;      // <j|rho|j>
    double zeroth = 0.0;     // e^(-beta E_j) / Z
    double truncated = 0.0;  // zeroth * (1 - beta <I> + beta^2 <I^2> / 2)
    double correction_norm = 0.0;  // beta sqrt(<j|I^2|j>)
};

struct OffdiagonalProfile {
    std::vector<std::pair<double, double>> samples;  // (|E_j - E_j'|, |<j|rho|j'>|)
    double max_far_magnitude = 0.0;  // largest element with gap > 2 I_rms
    double mean_diagonal = 0.0;
    double far_to_diagonal_ratio = 0.0;
};

struct LevelOccupations {
    RealVector energies;      // distinct levels, ascending
    RealVector probabilities; // summed over each level
    std::vector<int> multiplicities;
};

// exp(-beta E_i) / Z over the given energies, computed with the largest
// exponent shifted out so beta * spread ~ 700 stays finite.
RealVector canonical_populations(const RealVector& energies, double beta);

DensityMatrix canonical_state(const spectra::Spectrum& spectrum, double beta);

ProductBasis build_product_basis(const chain::ChainSpec& spec,
                                 const chain::PartitionSpec& partition,
                                 const ops::GeneratorSet& gens);

// Tensor product of identical group canonical states, e^(-beta H0) / Z0.
DensityMatrix product_canonical(const ProductBasis& basis, double beta);

OverlapDistribution overlap_distribution(const spectra::Spectrum& total,
                                         const ProductBasis& basis, int j);

InteractionMoments interaction_moments(const ProductBasis& basis,
                                       const ops::ChainOperator& interaction);

EnergyHistogram density_of_states(const RealVector& energies, double bin_width);

DecayProfile decay_profile(const OverlapDistribution& dist, const EnergyHistogram& dos,
                           double beta, double amplitude = 0.25);

// Exact group-basis diagonal of rho against the zeroth-order canonical
// value and its second-order correction. Verifies the first-moment
// identity sum_mu E_mu w_j(mu) = E_j + <j|I|j> as it goes.
std::vector<DiagonalRecord> diagonal_comparison(const DensityMatrix& rho,
                                                const spectra::Spectrum& total,
                                                const ProductBasis& basis,
                                                const ops::ChainOperator& interaction,
                                                double beta);

OffdiagonalProfile offdiagonal_profile(const DensityMatrix& rho, const ProductBasis& basis,
                                       double interaction_rms);

// Hilbert-Schmidt distance sqrt(Tr[(a - b)^2]).
double state_distance(const DensityMatrix& a, const DensityMatrix& b);

// Reduced state of one group projected onto the group eigenbasis, with
// eigenvalues closer than cluster_tol merged into one level.
LevelOccupations group_occupations(const DensityMatrix& rho, const ProductBasis& basis,
                                   int group, double cluster_tol = 0.0);

// Same projection and clustering, for callers that already hold the
// reduced state of a group in the site basis.
LevelOccupations project_group_occupations(const spectra::Spectrum& group_spectrum,
                                           const Matrix& reduced, double cluster_tol = 0.0);

// Two-outcome inverse temperature averaged over the excited levels.
// With multiplicities given, each level's probability is weighted as a
// whole but enters the log ratio per state, so canonical occupations
// return beta exactly whether or not levels are degenerate. An empty
// multiplicity list means all levels are simple.
double spectral_temperature(const RealVector& level_energies, const RealVector& probabilities,
                            const std::vector<int>& multiplicities = {});

}  // namespace thermal
}  // namespace thermoscale
