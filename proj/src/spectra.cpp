#include "thermoscale/spectra.hpp"

#include <cmath>
#include <stdexcept>

namespace thermoscale {
namespace spectra {

Spectrum diagonalize(const ops::ChainOperator& H) {
    if (!ops::is_hermitian(H.mat))
        throw std::invalid_argument("diagonalize expects a Hermitian operator");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(H.mat);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed to converge");

    Spectrum s;
    s.energies = solver.eigenvalues();
    s.states = solver.eigenvectors();
    s.mean_energy = H.mat.trace().real() / static_cast<double>(H.dim());
    return s;
}

double level_width(const ops::ChainOperator& H) {
    double d = static_cast<double>(H.dim());
    double mean = H.mat.trace().real() / d;
    double second = H.mat.squaredNorm() / d;
    return std::sqrt(std::max(0.0, second - mean * mean));
}

double level_width(const chain::ChainSpec& spec) {
    chain::validate(spec);
    double a2 = spec.local.squaredNorm();
    double c2 = spec.coupling.squaredNorm();
    return std::sqrt(static_cast<double>(spec.L)) * (spec.n / 2.0) *
           std::sqrt(c2 + (2.0 / spec.n) * a2);
}

double interaction_strength(const ops::ChainOperator& interaction) {
    return interaction.mat.norm() / std::sqrt(static_cast<double>(interaction.dim()));
}

double interaction_strength(const chain::ChainSpec& spec, const chain::PartitionSpec& partition) {
    chain::validate(spec);
    if (partition.group_size * partition.group_count != spec.L)
        throw std::invalid_argument("partition does not cover the chain");
    double c2 = spec.coupling.squaredNorm();
    return (spec.n / 2.0) * std::sqrt(partition.group_count * c2);
}

std::vector<ScalingRow> scaling_ratio(const chain::ChainSpec& spec,
                                      const std::vector<int>& group_sizes,
                                      const ops::GeneratorSet& gens) {
    ops::ChainOperator H = chain::build_hamiltonian(spec, gens);
    double width = level_width(H);
    if (width <= 0.0) throw std::domain_error("level width vanishes, ratio undefined");

    std::vector<ScalingRow> rows;
    rows.reserve(group_sizes.size());
    for (int N : group_sizes) {
        chain::PartitionSpec partition = chain::make_partition(N, spec.L);
        chain::SplitHamiltonian parts = chain::split_partition(spec, partition, gens);
        ScalingRow row;
        row.group_size = N;
        row.ratio = interaction_strength(parts.interaction) / width;
        row.reference = 1.0 / std::sqrt(static_cast<double>(N));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace spectra
}  // namespace thermoscale
