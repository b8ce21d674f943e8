#include "thermoscale/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace thermoscale {
namespace thermal {

namespace {

void check_beta(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("inverse temperature must be finite and non-negative");
}

void check_site_basis(const DensityMatrix& rho, const char* what) {
    if (rho.basis != StateBasis::Site)
        throw std::invalid_argument(std::string(what) + " expects a site-basis density matrix");
}

void check_same_space(const DensityMatrix& rho, const ProductBasis& basis, const char* what) {
    if (rho.dim() != basis.dim())
        throw std::invalid_argument(std::string(what) +
                                    ": state and basis live on different spaces");
}

}  // namespace

RealVector canonical_populations(const RealVector& energies, double beta) {
    check_beta(beta);
    if (energies.size() == 0)
        throw std::invalid_argument("canonical populations need at least one energy");

    double shift = energies.minCoeff();
    RealVector weights = (-beta * (energies.array() - shift)).exp();
    return weights / weights.sum();
}

DensityMatrix canonical_state(const spectra::Spectrum& spectrum, double beta) {
    RealVector p = canonical_populations(spectrum.energies, beta);
    DensityMatrix rho;
    rho.mat = spectrum.states * p.asDiagonal() * spectrum.states.adjoint();
    rho.basis = StateBasis::Site;
    return rho;
}

ProductBasis build_product_basis(const chain::ChainSpec& spec,
                                 const chain::PartitionSpec& partition,
                                 const ops::GeneratorSet& gens) {
    if (partition.group_size * partition.group_count != spec.L)
        throw std::invalid_argument("partition does not cover the chain");

    ProductBasis basis;
    basis.n = spec.n;
    basis.partition = partition;
    basis.group_spectrum =
        spectra::diagonalize(chain::build_group_hamiltonian(spec, partition.group_size, gens));

    basis.energies = RealVector::Zero(1);
    basis.states = Matrix::Identity(1, 1);
    Eigen::Index gd = basis.group_spectrum.energies.size();
    for (int g = 0; g < partition.group_count; ++g) {
        RealVector sums(basis.energies.size() * gd);
        for (Eigen::Index i = 0; i < basis.energies.size(); ++i)
            for (Eigen::Index k = 0; k < gd; ++k)
                sums(i * gd + k) = basis.energies(i) + basis.group_spectrum.energies(k);
        basis.energies = std::move(sums);
        basis.states = ops::kron(basis.states, basis.group_spectrum.states);
    }
    return basis;
}

DensityMatrix product_canonical(const ProductBasis& basis, double beta) {
    RealVector q = canonical_populations(basis.group_spectrum.energies, beta);
    Matrix group = basis.group_spectrum.states * q.asDiagonal() *
                   basis.group_spectrum.states.adjoint();

    DensityMatrix rho;
    rho.mat = Matrix::Identity(1, 1);
    for (int g = 0; g < basis.partition.group_count; ++g) rho.mat = ops::kron(rho.mat, group);
    rho.basis = StateBasis::Site;
    return rho;
}

OverlapDistribution overlap_distribution(const spectra::Spectrum& total,
                                         const ProductBasis& basis, int j) {
    if (total.energies.size() != basis.dim())
        throw std::invalid_argument("spectrum and product basis live on different spaces");
    if (j < 0 || j >= basis.dim())
        throw std::invalid_argument("product state index " + std::to_string(j) +
                                    " out of range");

    OverlapDistribution dist;
    dist.j_index = j;
    dist.product_energy = basis.energies(j);
    dist.level_energies = total.energies;

    Vector amplitudes = total.states.adjoint() * basis.states.col(j);
    dist.weights = amplitudes.cwiseAbs2();

    Eigen::ArrayXd diffs = total.energies.array() - dist.product_energy;
    dist.conditional_second_moment = (diffs.square() * dist.weights.array()).sum();

    if (dist.conditional_second_moment > 0.0)
        dist.rescaled_x = (diffs / std::sqrt(dist.conditional_second_moment)).matrix();
    else
        dist.rescaled_x = RealVector::Zero(total.energies.size());
    return dist;
}

InteractionMoments interaction_moments(const ProductBasis& basis,
                                       const ops::ChainOperator& interaction) {
    if (interaction.dim() != basis.dim())
        throw std::invalid_argument("interaction and product basis live on different spaces");

    Matrix m = interaction.mat * basis.states;
    Eigen::Index d = basis.dim();
    InteractionMoments moments{RealVector(d), RealVector(d)};
    for (Eigen::Index j = 0; j < d; ++j) {
        moments.first(j) = basis.states.col(j).dot(m.col(j)).real();
        moments.second(j) = m.col(j).squaredNorm();
    }
    return moments;
}

double EnergyHistogram::density_at(double energy) const {
    double rel = (energy - origin) / bin_width;
    if (rel < 0.0) return 0.0;
    auto idx = static_cast<std::size_t>(rel);
    if (idx >= counts.size()) return 0.0;
    return counts[idx] / (total * bin_width);
}

EnergyHistogram density_of_states(const RealVector& energies, double bin_width) {
    if (energies.size() == 0)
        throw std::invalid_argument("density of states needs a non-empty spectrum");
    if (!(bin_width > 0.0) || !std::isfinite(bin_width))
        throw std::invalid_argument("bin width must be positive and finite");

    EnergyHistogram hist;
    hist.origin = energies.minCoeff();
    hist.bin_width = bin_width;
    double span = energies.maxCoeff() - hist.origin;
    auto bins = static_cast<std::size_t>(span / bin_width) + 1;
    hist.counts.assign(bins, 0);
    hist.total = static_cast<int>(energies.size());
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
        auto idx = static_cast<std::size_t>((energies(i) - hist.origin) / bin_width);
        if (idx >= bins) idx = bins - 1;
        ++hist.counts[idx];
    }
    return hist;
}

DecayProfile decay_profile(const OverlapDistribution& dist, const EnergyHistogram& dos,
                           double beta, double amplitude) {
    check_beta(beta);
    if (!(amplitude > 0.0))
        throw std::invalid_argument("envelope amplitude must be positive");

    DecayProfile profile;
    Eigen::Index m = dist.level_energies.size();
    profile.samples.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index mu = 0; mu < m; ++mu) {
        double diff = dist.level_energies(mu) - dist.product_energy;
        DecaySample sample;
        sample.x = dist.rescaled_x(mu);
        sample.weighted_density = dist.weights(mu) * dos.density_at(diff);
        sample.envelope = amplitude * std::exp(-beta * std::abs(diff));
        if (std::abs(sample.x) > 1.0) {
            ++profile.tail_count;
            if (sample.weighted_density > sample.envelope) ++profile.tail_violations;
        }
        profile.samples.push_back(sample);
    }
    profile.pass = profile.tail_count == 0 ||
                   profile.tail_violations < 0.05 * profile.tail_count;
    return profile;
}

std::vector<DiagonalRecord> diagonal_comparison(const DensityMatrix& rho,
                                                const spectra::Spectrum& total,
                                                const ProductBasis& basis,
                                                const ops::ChainOperator& interaction,
                                                double beta) {
    check_beta(beta);
    check_site_basis(rho, "diagonal comparison");
    check_same_space(rho, basis, "diagonal comparison");
    if (total.energies.size() != basis.dim())
        throw std::invalid_argument("diagonal comparison: spectrum dimension mismatch");

    Eigen::Index d = basis.dim();
    InteractionMoments moments = interaction_moments(basis, interaction);
    double rms = std::sqrt(moments.second.mean());

    // First-moment identity, checked against the overlap-sum route.
    Matrix overlaps = basis.states.adjoint() * total.states;
    double energy_scale = std::max(std::abs(total.energies(0)),
                                   std::abs(total.energies(d - 1)));
    double tol = kSpectralTol * rms + kTraceTol * std::max(energy_scale, 1e-300);
    for (Eigen::Index j = 0; j < d; ++j) {
        double from_sum =
            (overlaps.row(j).cwiseAbs2() * total.energies.asDiagonal()).sum() -
            basis.energies(j);
        if (std::abs(from_sum - moments.first(j)) > tol)
            throw NumericError("first-moment identity violated at product state " +
                               std::to_string(j));
    }

    double shift = total.energies.minCoeff();
    double z = (-beta * (total.energies.array() - shift)).exp().sum();

    Matrix transformed = rho.mat * basis.states;
    std::vector<DiagonalRecord> records(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) {
        DiagonalRecord& rec = records[static_cast<std::size_t>(j)];
        rec.exact = basis.states.col(j).dot(transformed.col(j)).real();
        rec.zeroth = std::exp(-beta * (basis.energies(j) - shift)) / z;
        rec.truncated = rec.zeroth * (1.0 - beta * moments.first(j) +
                                      0.5 * beta * beta * moments.second(j));
        rec.correction_norm = beta * std::sqrt(moments.second(j));
    }
    return records;
}

OffdiagonalProfile offdiagonal_profile(const DensityMatrix& rho, const ProductBasis& basis,
                                       double interaction_rms) {
    check_site_basis(rho, "off-diagonal profile");
    check_same_space(rho, basis, "off-diagonal profile");
    if (!(interaction_rms >= 0.0))
        throw std::invalid_argument("interaction strength must be non-negative");

    Eigen::Index d = basis.dim();
    Matrix in_basis = basis.states.adjoint() * (rho.mat * basis.states);

    OffdiagonalProfile profile;
    profile.samples.reserve(static_cast<std::size_t>(d * (d - 1) / 2));
    for (Eigen::Index j = 0; j < d; ++j) {
        profile.mean_diagonal += std::abs(in_basis(j, j));
        for (Eigen::Index k = j + 1; k < d; ++k) {
            double gap = std::abs(basis.energies(j) - basis.energies(k));
            double magnitude = std::abs(in_basis(j, k));
            profile.samples.emplace_back(gap, magnitude);
            if (gap > 2.0 * interaction_rms)
                profile.max_far_magnitude = std::max(profile.max_far_magnitude, magnitude);
        }
    }
    profile.mean_diagonal /= static_cast<double>(d);
    profile.far_to_diagonal_ratio = profile.max_far_magnitude / profile.mean_diagonal;
    return profile;
}

double state_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("state distance needs equal dimensions");
    if (a.basis != b.basis)
        throw std::invalid_argument("state distance needs a common basis");
    return (a.mat - b.mat).norm();
}

LevelOccupations group_occupations(const DensityMatrix& rho, const ProductBasis& basis,
                                   int group, double cluster_tol) {
    check_site_basis(rho, "group occupations");
    check_same_space(rho, basis, "group occupations");
    if (group < 1 || group > basis.partition.group_count)
        throw std::invalid_argument("group index out of range");
    if (!(cluster_tol >= 0.0))
        throw std::invalid_argument("cluster tolerance must be non-negative");

    int N = basis.partition.group_size;
    std::vector<int> keep(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) keep[static_cast<std::size_t>(i)] = (group - 1) * N + i + 1;

    Matrix reduced = ops::partial_trace(rho.mat, basis.n, basis.sites(), keep);
    return project_group_occupations(basis.group_spectrum, reduced, cluster_tol);
}

LevelOccupations project_group_occupations(const spectra::Spectrum& group_spectrum,
                                           const Matrix& reduced, double cluster_tol) {
    if (reduced.rows() != group_spectrum.energies.size() ||
        reduced.cols() != group_spectrum.energies.size())
        throw std::invalid_argument("reduced state does not match the group dimension");
    if (!(cluster_tol >= 0.0))
        throw std::invalid_argument("cluster tolerance must be non-negative");

    Matrix in_basis = group_spectrum.states.adjoint() * reduced * group_spectrum.states;

    const RealVector& e = group_spectrum.energies;
    LevelOccupations occ;
    std::vector<double> level_energy;
    std::vector<double> level_prob;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        double p = std::max(0.0, in_basis(i, i).real());
        if (!level_energy.empty() && e(i) - e(i - 1) <= cluster_tol) {
            int m = occ.multiplicities.back();
            level_energy.back() = (level_energy.back() * m + e(i)) / (m + 1);
            level_prob.back() += p;
            occ.multiplicities.back() = m + 1;
        } else {
            level_energy.push_back(e(i));
            level_prob.push_back(p);
            occ.multiplicities.push_back(1);
        }
    }
    occ.energies = Eigen::Map<RealVector>(level_energy.data(),
                                          static_cast<Eigen::Index>(level_energy.size()));
    occ.probabilities = Eigen::Map<RealVector>(level_prob.data(),
                                               static_cast<Eigen::Index>(level_prob.size()));
    return occ;
}

double spectral_temperature(const RealVector& level_energies, const RealVector& probabilities,
                            const std::vector<int>& multiplicities) {
    Eigen::Index m = level_energies.size();
    if (m < 2)
        throw std::invalid_argument("spectral temperature needs at least two levels");
    if (probabilities.size() != m)
        throw std::invalid_argument("level and probability counts differ");
    if (!multiplicities.empty() && static_cast<Eigen::Index>(multiplicities.size()) != m)
        throw std::invalid_argument("multiplicity count differs from level count");
    for (int g : multiplicities)
        if (g < 1) throw std::invalid_argument("multiplicities must be positive");
    for (Eigen::Index i = 1; i < m; ++i)
        if (!(level_energies(i) > level_energies(i - 1)))
            throw std::invalid_argument("levels must be strictly ascending");
    for (Eigen::Index i = 0; i < m; ++i)
        if (!(probabilities(i) >= 0.0))
            throw std::invalid_argument("probabilities must be non-negative");
    if (std::abs(probabilities.sum() - 1.0) > 1e-8)
        throw std::invalid_argument("probabilities must sum to one");

    auto weight = [&](Eigen::Index i) {
        return multiplicities.empty()
                   ? 1.0
                   : static_cast<double>(multiplicities[static_cast<std::size_t>(i)]);
    };
    double p0 = probabilities(0);
    double excited = 1.0 - p0;
    if (excited <= 1e-12)
        throw std::runtime_error("spectral temperature undefined: no excited weight");
    if (!(p0 > 0.0))
        throw std::runtime_error("spectral temperature undefined: empty ground level");

    double log0 = std::log(p0 / weight(0));
    double beta = 0.0;
    for (Eigen::Index i = 1; i < m; ++i) {
        double p = probabilities(i);
        if (p <= 0.0) continue;
        double ratio = std::log(p / weight(i)) - log0;
        beta -= (p / excited) * ratio / (level_energies(i) - level_energies(0));
    }
    return beta;
}

}  // namespace thermal
}  // namespace thermoscale
