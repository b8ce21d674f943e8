#include "thermoscale/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace thermoscale {
namespace experiments {

namespace {

struct RealizationContext {
    chain::NumericModel model;
    chain::ChainSpec spec;
    ops::GeneratorSet gens;
    ops::ChainOperator H;
    spectra::Spectrum total;
    double width = 0.0;
    double width_closed = 0.0;
    thermal::EnergyHistogram dos;
};

RealizationContext build_context(const ExperimentConfig& config, int index) {
    RealizationContext ctx;
    ctx.model = chain::sample_random_model(config.base_seed + static_cast<std::uint64_t>(index),
                                           config.lambda);
    ctx.spec = chain::to_chain_spec(ctx.model, config.L);
    ctx.gens = ops::build_generators(config.n);
    ctx.H = chain::build_hamiltonian(ctx.spec, ctx.gens);
    ctx.width = spectra::level_width(ctx.H);
    ctx.width_closed = spectra::level_width(ctx.spec);
    if (std::abs(ctx.width - ctx.width_closed) > kTraceTol * ctx.width_closed)
        throw NumericError("level-width routes disagree at realization " +
                           std::to_string(index));

    ctx.total = spectra::diagonalize(ctx.H);
    double bin = config.bin_width > 0.0 ? config.bin_width : ctx.width / 20.0;
    ctx.dos = thermal::density_of_states(ctx.total.energies, bin);
    return ctx;
}

struct PartitionContext {
    chain::PartitionSpec partition;
    chain::SplitHamiltonian parts;
    thermal::ProductBasis basis;
    thermal::InteractionMoments moments;
    RealMatrix weights;  // W(j, mu) = |<j|mu>|^2
    RealVector overlap_second;  // conditional second moments through the overlap sums
    double rms = 0.0;
    double rms_closed = 0.0;
};

PartitionContext build_partition_context(const RealizationContext& ctx, int group_size,
                                         int index) {
    PartitionContext pc;
    pc.partition = chain::make_partition(group_size, ctx.spec.L);
    pc.parts = chain::split_partition(ctx.spec, pc.partition, ctx.gens);
    pc.basis = thermal::build_product_basis(ctx.spec, pc.partition, ctx.gens);
    pc.moments = thermal::interaction_moments(pc.basis, pc.parts.interaction);

    pc.rms = spectra::interaction_strength(pc.parts.interaction);
    pc.rms_closed = spectra::interaction_strength(ctx.spec, pc.partition);
    double strength_scale = std::max(pc.rms_closed, kSpectralTol * ctx.width);
    if (std::abs(pc.rms - pc.rms_closed) > kTraceTol * strength_scale)
        throw NumericError("interaction-strength routes disagree at realization " +
                           std::to_string(index));

    Matrix overlaps = pc.basis.states.adjoint() * ctx.total.states;
    pc.weights = overlaps.cwiseAbs2();

    Eigen::Index d = pc.basis.dim();
    pc.overlap_second = RealVector(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::ArrayXd diffs = ctx.total.energies.array() - pc.basis.energies(j);
        pc.overlap_second(j) = (diffs.square() * pc.weights.row(j).transpose().array()).sum();
    }
    return pc;
}

thermal::OverlapDistribution assemble_distribution(const RealizationContext& ctx,
                                                   const PartitionContext& pc, int j) {
    thermal::OverlapDistribution dist;
    dist.j_index = j;
    dist.product_energy = pc.basis.energies(j);
    dist.level_energies = ctx.total.energies;
    dist.weights = pc.weights.row(j).transpose();
    dist.conditional_second_moment = pc.overlap_second(j);
    if (dist.conditional_second_moment > 0.0)
        dist.rescaled_x = ((ctx.total.energies.array() - dist.product_energy) /
                           std::sqrt(dist.conditional_second_moment))
                              .matrix();
    else
        dist.rescaled_x = RealVector::Zero(ctx.total.energies.size());
    return dist;
}

// Reduced state of group 1 straight from the global populations,
// rho_red = sum_mu p_mu Tr_rest |mu><mu|.
Matrix reduced_from_populations(const RealizationContext& ctx, const PartitionContext& pc,
                                const RealVector& populations) {
    Eigen::Index dim = ctx.total.energies.size();
    Eigen::Index dg = pc.basis.group_spectrum.energies.size();
    Eigen::Index drest = dim / dg;

    using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Matrix reduced = Matrix::Zero(dg, dg);
    for (Eigen::Index mu = 0; mu < dim; ++mu) {
        Eigen::Map<const RowMajor> slice(ctx.total.states.data() + mu * dim, dg, drest);
        reduced.noalias() += populations(mu) * (slice * slice.adjoint());
    }
    return reduced;
}

double pow_int(double x, int k) {
    double out = 1.0;
    for (int i = 0; i < k; ++i) out *= x;
    return out;
}

std::string cell_tag(const CellAggregate& cell) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "N%d_bl%g", cell.group_size, cell.beta_label);
    return buf;
}

SweepSummary summarize(const ExperimentConfig& config,
                       const std::vector<RealizationResult>& results) {
    SweepSummary summary;
    summary.realizations = static_cast<int>(results.size());
    summary.lambda = config.lambda;

    double mean = 0.0;
    for (const auto& r : results) mean += r.level_width;
    mean /= static_cast<double>(results.size());
    double var = 0.0;
    for (const auto& r : results) {
        double d = r.level_width - mean;
        var += d * d;
        summary.max_width_residual =
            std::max(summary.max_width_residual,
                     std::abs(r.level_width - r.level_width_closed) / r.level_width_closed);
    }
    summary.mean_width = mean;
    summary.std_width = std::sqrt(var / static_cast<double>(results.size()));

    std::size_t n_parts = config.partitions.size();
    summary.ratios.assign(n_parts, RatioAggregate{});
    for (std::size_t k = 0; k < n_parts; ++k) {
        summary.ratios[k].group_size = config.partitions[k];
        summary.ratios[k].reference =
            1.0 / std::sqrt(static_cast<double>(config.partitions[k]));
    }
    for (const auto& r : results)
        for (std::size_t k = 0; k < n_parts; ++k) {
            const PartitionScales& s = r.scales[k];
            summary.ratios[k].mean_ratio += s.ratio / static_cast<double>(results.size());
            if (s.bound_violated) ++summary.scaling_violations;
            double scale = std::max(s.interaction_rms_closed, kSpectralTol);
            summary.max_interaction_residual =
                std::max(summary.max_interaction_residual,
                         std::abs(s.interaction_rms - s.interaction_rms_closed) / scale);
            summary.max_moment_residual =
                std::max(summary.max_moment_residual, s.moment_residual);
        }

    std::size_t n_cells = results.front().cells.size();
    std::size_t n_betas = n_cells / n_parts;
    summary.cells.assign(n_cells, CellAggregate{});
    for (std::size_t k = 0; k < n_cells; ++k) {
        const CellResult& cell = results.front().cells[k];
        summary.cells[k].group_size = cell.group_size;
        summary.cells[k].beta_label = cell.beta_label;
        summary.cells[k].qualifies =
            std::sqrt(static_cast<double>(cell.group_size)) > 5.0 * cell.beta_label;
    }
    for (const auto& r : results)
        for (std::size_t k = 0; k < n_cells; ++k) {
            summary.cells[k].mean_dist += r.cells[k].dist / static_cast<double>(results.size());
            summary.cells[k].mean_beta_ratio +=
                r.cells[k].beta_ratio / static_cast<double>(results.size());
            summary.max_beta_ratio = std::max(summary.max_beta_ratio, r.cells[k].beta_ratio);
        }

    for (const auto& r : results) {
        for (std::size_t b = 0; b < n_betas; ++b) {
            bool monotone = true;
            for (std::size_t k = 1; k < n_parts; ++k) {
                double prev = r.cells[(k - 1) * n_betas + b].dist;
                double curr = r.cells[k * n_betas + b].dist;
                if (curr > prev + 1e-12) monotone = false;
            }
            if (n_parts > 1) {
                ++summary.monotone_total;
                if (monotone) ++summary.monotone_pairs;
            }
        }
        if (r.profile_pass) ++summary.profile_passes;
    }
    return summary;
}

}  // namespace

void validate(const ExperimentConfig& config) {
    if (config.L < 2) throw std::invalid_argument("sweep needs a chain of at least two sites");
    if (config.n != 2)
        throw std::invalid_argument("random-model sweeps are defined for two-level systems");
    if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda))
        throw std::invalid_argument("coupling strength must be finite and non-negative");
    if (config.realizations < 1)
        throw std::invalid_argument("sweep needs at least one realization");
    if (config.partitions.empty())
        throw std::invalid_argument("sweep needs at least one partition");
    for (std::size_t k = 0; k < config.partitions.size(); ++k) {
        chain::make_partition(config.partitions[k], config.L);
        if (k > 0 && config.partitions[k] <= config.partitions[k - 1])
            throw std::invalid_argument("partitions must be strictly ascending");
    }
    if (config.betas.empty()) {
        if (config.beta_lambdas.empty())
            throw std::invalid_argument("sweep needs a beta grid");
        if (config.lambda == 0.0)
            throw std::invalid_argument(
                "beta_lambda grid is undefined at lambda = 0; set absolute betas");
        for (double bl : config.beta_lambdas)
            if (!(bl > 0.0) || !std::isfinite(bl))
                throw std::invalid_argument("beta_lambda values must be positive and finite");
    } else {
        for (double b : config.betas)
            if (!(b > 0.0) || !std::isfinite(b))
                throw std::invalid_argument("beta values must be positive and finite");
    }
    if (!(config.bin_width >= 0.0) || !std::isfinite(config.bin_width))
        throw std::invalid_argument("bin width must be finite and non-negative");
    if (!(config.envelope_amplitude > 0.0))
        throw std::invalid_argument("envelope amplitude must be positive");
    if (config.profile_realization < 0 || config.profile_realization >= config.realizations)
        throw std::invalid_argument("profile realization index out of range");
}

BetaGrid beta_grid(const ExperimentConfig& config) {
    BetaGrid grid;
    if (!config.betas.empty()) {
        grid.betas = config.betas;
        // With lambda = 0 the product labels would all collapse to zero, so
        // the rows are keyed by the absolute values instead.
        for (double b : config.betas)
            grid.labels.push_back(config.lambda > 0.0 ? b * config.lambda : b);
    } else {
        for (double bl : config.beta_lambdas) {
            grid.betas.push_back(bl / config.lambda);
            grid.labels.push_back(bl);
        }
    }
    return grid;
}

RealizationResult run_realization(const ExperimentConfig& config, int index) {
    validate(config);
    if (index < 0 || index >= config.realizations)
        throw std::invalid_argument("realization index out of range");

    RealizationContext ctx = build_context(config, index);
    BetaGrid grid = beta_grid(config);

    RealizationResult result;
    result.index = index;
    result.seed = config.base_seed + static_cast<std::uint64_t>(index);
    result.c = ctx.model.c;
    result.level_width = ctx.width;
    result.level_width_closed = ctx.width_closed;

    std::vector<RealVector> populations;
    std::vector<double> purity;
    for (double beta : grid.betas) {
        populations.push_back(thermal::canonical_populations(ctx.total.energies, beta));
        purity.push_back(populations.back().squaredNorm());
    }

    double cluster_tol = kSpectralTol * ctx.width;
    for (int N : config.partitions) {
        PartitionContext pc = build_partition_context(ctx, N, index);

        PartitionScales scales;
        scales.group_size = N;
        scales.interaction_rms = pc.rms;
        scales.interaction_rms_closed = pc.rms_closed;
        scales.ratio = pc.rms / ctx.width;
        scales.reference = 1.0 / std::sqrt(static_cast<double>(N));
        scales.bound_violated = scales.ratio > scales.reference + 1e-12;

        double moment_scale =
            std::max(pc.rms * pc.rms, pow_int(kSpectralTol * ctx.width, 2));
        for (Eigen::Index j = 0; j < pc.basis.dim(); ++j)
            scales.moment_residual =
                std::max(scales.moment_residual,
                         std::abs(pc.overlap_second(j) - pc.moments.second(j)) / moment_scale);
        result.scales.push_back(scales);

        if (pc.rms > 0.0) {
            double tuned_beta = 0.5 / pc.rms;
            for (Eigen::Index j = 0; j < pc.basis.dim(); ++j) {
                thermal::DecayProfile profile = thermal::decay_profile(
                    assemble_distribution(ctx, pc, static_cast<int>(j)), ctx.dos, tuned_beta,
                    config.envelope_amplitude);
                result.profile_tail += profile.tail_count;
                result.profile_violations += profile.tail_violations;
            }
        }

        double max_second = pc.moments.second.maxCoeff();
        for (std::size_t bi = 0; bi < grid.betas.size(); ++bi) {
            double beta = grid.betas[bi];
            CellResult cell;
            cell.group_size = N;
            cell.beta_label = grid.labels[bi];
            cell.beta = beta;

            RealVector q = thermal::canonical_populations(pc.basis.energies, beta);
            RealVector qg =
                thermal::canonical_populations(pc.basis.group_spectrum.energies, beta);
            double cross = q.dot(pc.weights * populations[bi]);
            double dist2 = purity[bi] +
                           pow_int(qg.squaredNorm(), pc.partition.group_count) - 2.0 * cross;
            cell.dist = std::sqrt(std::max(0.0, dist2));

            Matrix reduced = reduced_from_populations(ctx, pc, populations[bi]);
            thermal::LevelOccupations occ = thermal::project_group_occupations(
                pc.basis.group_spectrum, reduced, cluster_tol);
            cell.beta_spec = thermal::spectral_temperature(occ.energies, occ.probabilities,
                                                           occ.multiplicities);
            cell.beta_ratio = cell.beta_spec / beta;
            cell.max_correction = beta * std::sqrt(max_second);
            result.cells.push_back(cell);
        }
    }

    result.profile_pass = result.profile_tail == 0 ||
                          result.profile_violations < 0.05 * result.profile_tail;
    return result;
}

SweepOutput run_sweep(const ExperimentConfig& config, int threads) {
    validate(config);
    if (threads < 1) throw std::invalid_argument("thread count must be positive");
    int workers = std::min(threads, config.realizations);

    SweepOutput out;
    out.results.resize(static_cast<std::size_t>(config.realizations));

    if (workers == 1) {
        for (int i = 0; i < config.realizations; ++i)
            out.results[static_cast<std::size_t>(i)] = run_realization(config, i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::pair<int, std::exception_ptr>> failures(
            static_cast<std::size_t>(workers), {-1, nullptr});
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (;;) {
                    int i = next.fetch_add(1);
                    if (i >= config.realizations) return;
                    try {
                        out.results[static_cast<std::size_t>(i)] = run_realization(config, i);
                    } catch (...) {
                        failures[static_cast<std::size_t>(w)] = {i, std::current_exception()};
                        return;
                    }
                }
            });
        for (auto& t : pool) t.join();

        std::exception_ptr first;
        int first_index = config.realizations;
        for (const auto& [idx, err] : failures)
            if (err && idx < first_index) {
                first_index = idx;
                first = err;
            }
        if (first) std::rethrow_exception(first);
    }

    out.summary = summarize(config, out.results);
    return out;
}

DataTable emit_figure_data(const ExperimentConfig& config,
                           const std::vector<RealizationResult>& results,
                           const std::string& figure) {
    DataTable table;
    if (figure == "fig1") {
        if (results.empty()) throw std::invalid_argument("no sweep results to tabulate");
        table.columns = {"realization", "N", "ratio", "reference_inv_sqrtN"};
        table.integer_column = {true, true, false, false};
        for (const auto& r : results)
            for (const auto& s : r.scales)
                table.rows.push_back({static_cast<double>(r.index),
                                      static_cast<double>(s.group_size), s.ratio, s.reference});
        return table;
    }
    if (figure == "fig3" || figure == "fig4") {
        if (results.empty()) throw std::invalid_argument("no sweep results to tabulate");
        bool dist = figure == "fig3";
        table.columns = {"realization", "N", "beta_lambda",
                         dist ? "dist" : "beta_spec_over_beta"};
        table.integer_column = {true, true, false, false};
        for (const auto& r : results)
            for (const auto& cell : r.cells)
                table.rows.push_back({static_cast<double>(r.index),
                                      static_cast<double>(cell.group_size), cell.beta_label,
                                      dist ? cell.dist : cell.beta_ratio});
        return table;
    }
    if (figure == "fig2") {
        validate(config);
        table.columns = {"j_index", "x", "weighted_density", "envelope"};
        table.integer_column = {true, false, false, false};
        RealizationContext ctx = build_context(config, config.profile_realization);
        for (int N : config.partitions) {
            PartitionContext pc = build_partition_context(ctx, N, config.profile_realization);
            double tuned_beta = pc.rms > 0.0 ? 0.5 / pc.rms : 0.0;
            for (Eigen::Index j = 0; j < pc.basis.dim(); ++j) {
                thermal::DecayProfile profile = thermal::decay_profile(
                    assemble_distribution(ctx, pc, static_cast<int>(j)), ctx.dos, tuned_beta,
                    config.envelope_amplitude);
                for (const auto& sample : profile.samples)
                    table.rows.push_back(
                        {static_cast<double>(j), sample.x, sample.weighted_density,
                         config.envelope_amplitude * std::exp(-0.5 * std::abs(sample.x))});
            }
        }
        return table;
    }
    throw std::invalid_argument("unknown figure id: " + figure);
}

std::vector<std::pair<std::string, double>> summary_rows(const SweepSummary& summary) {
    std::vector<std::pair<std::string, double>> rows;
    rows.emplace_back("realizations", static_cast<double>(summary.realizations));
    rows.emplace_back("lambda", summary.lambda);
    rows.emplace_back("mean_level_width", summary.mean_width);
    rows.emplace_back("std_level_width", summary.std_width);
    if (summary.lambda > 0.0)
        rows.emplace_back("mean_level_width_over_lambda",
                          summary.mean_width / summary.lambda);
    rows.emplace_back("scaling_bound_violations",
                      static_cast<double>(summary.scaling_violations));
    rows.emplace_back("max_level_width_residual", summary.max_width_residual);
    rows.emplace_back("max_interaction_residual", summary.max_interaction_residual);
    rows.emplace_back("max_moment_residual", summary.max_moment_residual);
    for (const auto& ratio : summary.ratios) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "mean_ratio_N%d", ratio.group_size);
        rows.emplace_back(buf, ratio.mean_ratio);
    }
    for (const auto& cell : summary.cells)
        rows.emplace_back("mean_dist_" + cell_tag(cell), cell.mean_dist);
    for (const auto& cell : summary.cells)
        rows.emplace_back("mean_beta_ratio_" + cell_tag(cell), cell.mean_beta_ratio);
    rows.emplace_back("max_beta_ratio", summary.max_beta_ratio);
    if (summary.monotone_total > 0)
        rows.emplace_back("dist_monotone_fraction",
                          static_cast<double>(summary.monotone_pairs) /
                              static_cast<double>(summary.monotone_total));
    rows.emplace_back("profile_pass_fraction",
                      static_cast<double>(summary.profile_passes) /
                          static_cast<double>(summary.realizations));
    return rows;
}

}  // namespace experiments
}  // namespace thermoscale
