// experiments.hpp -- seeded realization sweeps over random coupling
// patterns and the tabular data behind the four standard figures.

#pragma once

#include "thermoscale/thermal.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace thermoscale {
namespace experiments {

struct ExperimentConfig {
    int L = 8;
    int n = 2;
    double lambda = 1.0;
    std::vector<double> beta_lambdas = {0.1, 0.2, 0.3, 0.4};
    std::vector<double> betas;  // absolute grid; overrides beta_lambdas when set
    std::vector<int> partitions = {1, 2, 4};
    int realizations = 100;
    std::uint64_t base_seed = 42;
    double bin_width = 0.0;  // 0 picks level width / 20
    double envelope_amplitude = 0.25;
    int profile_realization = 0;
};

void validate(const ExperimentConfig& config);

// The inverse temperatures a sweep iterates over and the beta*lambda
// labels that key the output rows.
struct BetaGrid {
    std::vector<double> betas;
    std::vector<double> labels;
};

BetaGrid beta_grid(const ExperimentConfig& config);

struct PartitionScales {
    int group_size = 0;
    double interaction_rms = 0.0;         // trace route
    double interaction_rms_closed = 0.0;  // coefficient route
    double ratio = 0.0;                   // interaction rms over level width
    double reference = 0.0;               // 1 / sqrt(group_size)
    double moment_residual = 0.0;  // worst conditional-second-moment mismatch
    bool bound_violated = false;
};

struct CellResult {
    int group_size = 0;
    double beta_label = 0.0;  // beta * lambda
    double beta = 0.0;
    double dist = 0.0;
    double beta_spec = 0.0;
    double beta_ratio = 0.0;  // beta_spec / beta
    double max_correction = 0.0;  // max_j beta sqrt(<j|I^2|j>)
};

struct RealizationResult {
    int index = 0;
    std::uint64_t seed = 0;
    RealMatrix c;
    double level_width = 0.0;         // trace route
    double level_width_closed = 0.0;  // coefficient route
    std::vector<PartitionScales> scales;
    std::vector<CellResult> cells;  // partition-major, then beta grid order
    int profile_tail = 0;           // tuned-envelope samples with |x| > 1
    int profile_violations = 0;     // of those, samples above the envelope
    bool profile_pass = true;
};

struct RatioAggregate {
    int group_size = 0;
    double mean_ratio = 0.0;
    double reference = 0.0;
};

struct CellAggregate {
    int group_size = 0;
    double beta_label = 0.0;
    double mean_dist = 0.0;
    double mean_beta_ratio = 0.0;
    bool qualifies = false;  // sqrt(group_size) > 5 * beta * level width proxy
};

struct SweepSummary {
    int realizations = 0;
    double lambda = 0.0;
    double mean_width = 0.0;
    double std_width = 0.0;
    double max_width_residual = 0.0;        // between the two width routes
    double max_interaction_residual = 0.0;  // between the two strength routes
    double max_moment_residual = 0.0;       // conditional moments vs direct
    int scaling_violations = 0;
    double max_beta_ratio = 0.0;
    int monotone_pairs = 0;  // (realization, beta) pairs non-increasing in N
    int monotone_total = 0;
    int profile_passes = 0;
    std::vector<RatioAggregate> ratios;
    std::vector<CellAggregate> cells;
};

RealizationResult run_realization(const ExperimentConfig& config, int index);

struct SweepOutput {
    SweepSummary summary;
    std::vector<RealizationResult> results;
};

// Runs all realizations, optionally across a thread pool. Output is
// byte-for-byte independent of the thread count: every realization is
// seeded by index and merged in index order.
SweepOutput run_sweep(const ExperimentConfig& config, int threads = 1);

// Columns of one CSV product. Integer columns are printed without a
// decimal point; everything else round-trips through 17 significant
// digits.
struct DataTable {
    std::vector<std::string> columns;
    std::vector<bool> integer_column;
    std::vector<std::vector<double>> rows;
};

// figure is one of "fig1" (scaling ratios), "fig2" (overlap decay for the
// profile realization), "fig3" (state distances), "fig4" (spectral
// temperature ratios).
DataTable emit_figure_data(const ExperimentConfig& config,
                           const std::vector<RealizationResult>& results,
                           const std::string& figure);

std::vector<std::pair<std::string, double>> summary_rows(const SweepSummary& summary);

}  // namespace experiments
}  // namespace thermoscale
