// Acceptance gate for the laboratory: ten end-to-end checks covering the
// moment identities, the interaction scaling bound, the headline sweep
// statistics, the decay envelope, the exact limits, and byte-level
// reproducibility. One line per check; exit 0 only if all pass.

#include "thermoscale/cli.hpp"
#include "thermoscale/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace thermoscale;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

int pick_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 4u));
}

// Check 1: the conditional second moment of a product state's overlap
// distribution equals <j|I^2|j>, across 10 fresh realizations and the
// three standard partitions.
Outcome check_moment_identity() {
    auto gens = ops::build_generators(2);
    double worst = 0.0;
    for (int r = 0; r < 10; ++r) {
        auto model = chain::sample_random_model(42 + static_cast<std::uint64_t>(r), 1.0);
        auto spec = chain::to_chain_spec(model, 8);
        auto H = chain::build_hamiltonian(spec, gens);
        auto total = spectra::diagonalize(H);
        for (int N : {1, 2, 4}) {
            auto partition = chain::make_partition(N, 8);
            auto parts = chain::split_partition(spec, partition, gens);
            auto basis = thermal::build_product_basis(spec, partition, gens);
            auto moments = thermal::interaction_moments(basis, parts.interaction);
            RealMatrix weights = (basis.states.adjoint() * total.states).cwiseAbs2();
            double scale = moments.second.mean();
            for (Eigen::Index j = 0; j < basis.dim(); ++j) {
                Eigen::ArrayXd diffs = total.energies.array() - basis.energies(j);
                double direct =
                    (diffs.square() * weights.row(j).transpose().array()).sum();
                double residual = std::abs(direct - moments.second(j)) /
                                  std::max(moments.second(j), scale);
                worst = std::max(worst, residual);
            }
        }
    }
    return {worst < 1e-9, fmt("max relative residual %.2e (tol 1e-9)", worst)};
}

// Check 2: interaction strength over level width never exceeds
// 1/sqrt(N), and reaches it exactly when the on-site field vanishes.
Outcome check_scaling_bound(const experiments::SweepSummary& summary) {
    double equality_gap = 0.0;
    auto gens = ops::build_generators(2);
    auto model = chain::sample_random_model(7, 1.0, 0.0);
    auto spec = chain::to_chain_spec(model, 8);
    auto H = chain::build_hamiltonian(spec, gens);
    double width = spectra::level_width(H);
    for (int N : {1, 2, 4}) {
        auto parts = chain::split_partition(spec, chain::make_partition(N, 8), gens);
        double ratio = spectra::interaction_strength(parts.interaction) / width;
        equality_gap =
            std::max(equality_gap, std::abs(ratio * std::sqrt(static_cast<double>(N)) - 1.0));
    }
    bool pass = summary.scaling_violations == 0 && equality_gap < 1e-12;
    return {pass, fmt("%g bound violations in 100 realizations; zero-field equality gap %.2e "
                      "(tol 1e-12)",
                      static_cast<double>(summary.scaling_violations), equality_gap)};
}

// Check 3: trace-based level width and interaction strength match their
// coefficient closed forms on every realization of the sweep.
Outcome check_closed_forms(const experiments::SweepSummary& summary) {
    double worst = std::max(summary.max_width_residual, summary.max_interaction_residual);
    return {worst < 1e-10, fmt("max relative residual %.2e (tol 1e-10)", worst)};
}

// Check 4: the mean level width sits near 5 lambda at lambda = delta_e.
Outcome check_width_average(const experiments::SweepSummary& summary) {
    double value = summary.mean_width / summary.lambda;
    return {value > 4.7 && value < 5.5,
            fmt("mean width / lambda = %.4f (window 4.7 .. 5.5)", value)};
}

// Check 5: subgroups are close to canonical where sqrt(N) dominates
// beta lambda, and the distance shrinks as the groups grow.
Outcome check_distance_cells(const experiments::SweepSummary& summary) {
    double worst = 0.0;
    int qualifying = 0;
    for (const auto& cell : summary.cells)
        if (cell.qualifies) {
            ++qualifying;
            worst = std::max(worst, cell.mean_dist);
        }
    double monotone = static_cast<double>(summary.monotone_pairs) /
                      static_cast<double>(summary.monotone_total);
    bool pass = qualifying == 6 && worst < 0.1 && monotone >= 0.9;
    return {pass, fmt("worst qualifying-cell mean distance %.4f (tol 0.1); shrinking with N "
                      "in %.1f%% of cases (need 90%%)",
                      worst, 100.0 * monotone)};
}

// Check 6: the spectral temperature recovers the global one on the same
// cells and never overshoots it.
Outcome check_spectral_cells(const experiments::SweepSummary& summary) {
    double worst = 1.0;
    for (const auto& cell : summary.cells)
        if (cell.qualifies) worst = std::min(worst, cell.mean_beta_ratio);
    bool pass = worst > 0.9 && summary.max_beta_ratio <= 1.0 + 1e-9;
    return {pass, fmt("worst qualifying-cell mean ratio %.4f (need 0.9); max ratio %.12f "
                      "(cap 1 + 1e-9)",
                      worst, summary.max_beta_ratio)};
}

// Check 7: with the inverse temperature tuned to half the interaction
// strength, almost no overlap weight survives outside the exponential
// envelope.
Outcome check_decay_envelope(const experiments::RealizationResult& profiled) {
    double fraction =
        profiled.profile_tail == 0
            ? 0.0
            : static_cast<double>(profiled.profile_violations) /
                  static_cast<double>(profiled.profile_tail);
    return {profiled.profile_pass, fmt("%.2f%% of %g tail samples above the envelope "
                                       "(cap 5%%)",
                                       100.0 * fraction,
                                       static_cast<double>(profiled.profile_tail))};
}

// Check 8: decoupled groups are exactly canonical at the global
// temperature, and infinite temperature is exact at any coupling.
Outcome check_exact_limits() {
    auto gens = ops::build_generators(2);

    double worst_dist = 0.0;
    double worst_beta = 0.0;
    {
        auto model = chain::sample_random_model(1, 0.0);
        auto spec = chain::to_chain_spec(model, 8);
        auto H = chain::build_hamiltonian(spec, gens);
        auto total = spectra::diagonalize(H);
        double width = spectra::level_width(H);
        double beta = 0.7;
        auto rho = thermal::canonical_state(total, beta);
        for (int N : {1, 2, 4}) {
            auto basis =
                thermal::build_product_basis(spec, chain::make_partition(N, 8), gens);
            auto rho0 = thermal::product_canonical(basis, beta);
            worst_dist = std::max(worst_dist, thermal::state_distance(rho, rho0));
            auto occ = thermal::group_occupations(rho, basis, 1, kSpectralTol * width);
            double beta_spec = thermal::spectral_temperature(occ.energies, occ.probabilities,
                                                             occ.multiplicities);
            worst_beta = std::max(worst_beta, std::abs(beta_spec / beta - 1.0));
        }
    }

    double infinite_temp_dist = 0.0;
    {
        auto model = chain::sample_random_model(1, 1.0);
        auto spec = chain::to_chain_spec(model, 8);
        auto H = chain::build_hamiltonian(spec, gens);
        auto total = spectra::diagonalize(H);
        auto rho = thermal::canonical_state(total, 0.0);
        for (int N : {1, 2, 4}) {
            auto basis =
                thermal::build_product_basis(spec, chain::make_partition(N, 8), gens);
            auto rho0 = thermal::product_canonical(basis, 0.0);
            infinite_temp_dist = std::max(infinite_temp_dist,
                                          thermal::state_distance(rho, rho0));
        }
    }

    bool pass = worst_dist < 1e-9 && worst_beta < 1e-9 && infinite_temp_dist < 1e-12;
    return {pass, fmt("decoupled: dist %.2e, beta gap %.2e (tol 1e-9); infinite-T dist %.2e "
                      "(tol 1e-12)",
                      worst_dist, worst_beta, infinite_temp_dist)};
}

// Check 9: the two-outcome average temperature inverts canonical
// populations exactly over random spectra and temperatures.
Outcome check_temperature_oracle() {
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> gap(0.1, 1.0);
    std::uniform_real_distribution<double> temp(0.1, 3.0);
    double worst = 0.0;
    for (int round = 0; round < 20; ++round) {
        int levels = 3 + static_cast<int>(rng() % 5);
        RealVector energies(levels);
        double e = 0.0;
        for (int i = 0; i < levels; ++i) {
            energies(i) = e;
            e += gap(rng);
        }
        double beta = temp(rng);
        RealVector populations = thermal::canonical_populations(energies, beta);
        double recovered = thermal::spectral_temperature(energies, populations);
        worst = std::max(worst, std::abs(recovered / beta - 1.0));
    }
    return {worst < 1e-9, fmt("max relative error %.2e over 20 draws (tol 1e-9)", worst)};
}

// Check 10: the sweep's CSV products are byte-identical across reruns
// and thread counts.
Outcome check_reproducibility() {
    fs::path dir = fs::temp_directory_path() / "thermoscale_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::path cfg = dir / "run.cfg";
    {
        std::ofstream out(cfg, std::ios::binary);
        out << "L = 8\nrealizations = 25\n";
    }
    auto first = (dir / "a").string();
    auto second = (dir / "b").string();
    if (cli::run_cli({"sweep", "--config", cfg.string(), "--out", first, "--threads", "1"}) !=
        0)
        return {false, "first sweep invocation failed"};
    if (cli::run_cli({"sweep", "--config", cfg.string(), "--out", second, "--threads", "4"}) !=
        0)
        return {false, "second sweep invocation failed"};

    int matched = 0;
    for (const char* name : {"fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv", "summary.csv"}) {
        std::ifstream a(fs::path(first) / name, std::ios::binary);
        std::ifstream b(fs::path(second) / name, std::ios::binary);
        std::ostringstream sa;
        std::ostringstream sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        if (!a || !b || sa.str().empty() || sa.str() != sb.str())
            return {false, std::string("mismatch or missing content in ") + name};
        ++matched;
    }
    return {true, fmt("%g files byte-identical across 1-thread and 4-thread runs",
                      static_cast<double>(matched))};
}

}  // namespace

int main() {
    struct Entry {
        const char* label;
        std::function<Outcome()> run;
    };

    std::optional<experiments::SweepOutput> sweep;
    std::string sweep_error;
    try {
        experiments::ExperimentConfig config;
        sweep = experiments::run_sweep(config, pick_threads());
    } catch (const std::exception& e) {
        sweep_error = e.what();
    }

    auto summary_check = [&](Outcome (*fn)(const experiments::SweepSummary&)) {
        return [&, fn]() -> Outcome {
            if (!sweep) return {false, "default sweep failed: " + sweep_error};
            return fn(sweep->summary);
        };
    };

    std::vector<Entry> entries = {
        {"conditional second-moment identity", check_moment_identity},
        {"interaction scaling bound", summary_check(check_scaling_bound)},
        {"closed-form energy scales", summary_check(check_closed_forms)},
        {"mean level width near 5 lambda", summary_check(check_width_average)},
        {"subgroup distance cells", summary_check(check_distance_cells)},
        {"spectral temperature cells", summary_check(check_spectral_cells)},
        {"overlap decay envelope",
         [&]() -> Outcome {
             if (!sweep) return {false, "default sweep failed: " + sweep_error};
             return check_decay_envelope(sweep->results.front());
         }},
        {"exact decoupled and infinite-T limits", check_exact_limits},
        {"temperature inversion oracle", check_temperature_oracle},
        {"byte-identical sweep output", check_reproducibility},
    };

    int failures = 0;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        Outcome outcome;
        try {
            outcome = entries[k].run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) ++failures;
        std::printf("criterion %2zu  %-40s %s  %s\n", k + 1, entries[k].label,
                    outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
    }

    if (failures) std::printf("%d of 10 criteria failed\n", failures);
    else std::printf("all 10 criteria passed\n");
    return failures == 0 ? 0 : 1;
}
