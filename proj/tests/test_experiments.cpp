#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "thermoscale/experiments.hpp"

#include <cmath>
#include <stdexcept>

using namespace thermoscale;

namespace {

experiments::ExperimentConfig small_config() {
    experiments::ExperimentConfig config;
    config.L = 4;
    config.partitions = {1, 2};
    config.beta_lambdas = {0.1, 0.3};
    config.realizations = 2;
    return config;
}

double find_row(const std::vector<std::pair<std::string, double>>& rows,
                const std::string& name) {
    for (const auto& [key, value] : rows)
        if (key == name) return value;
    FAIL("missing summary row: ", name);
    return 0.0;
}

}  // namespace

TEST_CASE("config validation accepts the defaults") {
    experiments::ExperimentConfig config;
    CHECK_NOTHROW(experiments::validate(config));
}

TEST_CASE("config validation rejects bad shapes") {
    auto broken = [](auto mutate) {
        experiments::ExperimentConfig config;
        config.L = 4;
        config.realizations = 2;
        mutate(config);
        CHECK_THROWS_AS(experiments::validate(config), std::invalid_argument);
    };
    broken([](auto& c) { c.L = 1; });
    broken([](auto& c) { c.n = 3; });
    broken([](auto& c) { c.lambda = -1.0; });
    broken([](auto& c) { c.realizations = 0; });
    broken([](auto& c) { c.partitions = {}; });
    broken([](auto& c) { c.partitions = {2, 1}; });
    broken([](auto& c) { c.partitions = {1, 3}; });
    broken([](auto& c) { c.beta_lambdas = {}; });
    broken([](auto& c) { c.beta_lambdas = {0.1, 0.0}; });
    broken([](auto& c) { c.betas = {-0.5}; });
    broken([](auto& c) { c.lambda = 0.0; });
    broken([](auto& c) { c.bin_width = -1.0; });
    broken([](auto& c) { c.envelope_amplitude = 0.0; });
    broken([](auto& c) { c.profile_realization = 2; });
    broken([](auto& c) { c.profile_realization = -1; });
}

TEST_CASE("lambda zero is valid once absolute betas are given") {
    experiments::ExperimentConfig config;
    config.L = 4;
    config.lambda = 0.0;
    config.betas = {0.7};
    config.realizations = 1;
    CHECK_NOTHROW(experiments::validate(config));
}

TEST_CASE("beta grid divides the labels by the coupling strength") {
    experiments::ExperimentConfig config;
    config.lambda = 2.0;
    config.beta_lambdas = {0.1, 0.4};
    auto grid = experiments::beta_grid(config);
    REQUIRE(grid.betas.size() == 2);
    CHECK(grid.betas[0] == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(grid.betas[1] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(grid.labels[0] == 0.1);
    CHECK(grid.labels[1] == 0.4);
}

TEST_CASE("explicit betas override the product grid") {
    experiments::ExperimentConfig config;
    config.lambda = 0.5;
    config.betas = {1.0, 2.0};
    auto grid = experiments::beta_grid(config);
    REQUIRE(grid.betas.size() == 2);
    CHECK(grid.betas[0] == 1.0);
    CHECK(grid.betas[1] == 2.0);
    CHECK(grid.labels[0] == 0.5);
    CHECK(grid.labels[1] == 1.0);

    config.lambda = 0.0;
    grid = experiments::beta_grid(config);
    CHECK(grid.labels[0] == 1.0);
    CHECK(grid.labels[1] == 2.0);
}

TEST_CASE("realization cells match the direct density-matrix route") {
    auto config = small_config();
    config.realizations = 1;
    auto result = experiments::run_realization(config, 0);
    REQUIRE(result.scales.size() == 2);
    REQUIRE(result.cells.size() == 4);

    auto model = chain::sample_random_model(config.base_seed, config.lambda);
    auto spec = chain::to_chain_spec(model, config.L);
    auto gens = ops::build_generators(config.n);
    auto H = chain::build_hamiltonian(spec, gens);
    auto total = spectra::diagonalize(H);
    CHECK((result.c - model.c).cwiseAbs().maxCoeff() == 0.0);

    for (std::size_t k = 0; k < 2; ++k) {
        int N = config.partitions[k];
        auto partition = chain::make_partition(N, config.L);
        auto basis = thermal::build_product_basis(spec, partition, gens);
        for (std::size_t bi = 0; bi < 2; ++bi) {
            const auto& cell = result.cells[k * 2 + bi];
            CHECK(cell.group_size == N);
            CHECK(cell.beta_label == config.beta_lambdas[bi]);

            double beta = config.beta_lambdas[bi] / config.lambda;
            auto rho = thermal::canonical_state(total, beta);
            auto rho0 = thermal::product_canonical(basis, beta);
            double direct = thermal::state_distance(rho, rho0);
            CHECK(std::abs(cell.dist - direct) < 1e-10);

            auto occ = thermal::group_occupations(rho, basis, 1,
                                                  kSpectralTol * result.level_width);
            double direct_spec = thermal::spectral_temperature(occ.energies, occ.probabilities,
                                                               occ.multiplicities);
            CHECK(std::abs(cell.beta_spec - direct_spec) < 1e-9);
            CHECK(cell.beta_ratio == cell.beta_spec / beta);
        }
    }
}

TEST_CASE("realization scales stay inside the group-count bound") {
    auto config = small_config();
    for (int index = 0; index < config.realizations; ++index) {
        auto result = experiments::run_realization(config, index);
        CHECK(result.level_width > 0.0);
        CHECK(std::abs(result.level_width - result.level_width_closed) <
              kTraceTol * result.level_width_closed);
        for (const auto& s : result.scales) {
            CHECK_FALSE(s.bound_violated);
            CHECK(s.ratio <= s.reference + 1e-12);
            CHECK(s.moment_residual < 1e-9);
        }
    }
}

TEST_CASE("realizations are keyed by seed plus index") {
    auto config = small_config();
    auto a = experiments::run_realization(config, 1);
    auto b = experiments::run_realization(config, 1);
    CHECK((a.c - b.c).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.seed == config.base_seed + 1);

    auto other = experiments::run_realization(config, 0);
    CHECK((a.c - other.c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("sweep output does not depend on the thread count") {
    auto config = small_config();
    config.realizations = 5;
    auto serial = experiments::run_sweep(config, 1);
    auto parallel = experiments::run_sweep(config, 3);
    REQUIRE(serial.results.size() == 5);
    REQUIRE(parallel.results.size() == 5);

    for (std::size_t i = 0; i < serial.results.size(); ++i) {
        const auto& a = serial.results[i];
        const auto& b = parallel.results[i];
        CHECK(a.index == b.index);
        CHECK((a.c - b.c).cwiseAbs().maxCoeff() == 0.0);
        CHECK(a.level_width == b.level_width);
        REQUIRE(a.cells.size() == b.cells.size());
        for (std::size_t k = 0; k < a.cells.size(); ++k) {
            CHECK(a.cells[k].dist == b.cells[k].dist);
            CHECK(a.cells[k].beta_spec == b.cells[k].beta_spec);
        }
    }

    auto rows_a = experiments::summary_rows(serial.summary);
    auto rows_b = experiments::summary_rows(parallel.summary);
    REQUIRE(rows_a.size() == rows_b.size());
    for (std::size_t k = 0; k < rows_a.size(); ++k) {
        CHECK(rows_a[k].first == rows_b[k].first);
        CHECK(rows_a[k].second == rows_b[k].second);
    }
}

TEST_CASE("summary aggregates mirror the per-realization records") {
    auto config = small_config();
    auto out = experiments::run_sweep(config);
    const auto& summary = out.summary;
    CHECK(summary.realizations == 2);
    CHECK(summary.lambda == config.lambda);

    double mean = 0.0;
    for (const auto& r : out.results) mean += r.level_width / 2.0;
    CHECK(summary.mean_width == doctest::Approx(mean).epsilon(1e-15));
    CHECK(summary.scaling_violations == 0);
    CHECK(summary.max_width_residual < kTraceTol);
    CHECK(summary.max_interaction_residual < kTraceTol);
    CHECK(summary.max_moment_residual < 1e-9);

    REQUIRE(summary.ratios.size() == 2);
    CHECK(summary.ratios[0].group_size == 1);
    CHECK(summary.ratios[1].reference == doctest::Approx(1.0 / std::sqrt(2.0)));

    REQUIRE(summary.cells.size() == 4);
    double acc = 0.0;
    for (const auto& r : out.results) acc += r.cells[1].dist / 2.0;
    CHECK(summary.cells[1].mean_dist == doctest::Approx(acc).epsilon(1e-15));

    // sqrt(N) > 5 beta lambda holds only at beta lambda = 0.1 here:
    // sqrt(2) = 1.41 misses the 5 * 0.3 = 1.5 cut.
    CHECK(summary.cells[0].qualifies);
    CHECK_FALSE(summary.cells[1].qualifies);
    CHECK(summary.cells[2].qualifies);
    CHECK_FALSE(summary.cells[3].qualifies);

    CHECK(summary.monotone_total == 4);
    CHECK(summary.monotone_pairs <= summary.monotone_total);
}

TEST_CASE("decoupled groups are exactly thermal in the sweep") {
    experiments::ExperimentConfig config;
    config.L = 4;
    config.lambda = 0.0;
    config.betas = {0.7, 1.9};
    config.partitions = {1, 2};
    config.realizations = 1;
    auto result = experiments::run_realization(config, 0);
    for (const auto& s : result.scales) {
        CHECK(s.interaction_rms == 0.0);
        CHECK(s.ratio == 0.0);
        CHECK_FALSE(s.bound_violated);
    }
    for (const auto& cell : result.cells) {
        // The population-route distance takes a square root of cancelling
        // O(1) terms, so its floor is sqrt(machine epsilon) rather than
        // the 1e-15 the direct matrix difference reaches.
        CHECK(cell.dist < 1e-7);
        CHECK(cell.beta_ratio == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(cell.max_correction == 0.0);
    }
    CHECK(result.profile_tail == 0);
    CHECK(result.profile_pass);
}

TEST_CASE("figure tables carry one row per record") {
    auto config = small_config();
    auto out = experiments::run_sweep(config);

    auto fig1 = experiments::emit_figure_data(config, out.results, "fig1");
    CHECK(fig1.columns ==
          std::vector<std::string>{"realization", "N", "ratio", "reference_inv_sqrtN"});
    CHECK(fig1.rows.size() == 4);
    CHECK(fig1.integer_column[0]);
    CHECK_FALSE(fig1.integer_column[2]);
    CHECK(fig1.rows[3][1] == 2.0);
    CHECK(fig1.rows[3][3] == doctest::Approx(1.0 / std::sqrt(2.0)));

    auto fig3 = experiments::emit_figure_data(config, out.results, "fig3");
    CHECK(fig3.rows.size() == 8);
    CHECK(fig3.columns[3] == "dist");
    CHECK(fig3.rows[0][3] == out.results[0].cells[0].dist);

    auto fig4 = experiments::emit_figure_data(config, out.results, "fig4");
    CHECK(fig4.columns[3] == "beta_spec_over_beta");
    CHECK(fig4.rows[5][3] == out.results[1].cells[1].beta_ratio);

    auto fig2 = experiments::emit_figure_data(config, out.results, "fig2");
    CHECK(fig2.columns ==
          std::vector<std::string>{"j_index", "x", "weighted_density", "envelope"});
    CHECK(fig2.rows.size() > 0);
    for (const auto& row : fig2.rows) CHECK(row[3] <= config.envelope_amplitude + 1e-15);

    CHECK_THROWS_AS(experiments::emit_figure_data(config, out.results, "fig9"),
                    std::invalid_argument);
    CHECK_THROWS_AS(experiments::emit_figure_data(config, {}, "fig1"), std::invalid_argument);
}

TEST_CASE("summary rows expose the headline statistics by name") {
    auto config = small_config();
    auto out = experiments::run_sweep(config);
    auto rows = experiments::summary_rows(out.summary);

    CHECK(find_row(rows, "realizations") == 2.0);
    CHECK(find_row(rows, "lambda") == 1.0);
    CHECK(find_row(rows, "mean_level_width") == out.summary.mean_width);
    CHECK(find_row(rows, "mean_level_width_over_lambda") ==
          out.summary.mean_width / config.lambda);
    CHECK(find_row(rows, "scaling_bound_violations") == 0.0);
    CHECK(find_row(rows, "mean_ratio_N2") == out.summary.ratios[1].mean_ratio);
    CHECK(find_row(rows, "mean_dist_N2_bl0.1") == out.summary.cells[2].mean_dist);
    CHECK(find_row(rows, "mean_beta_ratio_N1_bl0.3") == out.summary.cells[1].mean_beta_ratio);
    double fraction = find_row(rows, "dist_monotone_fraction");
    CHECK(fraction >= 0.0);
    CHECK(fraction <= 1.0);
    CHECK(find_row(rows, "profile_pass_fraction") >= 0.0);
}
