#include "thermoscale/cli.hpp"

#include "CLI11.hpp"

#include <cerrno>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace thermoscale {
namespace cli {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& token) {
    std::string t = trim(token);
    char* end = nullptr;
    errno = 0;
    double value = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw std::invalid_argument(key + ": cannot parse '" + token + "' as a number");
    return value;
}

long long parse_integer(const std::string& key, const std::string& token) {
    std::string t = trim(token);
    char* end = nullptr;
    errno = 0;
    long long value = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw std::invalid_argument(key + ": cannot parse '" + token + "' as an integer");
    return value;
}

int parse_int(const std::string& key, const std::string& token) {
    long long value = parse_integer(key, token);
    if (value < INT_MIN || value > INT_MAX)
        throw std::invalid_argument(key + ": value out of range");
    return static_cast<int>(value);
}

std::uint64_t parse_seed(const std::string& key, const std::string& token) {
    std::string t = trim(token);
    if (!t.empty() && t[0] == '-')
        throw std::invalid_argument(key + ": seed must be non-negative");
    char* end = nullptr;
    errno = 0;
    unsigned long long value = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw std::invalid_argument(key + ": cannot parse '" + token + "' as a seed");
    return value;
}

std::vector<std::string> split_list(const std::string& key, const std::string& token) {
    std::vector<std::string> items;
    std::string rest = token;
    for (;;) {
        auto comma = rest.find(',');
        items.push_back(trim(rest.substr(0, comma)));
        if (items.back().empty())
            throw std::invalid_argument(key + ": empty list entry");
        if (comma == std::string::npos) break;
        rest = rest.substr(comma + 1);
    }
    return items;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& token) {
    std::vector<double> values;
    for (const auto& item : split_list(key, token)) values.push_back(parse_double(key, item));
    return values;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& token) {
    std::vector<int> values;
    for (const auto& item : split_list(key, token)) values.push_back(parse_int(key, item));
    return values;
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

const char* plot_script_text(const std::string& figure) {
    if (figure == "fig1")
        return "# interaction strength over level width against group size\n"
               "set datafile separator ','\n"
               "set xlabel 'N'\n"
               "set ylabel 'interaction rms / level width'\n"
               "set key outside\n"
               "plot 'fig1.csv' skip 1 using 2:3 with points pt 7 ps 0.5 title 'realizations', \\\n"
               "     'fig1.csv' skip 1 using 2:4 with lines lw 2 title 'N**(-1/2)'\n";
    if (figure == "fig2")
        return "# overlap weight times level density against the rescaled gap\n"
               "set datafile separator ','\n"
               "set xlabel 'x'\n"
               "set ylabel 'w(x) eta(x)'\n"
               "set key outside\n"
               "plot 'fig2.csv' skip 1 using 2:3 with points pt 7 ps 0.3 title 'samples', \\\n"
               "     'fig2.csv' skip 1 using 2:4 with points pt 1 ps 0.3 title 'envelope'\n";
    if (figure == "fig3")
        return "# subgroup distance from the same-temperature canonical state\n"
               "set datafile separator ','\n"
               "set xlabel 'beta lambda'\n"
               "set ylabel 'distance'\n"
               "set key outside\n"
               "plot 'fig3.csv' skip 1 using 3:4:2 with points pt 7 ps 0.5 palette title 'by N'\n";
    if (figure == "fig4")
        return "# spectral temperature over the global temperature\n"
               "set datafile separator ','\n"
               "set xlabel 'beta lambda'\n"
               "set ylabel 'beta_spec / beta'\n"
               "set key outside\n"
               "plot 'fig4.csv' skip 1 using 3:4:2 with points pt 7 ps 0.5 palette title 'by N'\n";
    throw std::invalid_argument("unknown figure id: " + figure);
}

struct IdentityResidual {
    const char* name;
    double value;
    double tol;
};

// Re-derives the hard identities through the public API on fresh draws,
// independently of the bookkeeping inside the sweep.
std::vector<IdentityResidual> oracle_residuals(const experiments::ExperimentConfig& config,
                                               int rounds) {
    double round_trip = 0.0;
    double width_routes = 0.0;
    double strength_routes = 0.0;
    double reconstruction = 0.0;
    double first_moment = 0.0;
    double second_moment = 0.0;

    auto gens = ops::build_generators(config.n);
    for (int r = 0; r < rounds; ++r) {
        auto model = chain::sample_random_model(config.base_seed + static_cast<std::uint64_t>(r),
                                                config.lambda);
        auto spec = chain::to_chain_spec(model, config.L);
        auto H = chain::build_hamiltonian(spec, gens);

        auto [local, coupling] = chain::extract_coefficients(H, gens);
        round_trip = std::max(round_trip, (local - spec.local).cwiseAbs().maxCoeff());
        round_trip = std::max(round_trip, (coupling - spec.coupling).cwiseAbs().maxCoeff());

        double width_trace = spectra::level_width(H);
        double width_closed = spectra::level_width(spec);
        width_routes =
            std::max(width_routes, std::abs(width_trace - width_closed) / width_closed);

        auto total = spectra::diagonalize(H);
        for (int N : config.partitions) {
            auto partition = chain::make_partition(N, config.L);
            auto parts = chain::split_partition(spec, partition, gens);
            double strength_trace = spectra::interaction_strength(parts.interaction);
            double strength_closed = spectra::interaction_strength(spec, partition);
            double strength_scale = std::max(strength_closed, kSpectralTol * width_closed);
            strength_routes = std::max(
                strength_routes, std::abs(strength_trace - strength_closed) / strength_scale);
            reconstruction = std::max(
                reconstruction, (parts.group_part.mat + parts.interaction.mat - H.mat)
                                    .cwiseAbs()
                                    .maxCoeff());

            auto basis = thermal::build_product_basis(spec, partition, gens);
            auto moments = thermal::interaction_moments(basis, parts.interaction);
            RealMatrix weights = (basis.states.adjoint() * total.states).cwiseAbs2();
            double moment_scale = std::max(strength_closed * strength_closed,
                                           kSpectralTol * width_closed * kSpectralTol *
                                               width_closed);
            for (Eigen::Index j = 0; j < basis.dim(); ++j) {
                Eigen::ArrayXd diffs = total.energies.array() - basis.energies(j);
                Eigen::ArrayXd w = weights.row(j).transpose().array();
                double second = (diffs.square() * w).sum();
                double first = (total.energies.array() * w).sum() - basis.energies(j);
                second_moment = std::max(
                    second_moment, std::abs(second - moments.second(j)) / moment_scale);
                first_moment = std::max(
                    first_moment, std::abs(first - moments.first(j)) / strength_scale);
            }
        }
    }

    return {{"coefficient_round_trip", round_trip, kTraceTol},
            {"level_width_routes", width_routes, kTraceTol},
            {"interaction_strength_routes", strength_routes, kTraceTol},
            {"split_reconstruction", reconstruction, kConstructionTol},
            {"first_moment_identity", first_moment, kSpectralTol},
            {"conditional_moment_identity", second_moment, kSpectralTol}};
}

int run_check(const experiments::ExperimentConfig& config) {
    auto residuals = oracle_residuals(config, 3);
    bool ok = true;
    for (const auto& r : residuals) {
        bool pass = r.value <= r.tol;
        ok = ok && pass;
        std::printf("%-28s %11.3e  tol %8.1e  %s\n", r.name, r.value, r.tol,
                    pass ? "PASS" : "FAIL");
    }
    return ok ? 0 : 2;
}

int resolve_threads(const std::optional<int>& flag) {
    int value = 1;
    if (flag)
        value = *flag;
    else if (const char* env = std::getenv("THERMOSCALE_THREADS"))
        value = parse_int("THERMOSCALE_THREADS", env);
    if (value < 1) throw std::invalid_argument("thread count must be positive");
    return value;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::istringstream stream(text);
    std::string line;
    int number = 0;
    while (std::getline(stream, line)) {
        ++number;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(number) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(number) +
                                        ": missing key");
        if (value.empty())
            throw std::invalid_argument("config line " + std::to_string(number) +
                                        ": missing value for '" + key + "'");
        for (const auto& [seen, ignored] : pairs)
            if (seen == key)
                throw std::invalid_argument("config line " + std::to_string(number) +
                                            ": duplicate key '" + key + "'");
        pairs.emplace_back(key, value);
    }
    return pairs;
}

experiments::ExperimentConfig config_from_text(const std::string& text) {
    experiments::ExperimentConfig config;
    for (const auto& [key, value] : parse_config_text(text)) {
        if (key == "L")
            config.L = parse_int(key, value);
        else if (key == "n")
            config.n = parse_int(key, value);
        else if (key == "lambda")
            config.lambda = parse_double(key, value);
        else if (key == "beta_lambdas")
            config.beta_lambdas = parse_double_list(key, value);
        else if (key == "betas")
            config.betas = parse_double_list(key, value);
        else if (key == "partitions")
            config.partitions = parse_int_list(key, value);
        else if (key == "realizations")
            config.realizations = parse_int(key, value);
        else if (key == "base_seed")
            config.base_seed = parse_seed(key, value);
        else if (key == "bin_width")
            config.bin_width = parse_double(key, value);
        else if (key == "envelope_amplitude")
            config.envelope_amplitude = parse_double(key, value);
        else if (key == "profile_realization")
            config.profile_realization = parse_int(key, value);
        else
            throw std::invalid_argument("unknown config key: " + key);
    }
    return config;
}

experiments::ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_text(buffer.str());
}

std::string format_csv(const experiments::DataTable& table) {
    if (table.columns.size() != table.integer_column.size())
        throw std::logic_error("table column flags out of step with the header");
    std::string out;
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
        if (k) out += ',';
        out += table.columns[k];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::logic_error("table row length out of step with the header");
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            if (table.integer_column[k]) {
                char buf[24];
                std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(row[k]));
                out += buf;
            } else {
                out += format_double(row[k]);
            }
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::string& path, const experiments::DataTable& table) {
    write_text_file(path, format_csv(table));
}

void write_summary_csv(const std::string& path,
                       const std::vector<std::pair<std::string, double>>& rows) {
    std::string out = "statistic,value\n";
    for (const auto& [name, value] : rows) {
        out += name;
        out += ',';
        out += format_double(value);
        out += '\n';
    }
    write_text_file(path, out);
}

void write_plot_script(const std::string& path, const std::string& figure) {
    write_text_file(path, plot_script_text(figure));
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"coupled-chain thermalization laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<int> realization;
    std::string figure;

    CLI::App* scaling =
        app.add_subcommand("scaling", "interaction-to-width ratios for one realization");
    CLI::App* overlaps =
        app.add_subcommand("overlaps", "overlap decay samples for one realization");
    CLI::App* distance =
        app.add_subcommand("distance", "subgroup distances for one realization");
    CLI::App* spectral =
        app.add_subcommand("spectral-temp", "spectral temperatures for one realization");
    CLI::App* sweep =
        app.add_subcommand("sweep", "multi-realization sweep with CSV and plot output");
    CLI::App* check = app.add_subcommand("check", "verify the built-in numerical identities");

    for (CLI::App* sub : {scaling, overlaps, distance, spectral, sweep, check}) {
        sub->add_option("--config", config_path, "experiment config file");
        sub->add_option("--seed", seed, "override the base seed");
    }
    for (CLI::App* sub : {scaling, overlaps, distance, spectral, sweep}) {
        sub->add_option("--out", out_dir, "output directory (default .)");
        sub->add_option("--realization", realization, "realization index");
    }
    sweep->add_option("--threads", threads,
                      "worker threads (default $THERMOSCALE_THREADS, then 1)");
    sweep->add_option("--figure", figure, "write only fig1|fig2|fig3|fig4");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        experiments::ExperimentConfig config =
            config_path.empty() ? experiments::ExperimentConfig{} : load_config(config_path);
        if (seed) config.base_seed = *seed;

        namespace fs = std::filesystem;
        auto out_path = [&](const std::string& name) {
            fs::create_directories(out_dir);
            return (fs::path(out_dir) / name).string();
        };
        auto announce = [](const std::string& path) {
            std::printf("wrote %s\n", path.c_str());
        };

        if (check->parsed()) return run_check(config);

        if (sweep->parsed()) {
            if (realization) config.profile_realization = *realization;
            if (!figure.empty() && figure != "fig1" && figure != "fig2" && figure != "fig3" &&
                figure != "fig4")
                throw std::invalid_argument("unknown figure id: " + figure);
            auto result = experiments::run_sweep(config, resolve_threads(threads));
            for (const char* name : {"fig1", "fig2", "fig3", "fig4"}) {
                if (!figure.empty() && figure != name) continue;
                std::string csv = out_path(std::string(name) + ".csv");
                write_csv(csv, experiments::emit_figure_data(config, result.results, name));
                announce(csv);
                std::string script = out_path(std::string(name) + ".gp");
                write_plot_script(script, name);
                announce(script);
            }
            std::string summary = out_path("summary.csv");
            write_summary_csv(summary, experiments::summary_rows(result.summary));
            announce(summary);
            return 0;
        }

        if (overlaps->parsed()) {
            if (realization) config.profile_realization = *realization;
            std::string csv = out_path("overlaps.csv");
            write_csv(csv, experiments::emit_figure_data(config, {}, "fig2"));
            announce(csv);
            return 0;
        }

        int index = realization.value_or(0);
        auto result = experiments::run_realization(config, index);
        if (scaling->parsed()) {
            experiments::DataTable table;
            table.columns = {"N", "interaction_rms", "level_width", "ratio",
                             "reference_inv_sqrtN"};
            table.integer_column = {true, false, false, false, false};
            for (const auto& s : result.scales)
                table.rows.push_back({static_cast<double>(s.group_size), s.interaction_rms,
                                      result.level_width, s.ratio, s.reference});
            std::string csv = out_path("scaling.csv");
            write_csv(csv, table);
            announce(csv);
            return 0;
        }

        bool want_distance = distance->parsed();
        std::string csv = out_path(want_distance ? "distance.csv" : "spectral_temp.csv");
        write_csv(csv, experiments::emit_figure_data(config, {result},
                                                     want_distance ? "fig3" : "fig4"));
        announce(csv);
        return 0;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numerical invariant failed: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.emplace_back("thermoscale");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const auto& s : full) argv.push_back(s.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace cli
}  // namespace thermoscale
