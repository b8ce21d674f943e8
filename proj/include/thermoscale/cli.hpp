// cli.hpp -- config file parsing, CSV serialization, and the command-line
// front end over the sweep and single-realization runs.

#pragma once

#include "thermoscale/experiments.hpp"

#include <string>
#include <utility>
#include <vector>

namespace thermoscale {
namespace cli {

// key = value pairs in file order. '#' starts a comment, blank lines are
// skipped, keys may not repeat.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text);

// Applies the pairs on top of the built-in defaults. Unknown keys are
// hard errors so a typo cannot silently fall back to a default.
experiments::ExperimentConfig config_from_text(const std::string& text);

experiments::ExperimentConfig load_config(const std::string& path);

// Comma-separated table with a header row, '\n' line endings, '.' decimal
// separator, and doubles at 17 significant digits so they round-trip.
std::string format_csv(const experiments::DataTable& table);

void write_csv(const std::string& path, const experiments::DataTable& table);

void write_summary_csv(const std::string& path,
                       const std::vector<std::pair<std::string, double>>& rows);

// Gnuplot script consuming the matching CSV in the same directory.
void write_plot_script(const std::string& path, const std::string& figure);

// Subcommands: scaling, overlaps, distance, spectral-temp, sweep, check.
// Exit 0 on success, 1 on configuration or usage errors, 2 when a hard
// numerical identity fails.
int run_cli(int argc, const char* const* argv);

// Same, for callers that hold the arguments without a program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace cli
}  // namespace thermoscale
