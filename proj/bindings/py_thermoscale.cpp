// Python bindings over the chain operators, spectra, thermal-state
// machinery, and the sweep driver. Matrices cross the boundary as numpy
// arrays through pybind11's Eigen support.

#include "thermoscale/cli.hpp"
#include "thermoscale/experiments.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace thermoscale;

PYBIND11_MODULE(_thermoscale, m) {
    m.doc() = "numerical laboratory for chains of coupled n-level systems";

    py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

    m.attr("CONSTRUCTION_TOL") = kConstructionTol;
    m.attr("TRACE_TOL") = kTraceTol;
    m.attr("SPECTRAL_TOL") = kSpectralTol;

    py::class_<ops::GeneratorSet>(m, "GeneratorSet")
        .def_readonly("n", &ops::GeneratorSet::n)
        .def("__len__", &ops::GeneratorSet::count)
        .def("__getitem__", [](const ops::GeneratorSet& g, int alpha) {
            if (alpha < 0 || alpha >= g.count()) throw py::index_error();
            return g.matrices[static_cast<std::size_t>(alpha)];
        });

    py::class_<ops::ChainOperator>(m, "ChainOperator")
        .def_readonly("n", &ops::ChainOperator::n)
        .def_readonly("L", &ops::ChainOperator::L)
        .def_readonly("mat", &ops::ChainOperator::mat)
        .def("dim", &ops::ChainOperator::dim);

    m.def("space_dim", &ops::space_dim, py::arg("n"), py::arg("sites"));
    m.def("kron", &ops::kron, py::arg("a"), py::arg("b"));
    m.def("is_hermitian", &ops::is_hermitian, py::arg("m"),
          py::arg("tol") = kConstructionTol);
    m.def("build_generators", &ops::build_generators, py::arg("n"));
    m.def("embed_single", &ops::embed_single, py::arg("gens"), py::arg("alpha"),
          py::arg("site"), py::arg("L"));
    m.def("embed_pair", &ops::embed_pair, py::arg("gens"), py::arg("alpha"), py::arg("beta"),
          py::arg("site"), py::arg("L"));
    m.def("embed_block", &ops::embed_block, py::arg("block"), py::arg("n"),
          py::arg("first_site"), py::arg("block_sites"), py::arg("L"));
    m.def("partial_trace",
          py::overload_cast<const Matrix&, int, int, const std::vector<int>&>(
              &ops::partial_trace),
          py::arg("full"), py::arg("n"), py::arg("L"), py::arg("keep"));

    py::class_<chain::ChainSpec>(m, "ChainSpec")
        .def(py::init<>())
        .def_readwrite("n", &chain::ChainSpec::n)
        .def_readwrite("L", &chain::ChainSpec::L)
        .def_readwrite("local", &chain::ChainSpec::local)
        .def_readwrite("coupling", &chain::ChainSpec::coupling);

    py::class_<chain::NumericModel>(m, "NumericModel")
        .def(py::init<>())
        .def_readwrite("delta_e", &chain::NumericModel::delta_e)
        .def_readwrite("lambda_", &chain::NumericModel::lambda)
        .def_readwrite("c", &chain::NumericModel::c);

    py::class_<chain::PartitionSpec>(m, "PartitionSpec")
        .def(py::init<>())
        .def_readwrite("group_size", &chain::PartitionSpec::group_size)
        .def_readwrite("group_count", &chain::PartitionSpec::group_count);

    py::class_<chain::SplitHamiltonian>(m, "SplitHamiltonian")
        .def_readonly("group_part", &chain::SplitHamiltonian::group_part)
        .def_readonly("interaction", &chain::SplitHamiltonian::interaction);

    m.def("validate_chain", &chain::validate, py::arg("spec"));
    m.def("make_partition", &chain::make_partition, py::arg("group_size"), py::arg("L"));
    m.def("to_chain_spec", &chain::to_chain_spec, py::arg("model"), py::arg("L"));
    m.def("build_hamiltonian", &chain::build_hamiltonian, py::arg("spec"), py::arg("gens"));
    m.def("extract_coefficients", &chain::extract_coefficients, py::arg("H"), py::arg("gens"),
          py::arg("probe_site") = 1);
    m.def("split_partition", &chain::split_partition, py::arg("spec"), py::arg("partition"),
          py::arg("gens"));
    m.def("build_group_hamiltonian", &chain::build_group_hamiltonian, py::arg("spec"),
          py::arg("group_size"), py::arg("gens"));
    m.def("sample_random_model", &chain::sample_random_model, py::arg("seed"),
          py::arg("lambda_"), py::arg("delta_e") = 1.0);

    py::class_<spectra::Spectrum>(m, "Spectrum")
        .def_readonly("energies", &spectra::Spectrum::energies)
        .def_readonly("states", &spectra::Spectrum::states)
        .def_readonly("mean_energy", &spectra::Spectrum::mean_energy);

    py::class_<spectra::ScalingRow>(m, "ScalingRow")
        .def_readonly("group_size", &spectra::ScalingRow::group_size)
        .def_readonly("ratio", &spectra::ScalingRow::ratio)
        .def_readonly("reference", &spectra::ScalingRow::reference);

    m.def("diagonalize", &spectra::diagonalize, py::arg("H"));
    m.def("level_width", py::overload_cast<const ops::ChainOperator&>(&spectra::level_width),
          py::arg("H"));
    m.def("level_width", py::overload_cast<const chain::ChainSpec&>(&spectra::level_width),
          py::arg("spec"));
    m.def("interaction_strength",
          py::overload_cast<const ops::ChainOperator&>(&spectra::interaction_strength),
          py::arg("interaction"));
    m.def("interaction_strength",
          py::overload_cast<const chain::ChainSpec&, const chain::PartitionSpec&>(
              &spectra::interaction_strength),
          py::arg("spec"), py::arg("partition"));
    m.def("scaling_ratio", &spectra::scaling_ratio, py::arg("spec"), py::arg("group_sizes"),
          py::arg("gens"));

    py::enum_<thermal::StateBasis>(m, "StateBasis")
        .value("Site", thermal::StateBasis::Site)
        .value("Energy", thermal::StateBasis::Energy)
        .value("Product", thermal::StateBasis::Product);

    py::class_<thermal::DensityMatrix>(m, "DensityMatrix")
        .def(py::init<>())
        .def_readwrite("mat", &thermal::DensityMatrix::mat)
        .def_readwrite("basis", &thermal::DensityMatrix::basis)
        .def("dim", &thermal::DensityMatrix::dim);

    py::class_<thermal::ProductBasis>(m, "ProductBasis")
        .def_readonly("n", &thermal::ProductBasis::n)
        .def_readonly("partition", &thermal::ProductBasis::partition)
        .def_readonly("group_spectrum", &thermal::ProductBasis::group_spectrum)
        .def_readonly("energies", &thermal::ProductBasis::energies)
        .def_readonly("states", &thermal::ProductBasis::states)
        .def("dim", &thermal::ProductBasis::dim)
        .def("sites", &thermal::ProductBasis::sites);

    py::class_<thermal::OverlapDistribution>(m, "OverlapDistribution")
        .def_readonly("j_index", &thermal::OverlapDistribution::j_index)
        .def_readonly("product_energy", &thermal::OverlapDistribution::product_energy)
        .def_readonly("level_energies", &thermal::OverlapDistribution::level_energies)
        .def_readonly("weights", &thermal::OverlapDistribution::weights)
        .def_readonly("conditional_second_moment",
                      &thermal::OverlapDistribution::conditional_second_moment)
        .def_readonly("rescaled_x", &thermal::OverlapDistribution::rescaled_x);

    py::class_<thermal::InteractionMoments>(m, "InteractionMoments")
        .def_readonly("first", &thermal::InteractionMoments::first)
        .def_readonly("second", &thermal::InteractionMoments::second);

    py::class_<thermal::EnergyHistogram>(m, "EnergyHistogram")
        .def_readonly("origin", &thermal::EnergyHistogram::origin)
        .def_readonly("bin_width", &thermal::EnergyHistogram::bin_width)
        .def_readonly("counts", &thermal::EnergyHistogram::counts)
        .def_readonly("total", &thermal::EnergyHistogram::total)
        .def("density_at", &thermal::EnergyHistogram::density_at, py::arg("energy"));

    py::class_<thermal::DecaySample>(m, "DecaySample")
        .def_readonly("x", &thermal::DecaySample::x)
        .def_readonly("weighted_density", &thermal::DecaySample::weighted_density)
        .def_readonly("envelope", &thermal::DecaySample::envelope);

    py::class_<thermal::DecayProfile>(m, "DecayProfile")
        .def_readonly("samples", &thermal::DecayProfile::samples)
        .def_readonly("tail_count", &thermal::DecayProfile::tail_count)
        .def_readonly("tail_violations", &thermal::DecayProfile::tail_violations)
        .def_readonly("pass_", &thermal::DecayProfile::pass);

    py::class_<thermal::DiagonalRecord>(m, "DiagonalRecord")
        .def_readonly("exact", &thermal::DiagonalRecord::exact)
        .def_readonly("zeroth", &thermal::DiagonalRecord::zeroth)
        .def_readonly("truncated", &thermal::DiagonalRecord::truncated)
        .def_readonly("correction_norm", &thermal::DiagonalRecord::correction_norm);

    py::class_<thermal::OffdiagonalProfile>(m, "OffdiagonalProfile")
        .def_readonly("samples", &thermal::OffdiagonalProfile::samples)
        .def_readonly("max_far_magnitude", &thermal::OffdiagonalProfile::max_far_magnitude)
        .def_readonly("mean_diagonal", &thermal::OffdiagonalProfile::mean_diagonal)
        .def_readonly("far_to_diagonal_ratio",
                      &thermal::OffdiagonalProfile::far_to_diagonal_ratio);

    py::class_<thermal::LevelOccupations>(m, "LevelOccupations")
        .def_readonly("energies", &thermal::LevelOccupations::energies)
        .def_readonly("probabilities", &thermal::LevelOccupations::probabilities)
        .def_readonly("multiplicities", &thermal::LevelOccupations::multiplicities);

    m.def("canonical_populations", &thermal::canonical_populations, py::arg("energies"),
          py::arg("beta"));
    m.def("canonical_state", &thermal::canonical_state, py::arg("spectrum"), py::arg("beta"));
    m.def("build_product_basis", &thermal::build_product_basis, py::arg("spec"),
          py::arg("partition"), py::arg("gens"));
    m.def("product_canonical", &thermal::product_canonical, py::arg("basis"), py::arg("beta"));
    m.def("overlap_distribution", &thermal::overlap_distribution, py::arg("total"),
          py::arg("basis"), py::arg("j"));
    m.def("interaction_moments", &thermal::interaction_moments, py::arg("basis"),
          py::arg("interaction"));
    m.def("density_of_states", &thermal::density_of_states, py::arg("energies"),
          py::arg("bin_width"));
    m.def("decay_profile", &thermal::decay_profile, py::arg("dist"), py::arg("dos"),
          py::arg("beta"), py::arg("amplitude") = 0.25);
    m.def("diagonal_comparison", &thermal::diagonal_comparison, py::arg("rho"),
          py::arg("total"), py::arg("basis"), py::arg("interaction"), py::arg("beta"));
    m.def("offdiagonal_profile", &thermal::offdiagonal_profile, py::arg("rho"),
          py::arg("basis"), py::arg("interaction_rms"));
    m.def("state_distance", &thermal::state_distance, py::arg("a"), py::arg("b"));
    m.def("group_occupations", &thermal::group_occupations, py::arg("rho"), py::arg("basis"),
          py::arg("group"), py::arg("cluster_tol") = 0.0);
    m.def("project_group_occupations", &thermal::project_group_occupations,
          py::arg("group_spectrum"), py::arg("reduced"), py::arg("cluster_tol") = 0.0);
    m.def("spectral_temperature", &thermal::spectral_temperature, py::arg("level_energies"),
          py::arg("probabilities"), py::arg("multiplicities") = std::vector<int>{});

    py::class_<experiments::ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("L", &experiments::ExperimentConfig::L)
        .def_readwrite("n", &experiments::ExperimentConfig::n)
        .def_readwrite("lambda_", &experiments::ExperimentConfig::lambda)
        .def_readwrite("beta_lambdas", &experiments::ExperimentConfig::beta_lambdas)
        .def_readwrite("betas", &experiments::ExperimentConfig::betas)
        .def_readwrite("partitions", &experiments::ExperimentConfig::partitions)
        .def_readwrite("realizations", &experiments::ExperimentConfig::realizations)
        .def_readwrite("base_seed", &experiments::ExperimentConfig::base_seed)
        .def_readwrite("bin_width", &experiments::ExperimentConfig::bin_width)
        .def_readwrite("envelope_amplitude",
                       &experiments::ExperimentConfig::envelope_amplitude)
        .def_readwrite("profile_realization",
                       &experiments::ExperimentConfig::profile_realization);

    py::class_<experiments::BetaGrid>(m, "BetaGrid")
        .def_readonly("betas", &experiments::BetaGrid::betas)
        .def_readonly("labels", &experiments::BetaGrid::labels);

    py::class_<experiments::PartitionScales>(m, "PartitionScales")
        .def_readonly("group_size", &experiments::PartitionScales::group_size)
        .def_readonly("interaction_rms", &experiments::PartitionScales::interaction_rms)
        .def_readonly("interaction_rms_closed",
                      &experiments::PartitionScales::interaction_rms_closed)
        .def_readonly("ratio", &experiments::PartitionScales::ratio)
        .def_readonly("reference", &experiments::PartitionScales::reference)
        .def_readonly("moment_residual", &experiments::PartitionScales::moment_residual)
        .def_readonly("bound_violated", &experiments::PartitionScales::bound_violated);

    py::class_<experiments::CellResult>(m, "CellResult")
        .def_readonly("group_size", &experiments::CellResult::group_size)
        .def_readonly("beta_label", &experiments::CellResult::beta_label)
        .def_readonly("beta", &experiments::CellResult::beta)
        .def_readonly("dist", &experiments::CellResult::dist)
        .def_readonly("beta_spec", &experiments::CellResult::beta_spec)
        .def_readonly("beta_ratio", &experiments::CellResult::beta_ratio)
        .def_readonly("max_correction", &experiments::CellResult::max_correction);

    py::class_<experiments::RealizationResult>(m, "RealizationResult")
        .def_readonly("index", &experiments::RealizationResult::index)
        .def_readonly("seed", &experiments::RealizationResult::seed)
        .def_readonly("c", &experiments::RealizationResult::c)
        .def_readonly("level_width", &experiments::RealizationResult::level_width)
        .def_readonly("level_width_closed",
                      &experiments::RealizationResult::level_width_closed)
        .def_readonly("scales", &experiments::RealizationResult::scales)
        .def_readonly("cells", &experiments::RealizationResult::cells)
        .def_readonly("profile_tail", &experiments::RealizationResult::profile_tail)
        .def_readonly("profile_violations",
                      &experiments::RealizationResult::profile_violations)
        .def_readonly("profile_pass", &experiments::RealizationResult::profile_pass);

    py::class_<experiments::RatioAggregate>(m, "RatioAggregate")
        .def_readonly("group_size", &experiments::RatioAggregate::group_size)
        .def_readonly("mean_ratio", &experiments::RatioAggregate::mean_ratio)
        .def_readonly("reference", &experiments::RatioAggregate::reference);

    py::class_<experiments::CellAggregate>(m, "CellAggregate")
        .def_readonly("group_size", &experiments::CellAggregate::group_size)
        .def_readonly("beta_label", &experiments::CellAggregate::beta_label)
        .def_readonly("mean_dist", &experiments::CellAggregate::mean_dist)
        .def_readonly("mean_beta_ratio", &experiments::CellAggregate::mean_beta_ratio)
        .def_readonly("qualifies", &experiments::CellAggregate::qualifies);

    py::class_<experiments::SweepSummary>(m, "SweepSummary")
        .def_readonly("realizations", &experiments::SweepSummary::realizations)
        .def_readonly("lambda_", &experiments::SweepSummary::lambda)
        .def_readonly("mean_width", &experiments::SweepSummary::mean_width)
        .def_readonly("std_width", &experiments::SweepSummary::std_width)
        .def_readonly("max_width_residual", &experiments::SweepSummary::max_width_residual)
        .def_readonly("max_interaction_residual",
                      &experiments::SweepSummary::max_interaction_residual)
        .def_readonly("max_moment_residual", &experiments::SweepSummary::max_moment_residual)
        .def_readonly("scaling_violations", &experiments::SweepSummary::scaling_violations)
        .def_readonly("max_beta_ratio", &experiments::SweepSummary::max_beta_ratio)
        .def_readonly("monotone_pairs", &experiments::SweepSummary::monotone_pairs)
        .def_readonly("monotone_total", &experiments::SweepSummary::monotone_total)
        .def_readonly("profile_passes", &experiments::SweepSummary::profile_passes)
        .def_readonly("ratios", &experiments::SweepSummary::ratios)
        .def_readonly("cells", &experiments::SweepSummary::cells);

    py::class_<experiments::SweepOutput>(m, "SweepOutput")
        .def_readonly("summary", &experiments::SweepOutput::summary)
        .def_readonly("results", &experiments::SweepOutput::results);

    py::class_<experiments::DataTable>(m, "DataTable")
        .def(py::init<>())
        .def_readwrite("columns", &experiments::DataTable::columns)
        .def_readwrite("integer_column", &experiments::DataTable::integer_column)
        .def_readwrite("rows", &experiments::DataTable::rows);

    m.def("validate_config", &experiments::validate, py::arg("config"));
    m.def("beta_grid", &experiments::beta_grid, py::arg("config"));
    m.def("run_realization", &experiments::run_realization, py::arg("config"),
          py::arg("index"), py::call_guard<py::gil_scoped_release>());
    m.def("run_sweep", &experiments::run_sweep, py::arg("config"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("emit_figure_data", &experiments::emit_figure_data, py::arg("config"),
          py::arg("results"), py::arg("figure"));
    m.def("summary_rows", &experiments::summary_rows, py::arg("summary"));

    m.def("format_csv", &cli::format_csv, py::arg("table"));
    m.def("config_from_text", &cli::config_from_text, py::arg("text"));
    m.def("run_cli",
          py::overload_cast<const std::vector<std::string>&>(&cli::run_cli),
          py::arg("args"), py::call_guard<py::gil_scoped_release>());
}
