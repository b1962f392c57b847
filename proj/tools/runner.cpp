// runner.cpp — Experiment configuration, task dispatch, figure presets, and
// CSV/JSON/manifest output

#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace metastab::runner {

namespace {

using nlohmann::json;

// --------------------------------------------------------------------------
// Strict JSON access
// --------------------------------------------------------------------------

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where)
{
    if (!j.is_object()) {
        throw std::invalid_argument("config: " + where + " must be a JSON object");
    }
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw std::invalid_argument("config: unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

const json& require_key(const json& j, const std::string& key, const std::string& where)
{
    if (!j.contains(key)) {
        throw std::invalid_argument("config: missing key \"" + key + "\" in " + where);
    }
    return j.at(key);
}

double get_number(const json& j, const std::string& key, const std::string& where)
{
    const json& v = require_key(j, key, where);
    if (!v.is_number()) {
        throw std::invalid_argument("config: \"" + key + "\" in " + where + " must be a number");
    }
    return v.get<double>();
}

double get_number_or(const json& j, const std::string& key, const std::string& where,
                     double fallback)
{
    return j.contains(key) ? get_number(j, key, where) : fallback;
}

int get_int(const json& j, const std::string& key, const std::string& where)
{
    const json& v = require_key(j, key, where);
    if (!v.is_number_integer()) {
        throw std::invalid_argument("config: \"" + key + "\" in " + where + " must be an integer");
    }
    return v.get<int>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where)
{
    const json& v = require_key(j, key, where);
    if (!v.is_string()) {
        throw std::invalid_argument("config: \"" + key + "\" in " + where + " must be a string");
    }
    return v.get<std::string>();
}

// --------------------------------------------------------------------------
// Grids and small numeric helpers
// --------------------------------------------------------------------------

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = a + (b - a) * static_cast<double>(k) / (n - 1);
    }
    out.back() = b;
    return out;
}

std::vector<double> logspace(double a, double b, int n)
{
    std::vector<double> out(static_cast<std::size_t>(n));
    const double la = std::log10(a);
    const double lb = std::log10(b);
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] =
            std::pow(10.0, la + (lb - la) * static_cast<double>(k) / (n - 1));
    }
    out.back() = b;
    return out;
}

// t = 0 followed by a log-spaced grid, for dynamics spanning decades in time
std::vector<double> log_grid_from_zero(double t_min, double t_max, int n)
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(0.0);
    const std::vector<double> tail = logspace(t_min, t_max, n);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

LindbladModel build_model(const ModelConfig& mc)
{
    if (mc.kind == "lambda") {
        return lambda_model(mc.lambda);
    }
    if (mc.kind == "two_qubit_tpr") {
        return two_qubit_tpr_model(mc.lambda);
    }
    if (mc.kind == "chiral") {
        return chiral_model(mc.chiral);
    }
    throw std::invalid_argument("config: unknown model kind \"" + mc.kind + "\"");
}

int initial_state_index(const LindbladModel& model, const std::string& label)
{
    if (label.empty()) {
        return 0;
    }
    for (std::size_t k = 0; k < model.basis_labels.size(); ++k) {
        if (model.basis_labels[k] == label) {
            return static_cast<int>(k);
        }
    }
    throw std::invalid_argument("config: unknown initial_state label \"" + label + "\"");
}

DensityMatrix basis_state(const LindbladModel& model, int index)
{
    ComplexVector psi = ComplexVector::Zero(model.dim());
    psi(index) = 1.0;
    return DensityMatrix::pure(psi);
}

// Eigenvalue-floor projection onto physical states, for approximate
// reconstructions that sit slightly outside the state space.
DensityMatrix nearest_state(const ComplexMatrix& m)
{
    const ComplexMatrix herm = 0.5 * (m + adjoint(m));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("nearest_state: eigendecomposition failed");
    }
    RealVector vals = solver.eigenvalues().cwiseMax(0.0);
    const double total = vals.sum();
    if (total <= 0.0) {
        throw std::runtime_error("nearest_state: matrix has no positive part");
    }
    vals /= total;
    const ComplexMatrix rebuilt = solver.eigenvectors() * vals.asDiagonal().toDenseMatrix().cast<Complex>() *
                                  solver.eigenvectors().adjoint();
    return DensityMatrix::checked(rebuilt);
}

// --------------------------------------------------------------------------
// Config parsing
// --------------------------------------------------------------------------

void require_known_figure(const std::string& name)
{
    const std::vector<std::string> known = figure_names();
    if (std::find(known.begin(), known.end(), name) != known.end()) {
        return;
    }
    std::string list;
    for (const std::string& entry : known) {
        if (!list.empty()) {
            list += ", ";
        }
        list += entry;
    }
    throw std::invalid_argument("unknown figure \"" + name + "\"; known figures: " + list);
}

ModelConfig parse_model(const json& j)
{
    ModelConfig mc;
    mc.kind = get_string(j, "kind", "model");
    if (mc.kind == "lambda" || mc.kind == "two_qubit_tpr") {
        reject_unknown_keys(j, {"kind", "delta1", "delta2", "delta_v", "omega", "gamma", "gamma_v"},
                            "model");
        mc.lambda.delta1 = get_number_or(j, "delta1", "model", 0.0);
        mc.lambda.delta2 = get_number_or(j, "delta2", "model", 0.0);
        mc.lambda.deltaV = get_number(j, "delta_v", "model");
        mc.lambda.omega = get_number(j, "omega", "model");
        mc.lambda.gamma = get_number(j, "gamma", "model");
        mc.lambda.gammaV = get_number_or(j, "gamma_v", "model", 0.0);
    } else if (mc.kind == "chiral") {
        reject_unknown_keys(j, {"kind", "omega", "delta", "gamma_r", "gamma_l"}, "model");
        mc.chiral.omega = get_number(j, "omega", "model");
        mc.chiral.delta = get_number(j, "delta", "model");
        mc.chiral.gammaR = get_number(j, "gamma_r", "model");
        mc.chiral.gammaL = get_number(j, "gamma_l", "model");
    } else {
        throw std::invalid_argument("config: unknown model kind \"" + mc.kind + "\"");
    }
    return mc;
}

TaskConfig parse_task(const json& j)
{
    TaskConfig tc;
    tc.kind = get_string(j, "kind", "task");
    const std::string where = "task (" + tc.kind + ")";
    if (tc.kind == "evolve" || tc.kind == "nojump" || tc.kind == "concurrence") {
        reject_unknown_keys(j, {"kind", "t_max", "n_samples", "initial_state"}, where);
        tc.t_max = get_number(j, "t_max", where);
        tc.n_samples = get_int(j, "n_samples", where);
        if (tc.n_samples < 2) {
            throw std::invalid_argument("config: n_samples must be at least 2 in " + where);
        }
        if (j.contains("initial_state")) {
            tc.initial_state = get_string(j, "initial_state", where);
        }
    } else if (tc.kind == "spectrum" || tc.kind == "steady") {
        reject_unknown_keys(j, {"kind"}, where);
    } else if (tc.kind == "hae") {
        reject_unknown_keys(j, {"kind", "rho_vv"}, where);
        tc.rho_vv = get_number_or(j, "rho_vv", where, 0.0);
    } else if (tc.kind == "trajectories") {
        reject_unknown_keys(j, {"kind", "t_max", "dt", "n_traj", "initial_state"}, where);
        tc.t_max = get_number(j, "t_max", where);
        tc.dt = get_number(j, "dt", where);
        tc.n_traj = get_int(j, "n_traj", where);
        if (tc.n_traj < 1) {
            throw std::invalid_argument("config: n_traj must be positive in " + where);
        }
        if (j.contains("initial_state")) {
            tc.initial_state = get_string(j, "initial_state", where);
        }
    } else if (tc.kind == "figure_preset") {
        reject_unknown_keys(j, {"kind", "figure"}, where);
        tc.figure = get_string(j, "figure", where);
        require_known_figure(tc.figure);
    } else {
        throw std::invalid_argument("config: unknown task kind \"" + tc.kind + "\"");
    }
    return tc;
}

// --------------------------------------------------------------------------
// Output writers
// --------------------------------------------------------------------------

std::string format_double(double v)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string csv_quote(const std::string& field)
{
    if (field.find_first_of(",\"\n") == std::string::npos) {
        return field;
    }
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file " + path.string());
    }
    return out;
}

void check_table(const Table& table)
{
    for (const std::vector<double>& row : table.rows) {
        if (row.size() != table.columns.size()) {
            throw std::invalid_argument("table row width does not match column count");
        }
    }
}

std::string table_file_name(const std::string& stem, OutputFormat format)
{
    return stem + (format == OutputFormat::Csv ? ".csv" : ".json");
}

void write_table(const std::filesystem::path& dir, const std::string& stem,
                 OutputFormat format, const Table& table, std::vector<std::string>& outputs)
{
    const std::string name = table_file_name(stem, format);
    if (format == OutputFormat::Csv) {
        write_table_csv(dir / name, table);
    } else {
        write_table_json(dir / name, table);
    }
    outputs.push_back(name);
}

// --------------------------------------------------------------------------
// Tasks
// --------------------------------------------------------------------------

std::string coherence_label(const LindbladModel& model, int i, int j)
{
    return "rho_" + model.basis_labels[static_cast<std::size_t>(i)] + "_" +
           model.basis_labels[static_cast<std::size_t>(j)];
}

Table state_table(const LindbladModel& model, const std::vector<double>& times,
                  const std::vector<DensityMatrix>& states)
{
    Table table;
    table.columns.push_back("t");
    const int dim = model.dim();
    for (int i = 0; i < dim; ++i) {
        table.columns.push_back("pop_" + model.basis_labels[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) {
            table.columns.push_back(coherence_label(model, i, j) + ".re");
            table.columns.push_back(coherence_label(model, i, j) + ".im");
        }
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<double> row;
        row.push_back(times[k]);
        for (int i = 0; i < dim; ++i) {
            row.push_back(states[k].matrix(i, i).real());
        }
        for (int i = 0; i < dim; ++i) {
            for (int j = i + 1; j < dim; ++j) {
                row.push_back(states[k].matrix(i, j).real());
                row.push_back(states[k].matrix(i, j).imag());
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void run_evolve(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                std::vector<std::string>& outputs)
{
    const LindbladModel model = build_model(cfg.model);
    const DensityMatrix rho0 = basis_state(model, initial_state_index(model, cfg.task.initial_state));
    const std::vector<double> times = linspace(0.0, cfg.task.t_max, cfg.task.n_samples);
    const EvolutionResult result = evolve(model, rho0, times);
    write_table(dir, "evolution", cfg.format, state_table(model, result.times, result.states),
                outputs);
}

void run_spectrum(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                  std::vector<std::string>& outputs)
{
    const LindbladModel model = build_model(cfg.model);
    const LiouvillianSpectrum spectrum = liouvillian_spectrum(model);

    Table eigen_table;
    eigen_table.columns = {"index", "re", "im"};
    for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
        eigen_table.rows.push_back({static_cast<double>(k), spectrum.eigenvalues(k).real(),
                                    spectrum.eigenvalues(k).imag()});
    }
    write_table(dir, "spectrum", cfg.format, eigen_table, outputs);

    const MetastabilityReport report = metastability_report(spectrum);
    Table report_table;
    report_table.columns = {"is_metastable", "lambda2.re", "lambda2.im", "lambda3.re",
                            "lambda3.im",    "tau2",       "tau3",       "gap_ratio"};
    report_table.rows.push_back({report.is_metastable ? 1.0 : 0.0, report.lambda2.real(),
                                 report.lambda2.imag(), report.lambda3.real(),
                                 report.lambda3.imag(), report.tau2, report.tau3,
                                 report.gap_ratio});
    write_table(dir, "metastability", cfg.format, report_table, outputs);
}

void run_steady(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                std::vector<std::string>& outputs)
{
    const LindbladModel model = build_model(cfg.model);
    const DensityMatrix ss = steady_state(model);

    Table table;
    std::vector<double> row;
    for (int i = 0; i < model.dim(); ++i) {
        for (int j = i; j < model.dim(); ++j) {
            table.columns.push_back(coherence_label(model, i, j) + ".re");
            table.columns.push_back(coherence_label(model, i, j) + ".im");
            row.push_back(ss.matrix(i, j).real());
            row.push_back(ss.matrix(i, j).imag());
        }
    }
    table.rows.push_back(std::move(row));
    write_table(dir, "steady", cfg.format, table, outputs);
}

void run_hae(const ExperimentConfig& cfg, const std::filesystem::path& dir,
             std::vector<std::string>& outputs)
{
    Table table;
    if (cfg.model.kind == "chiral") {
        const LindbladModel model = build_model(cfg.model);
        const RealAffineForm form = real_affine_form(model);
        const Reduction reduction = numeric_hae(form, chiral_partition(form));
        table.columns = {"tau_formation", "hae_rate_slow", "fixed_point_pa"};
        table.rows.push_back({chiral_relaxation_time(cfg.model.chiral), reduction.rates().front(),
                              reduction.fixed_point(0)});
    } else {
        // Closed forms are shared by the three-level system and its two-qubit
        // realization, whose projected dynamics coincide.
        const LambdaParams& p = cfg.model.lambda;
        const RelaxationRate rate = relaxation_rate(p);
        const SteadyElements ss = steady_elements(p);
        const MetastableElements m = metastable_elements(p);
        const QuasiSteadyElements qs = quasi_steady_real(p, cfg.task.rho_vv);
        const RealAffineForm form = real_affine_form(lambda_model(p));
        const Reduction reduction = numeric_hae(form, lambda_partition(form));
        table.columns = {"gamma_c_full",      "gamma_c_simple",    "hae_rate_slow",
                         "rho_vv_ss",         "rho22_ss",          "rho12_ss.re",
                         "rho12_ss.im",       "rho22_metastable",  "rho12_metastable.re",
                         "rho12_metastable.im", "rho22_quasi",     "rho12_quasi.re",
                         "rho12_quasi.im"};
        table.rows.push_back({rate.full, rate.simple, reduction.rates().front(), ss.rho_vv,
                              ss.rho22, ss.rho12.real(), ss.rho12.imag(), m.rho22,
                              m.rho12.real(), m.rho12.imag(), qs.rho22, qs.rho12.real(),
                              qs.rho12.imag()});
    }
    write_table(dir, "hae", cfg.format, table, outputs);
}

void run_trajectories(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                      std::vector<std::string>& outputs)
{
    const LindbladModel model = build_model(cfg.model);
    const int index = initial_state_index(model, cfg.task.initial_state);
    ComplexVector psi0 = ComplexVector::Zero(model.dim());
    psi0(index) = 1.0;
    const EvolutionResult result = ensemble_average(model, psi0, cfg.task.n_traj,
                                                    cfg.task.t_max, cfg.task.dt, cfg.seed);
    write_table(dir, "trajectories", cfg.format, state_table(model, result.times, result.states),
                outputs);
}

void run_nojump(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                std::vector<std::string>& outputs)
{
    const LindbladModel model = build_model(cfg.model);
    const DensityMatrix rho0 = basis_state(model, initial_state_index(model, cfg.task.initial_state));
    const std::vector<double> times = linspace(0.0, cfg.task.t_max, cfg.task.n_samples);
    const NoJumpResult result = no_jump_evolution(model, rho0, times);

    Table table;
    table.columns.push_back("t");
    table.columns.push_back("survival");
    for (int i = 0; i < model.dim(); ++i) {
        table.columns.push_back("pop_" + model.basis_labels[static_cast<std::size_t>(i)]);
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<double> row{times[k], result.survival[k]};
        for (int i = 0; i < model.dim(); ++i) {
            row.push_back(result.conditional_states[k].matrix(i, i).real());
        }
        table.rows.push_back(std::move(row));
    }
    write_table(dir, "nojump", cfg.format, table, outputs);
}

void run_concurrence(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                     std::vector<std::string>& outputs)
{
    if (cfg.model.kind != "two_qubit_tpr" && cfg.model.kind != "chiral") {
        throw std::invalid_argument("config: concurrence task needs a two-qubit model");
    }
    const LindbladModel model = build_model(cfg.model);
    const DensityMatrix rho0 = basis_state(model, initial_state_index(model, cfg.task.initial_state));
    const std::vector<double> times = linspace(0.0, cfg.task.t_max, cfg.task.n_samples);
    const EvolutionResult result = evolve(model, rho0, times);

    Table table;
    table.columns = {"t", "concurrence"};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double c =
            concurrence(coupled_to_product(result.states[k]));
        table.rows.push_back({times[k], c});
    }
    write_table(dir, "concurrence", cfg.format, table, outputs);
}

// --------------------------------------------------------------------------
// Figure presets (dimensionless units: delta_v = 1 for three-level presets,
// total decay rate = 1 for the chiral preset)
// --------------------------------------------------------------------------

struct FigureData {
    std::string stem;
    Table table;
    std::string readme; // column-describing text
};

std::string readme_text(const std::string& title, const std::string& intro,
                        const std::vector<std::pair<std::string, std::string>>& columns)
{
    std::string text = "# " + title + "\n\n" + intro + "\n\nColumns:\n\n";
    for (const auto& [name, description] : columns) {
        text += "- `" + name + "`: " + description + "\n";
    }
    return text;
}

FigureData make_fig2a()
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.01;
    p.gamma = 1e-5;
    const double gc = relaxation_rate(p).full;
    const MetastableElements m = metastable_elements(p);

    const std::vector<double> times = log_grid_from_zero(1e-2 / p.gamma, 5.0 / gc, 300);
    const EvolutionResult closed = evolve(lambda_model(p), basis_state(lambda_model(p), 0), times);
    LambdaParams p_open = p;
    p_open.gammaV = p.gamma;
    const EvolutionResult open =
        evolve(lambda_model(p_open), basis_state(lambda_model(p_open), 0), times);

    FigureData fig;
    fig.stem = "fig2a";
    fig.table.columns = {"t_gamma",        "rho22_numeric",  "rhovv_numeric",
                         "rho22_analytic", "rhovv_analytic", "rhovv_numeric_gammav_eq_gamma"};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const ElementsAtTime slow = analytic_elements(p, t);
        const TwoLevelValues fast = two_level_transient(p, t);
        fig.table.rows.push_back({t * p.gamma, closed.states[k].matrix(1, 1).real(),
                                  closed.states[k].matrix(2, 2).real(),
                                  slow.rho22 + fast.rho22 - m.rho22, slow.rho_vv,
                                  open.states[k].matrix(2, 2).real()});
    }
    fig.readme = readme_text(
        "fig2a", "Population dynamics of the driven three-level system at omega/delta_v = 0.01, "
                 "gamma/delta_v = 1e-5, starting from state 1. The analytic curves compose the "
                 "damped two-photon Rabi transient with the slow single-exponential relaxation "
                 "into the true steady state.",
        {{"t_gamma", "time multiplied by the decay rate gamma"},
         {"rho22_numeric", "population of state 2 from the full master equation"},
         {"rhovv_numeric", "population of the virtual state from the full master equation"},
         {"rho22_analytic", "closed-form population of state 2 (transient + slow relaxation)"},
         {"rhovv_analytic", "closed-form virtual-state population (slow relaxation only)"},
         {"rhovv_numeric_gammav_eq_gamma",
          "virtual-state population when the virtual state decays at rate gamma"}});
    return fig;
}

FigureData make_fig2bc()
{
    FigureData fig;
    fig.stem = "fig2bc";
    fig.table.columns = {"gamma_over_deltav", "re_lambda2_abs", "gamma_c_full", "gamma_c_simple",
                         "gap_ratio"};
    for (double gamma : logspace(1e-7, 1e-3, 41)) {
        LambdaParams p;
        p.deltaV = 1.0;
        p.omega = 0.01;
        p.gamma = gamma;
        const LiouvillianSpectrum spectrum = liouvillian_spectrum(lambda_model(p));
        const RelaxationRate rate = relaxation_rate(p);
        fig.table.rows.push_back({gamma, std::abs(spectrum.eigenvalues(1).real()), rate.full,
                                  rate.simple, spectrum.gap_ratio});
    }
    fig.readme = readme_text(
        "fig2bc",
        "Slowest Liouvillian relaxation rate versus decay rate at omega/delta_v = 0.01, compared "
        "with the closed-form rate of the eliminated slow dynamics and its leading-order value. "
        "The spectral gap ratio diagnoses the metastable window.",
        {{"gamma_over_deltav", "decay rate of state 2 in units of the virtual-state detuning"},
         {"re_lambda2_abs", "absolute real part of the second Liouvillian eigenvalue"},
         {"gamma_c_full", "closed-form slow relaxation rate"},
         {"gamma_c_simple", "leading-order slow relaxation rate 3 gamma omega^2 / (2 delta_v^2)"},
         {"gap_ratio", "ratio of the second and third relaxation times"}});
    return fig;
}

FigureData make_fig2d()
{
    const double omega = 0.01;
    const double o2p = omega * omega; // delta_v = 1
    FigureData fig;
    fig.stem = "fig2d";
    fig.table.columns = {"gamma_over_deltav", "re_lambda2_gammav_zero", "re_lambda2_gammav_weak",
                         "re_lambda2_gammav_equal", "gamma_c_full"};
    for (double gamma : logspace(1e-7, 1e-3, 25)) {
        LambdaParams p;
        p.deltaV = 1.0;
        p.omega = omega;
        p.gamma = gamma;
        auto lambda2 = [](const LambdaParams& params) {
            return std::abs(liouvillian_spectrum(lambda_model(params)).eigenvalues(1).real());
        };
        LambdaParams weak = p;
        weak.gammaV = 1e-5 * o2p;
        LambdaParams equal = p;
        equal.gammaV = gamma;
        fig.table.rows.push_back(
            {gamma, lambda2(p), lambda2(weak), lambda2(equal), relaxation_rate(p).full});
    }
    fig.readme = readme_text(
        "fig2d",
        "Sensitivity of the slowest relaxation rate to a finite virtual-state decay gamma_v, at "
        "omega/delta_v = 0.01. A gamma_v far below the effective two-photon drive leaves the "
        "slow rate intact; gamma_v comparable to gamma destroys the spectral separation.",
        {{"gamma_over_deltav", "decay rate of state 2 in units of the virtual-state detuning"},
         {"re_lambda2_gammav_zero", "slowest relaxation rate with no virtual-state decay"},
         {"re_lambda2_gammav_weak",
          "slowest relaxation rate with gamma_v = 1e-5 of the two-photon drive"},
         {"re_lambda2_gammav_equal", "slowest relaxation rate with gamma_v = gamma"},
         {"gamma_c_full", "closed-form slow relaxation rate at gamma_v = 0"}});
    return fig;
}

FigureData make_fig3a(std::uint64_t seed)
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.1;
    p.gamma = 1e-3;
    const LindbladModel model = lambda_model(p);
    ComplexVector psi0 = ComplexVector::Zero(3);
    psi0(0) = 1.0;
    const double t_max = 2000.0;
    const double dt = 0.5;

    std::vector<TrajectoryRecord> singles;
    for (std::uint64_t k = 0; k < 3; ++k) {
        singles.push_back(
            sample_trajectory(model, psi0, t_max, dt, derive_stream_seed(seed, 1000000 + k)));
    }
    const EvolutionResult mean = ensemble_average(model, psi0, 500, t_max, dt, seed);
    const EvolutionResult exact = evolve(model, basis_state(model, 0), mean.times);

    FigureData fig;
    fig.stem = "fig3a";
    fig.table.columns = {"t_gamma",      "rhovv_traj_1",   "rhovv_traj_2", "rhovv_traj_3",
                         "rhovv_ensemble", "rhovv_exact"};
    for (std::size_t k = 0; k < mean.times.size(); k += 8) {
        fig.table.rows.push_back({mean.times[k] * p.gamma, std::norm(singles[0].states[k](2)),
                                  std::norm(singles[1].states[k](2)),
                                  std::norm(singles[2].states[k](2)),
                                  mean.states[k].matrix(2, 2).real(),
                                  exact.states[k].matrix(2, 2).real()});
    }
    fig.readme = readme_text(
        "fig3a",
        "Quantum-jump unraveling of the three-level dynamics at omega/delta_v = 0.1, "
        "gamma/delta_v = 1e-3: three individual trajectories, the 500-trajectory ensemble "
        "average, and the master-equation result for the virtual-state population.",
        {{"t_gamma", "time multiplied by the decay rate gamma"},
         {"rhovv_traj_1", "virtual-state population along the first sample trajectory"},
         {"rhovv_traj_2", "virtual-state population along the second sample trajectory"},
         {"rhovv_traj_3", "virtual-state population along the third sample trajectory"},
         {"rhovv_ensemble", "ensemble-averaged virtual-state population (500 trajectories)"},
         {"rhovv_exact", "virtual-state population from the master equation"}});
    return fig;
}

FigureData make_fig3b()
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.1;
    p.gamma = 1e-3;
    const LindbladModel model = lambda_model(p);
    const std::vector<double> times = linspace(0.0, 50.0 / p.gamma, 401);
    const NoJumpResult nojump = no_jump_evolution(model, basis_state(model, 0), times);
    const EvolutionResult uncond = evolve(model, basis_state(model, 0), times);

    FigureData fig;
    fig.stem = "fig3b";
    fig.table.columns = {"t_gamma", "survival", "rhovv_conditional", "rhovv_unconditional"};
    for (std::size_t k = 0; k < times.size(); ++k) {
        fig.table.rows.push_back({times[k] * p.gamma, nojump.survival[k],
                                  nojump.conditional_states[k].matrix(2, 2).real(),
                                  uncond.states[k].matrix(2, 2).real()});
    }
    fig.readme = readme_text(
        "fig3b",
        "No-jump conditional evolution at omega/delta_v = 0.1, gamma/delta_v = 1e-3: the "
        "probability that no photon has been emitted up to t, and the virtual-state population "
        "conditioned on that record, compared with the unconditional master equation.",
        {{"t_gamma", "time multiplied by the decay rate gamma"},
         {"survival", "probability of no emission up to t"},
         {"rhovv_conditional", "virtual-state population conditioned on no emission"},
         {"rhovv_unconditional", "virtual-state population from the master equation"}});
    return fig;
}

FigureData make_fig4a()
{
    LambdaParams p;
    p.deltaV = 1.0;
    p.omega = 0.01;
    p.gamma = 1e-5;
    const double gc = relaxation_rate(p).full;
    const MetastableElements m = metastable_elements(p);
    const LindbladModel model = two_qubit_tpr_model(p);

    const std::vector<double> times = log_grid_from_zero(1e-2 / p.gamma, 5.0 / gc, 300);
    const EvolutionResult result = evolve(model, basis_state(model, 0), times);

    FigureData fig;
    fig.stem = "fig4a";
    fig.table.columns = {"t_gamma", "concurrence_numeric", "concurrence_analytic"};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const double c_num =
            concurrence(coupled_to_product(result.states[k]));
        const ElementsAtTime slow = analytic_elements(p, t);
        const TwoLevelValues fast = two_level_transient(p, t);
        const double rho22 = slow.rho22 + fast.rho22 - m.rho22;
        const Complex rho12 = slow.rho12 + fast.rho12 - m.rho12;
        // The composed approximants can dip O(omega^2/delta_v^2) outside
        // positivity, so project onto the nearest state before scoring.
        ComplexMatrix x = ComplexMatrix::Zero(4, 4);
        x(0, 0) = 1.0 - rho22 - slow.rho_vv;
        x(3, 3) = rho22;
        x(0, 3) = rho12;
        x(3, 0) = std::conj(rho12);
        x(1, 1) = x(1, 2) = x(2, 1) = x(2, 2) = 0.5 * slow.rho_vv;
        const double c_an = concurrence(nearest_state(x));
        fig.table.rows.push_back({t * p.gamma, c_num, c_an});
    }
    fig.readme = readme_text(
        "fig4a",
        "Concurrence of two qubits under the engineered two-photon drive and collective decay "
        "(omega/delta_v = 0.01, gamma/delta_v = 1e-5), starting from both qubits in the ground "
        "state. The analytic curve evaluates the X-state closed form on the composed "
        "transient-plus-relaxation elements.",
        {{"t_gamma", "time multiplied by the decay rate gamma"},
         {"concurrence_numeric", "concurrence of the full two-qubit state"},
         {"concurrence_analytic", "closed-form concurrence from the eliminated dynamics"}});
    return fig;
}

FigureData make_fig4b()
{
    ChiralParams cp;
    cp.omega = 1.0;
    cp.delta = 0.01;
    cp.gammaR = 0.255;
    cp.gammaL = 0.245;
    const LindbladModel model = chiral_model(cp);
    const double tau = chiral_relaxation_time(cp);

    const RealAffineForm form = real_affine_form(model);
    const Reduction reduction = numeric_hae(form, chiral_partition(form));
    const double rate = reduction.rate_matrix(0, 0); // negative
    const double fixed_point = reduction.fixed_point(0);

    const std::vector<double> times = log_grid_from_zero(1.0, 5.0 * tau, 300);
    const EvolutionResult result = evolve(model, basis_state(model, 0), times);

    FigureData fig;
    fig.stem = "fig4b";
    fig.table.columns = {"t_gamma", "concurrence_numeric", "concurrence_hae", "rho_aa"};
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const double c_num =
            concurrence(coupled_to_product(result.states[k]));
        RealVector slow(1);
        slow(0) = fixed_point * (1.0 - std::exp(rate * t));
        const ComplexMatrix reconstructed = reduction.reconstruct(form, slow);
        const ComplexMatrix u = coupled_to_product_matrix();
        const double c_hae = concurrence(nearest_state(u * reconstructed * u.adjoint()));
        fig.table.rows.push_back(
            {t, c_num, c_hae, result.states[k].matrix(2, 2).real()});
    }
    fig.readme = readme_text(
        "fig4b",
        "Relaxation of two chirally coupled qubits (omega = 1, delta = 0.01, dgamma = 0.01, all "
        "in units of the total decay rate) into the antisymmetric dark state: concurrence from "
        "the master equation, from the numerically eliminated slow dynamics, and the "
        "antisymmetric-state population.",
        {{"t_gamma", "time in units of the inverse total decay rate"},
         {"concurrence_numeric", "concurrence of the full two-qubit state"},
         {"concurrence_hae", "concurrence reconstructed from the one-dimensional slow dynamics"},
         {"rho_aa", "population of the antisymmetric state"}});
    return fig;
}

FigureData make_figure(const std::string& name, std::uint64_t seed)
{
    if (name == "fig2a") {
        return make_fig2a();
    }
    if (name == "fig2bc") {
        return make_fig2bc();
    }
    if (name == "fig2d") {
        return make_fig2d();
    }
    if (name == "fig3a") {
        return make_fig3a(seed);
    }
    if (name == "fig3b") {
        return make_fig3b();
    }
    if (name == "fig4a") {
        return make_fig4a();
    }
    if (name == "fig4b") {
        return make_fig4b();
    }
    throw std::invalid_argument("unknown figure \"" + name + "\"; known figures: fig2a, fig2bc, "
                                "fig2d, fig3a, fig3b, fig4a, fig4b");
}

void run_figure_preset(const ExperimentConfig& cfg, const std::filesystem::path& dir,
                       std::vector<std::string>& outputs)
{
    const FigureData fig = make_figure(cfg.task.figure, cfg.seed);
    write_table(dir, fig.stem, cfg.format, fig.table, outputs);
    std::ofstream readme = open_output(dir / "README.md");
    readme << fig.readme;
    outputs.push_back("README.md");
}

} // namespace

// --------------------------------------------------------------------------
// Public interface
// --------------------------------------------------------------------------

std::string format_name(OutputFormat format)
{
    return format == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat parse_format(const std::string& name)
{
    if (name == "csv") {
        return OutputFormat::Csv;
    }
    if (name == "json") {
        return OutputFormat::Json;
    }
    throw std::invalid_argument("config: unknown output format \"" + name + "\"");
}

ExperimentConfig parse_config(const nlohmann::json& j)
{
    reject_unknown_keys(j, {"model", "task", "output", "seed"}, "the top level");

    ExperimentConfig cfg;
    cfg.task = parse_task(require_key(j, "task", "the top level"));
    if (cfg.task.kind == "figure_preset") {
        if (j.contains("model")) {
            throw std::invalid_argument(
                "config: figure presets fix their own model; remove the model section");
        }
    } else {
        cfg.model = parse_model(require_key(j, "model", "the top level"));
    }

    const json& output = require_key(j, "output", "the top level");
    reject_unknown_keys(output, {"dir", "format"}, "output");
    cfg.output_dir = get_string(output, "dir", "output");
    cfg.format = output.contains("format") ? parse_format(get_string(output, "format", "output"))
                                           : OutputFormat::Csv;

    if (j.contains("seed")) {
        const json& seed = j.at("seed");
        // In-memory documents may carry a signed integer type for literals.
        const bool non_negative_integer =
            seed.is_number_unsigned() ||
            (seed.is_number_integer() && seed.get<std::int64_t>() >= 0);
        if (!non_negative_integer) {
            throw std::invalid_argument("config: seed must be a non-negative integer");
        }
        cfg.seed = seed.get<std::uint64_t>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config file " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg)
{
    json j;
    if (cfg.task.kind != "figure_preset") {
        json model;
        model["kind"] = cfg.model.kind;
        if (cfg.model.kind == "chiral") {
            model["omega"] = cfg.model.chiral.omega;
            model["delta"] = cfg.model.chiral.delta;
            model["gamma_r"] = cfg.model.chiral.gammaR;
            model["gamma_l"] = cfg.model.chiral.gammaL;
        } else {
            model["delta1"] = cfg.model.lambda.delta1;
            model["delta2"] = cfg.model.lambda.delta2;
            model["delta_v"] = cfg.model.lambda.deltaV;
            model["omega"] = cfg.model.lambda.omega;
            model["gamma"] = cfg.model.lambda.gamma;
            model["gamma_v"] = cfg.model.lambda.gammaV;
        }
        j["model"] = model;
    }

    json task;
    task["kind"] = cfg.task.kind;
    if (cfg.task.kind == "evolve" || cfg.task.kind == "nojump" || cfg.task.kind == "concurrence") {
        task["t_max"] = cfg.task.t_max;
        task["n_samples"] = cfg.task.n_samples;
        if (!cfg.task.initial_state.empty()) {
            task["initial_state"] = cfg.task.initial_state;
        }
    } else if (cfg.task.kind == "hae") {
        task["rho_vv"] = cfg.task.rho_vv;
    } else if (cfg.task.kind == "trajectories") {
        task["t_max"] = cfg.task.t_max;
        task["dt"] = cfg.task.dt;
        task["n_traj"] = cfg.task.n_traj;
        if (!cfg.task.initial_state.empty()) {
            task["initial_state"] = cfg.task.initial_state;
        }
    } else if (cfg.task.kind == "figure_preset") {
        task["figure"] = cfg.task.figure;
    }
    j["task"] = task;

    j["output"] = {{"dir", cfg.output_dir}, {"format", format_name(cfg.format)}};
    j["seed"] = cfg.seed;
    return j;
}

void write_table_csv(const std::filesystem::path& path, const Table& table)
{
    check_table(table);
    std::ofstream out = open_output(path);
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
        out << (k ? "," : "") << csv_quote(table.columns[k]);
    }
    out << "\n";
    for (const std::vector<double>& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            out << (k ? "," : "") << format_double(row[k]);
        }
        out << "\n";
    }
}

void write_table_json(const std::filesystem::path& path, const Table& table)
{
    check_table(table);
    json j;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    std::ofstream out = open_output(path);
    out << j.dump(2) << "\n";
}

RunResult run(const ExperimentConfig& cfg)
{
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);

    RunResult result;
    if (cfg.task.kind == "evolve") {
        run_evolve(cfg, dir, result.outputs);
    } else if (cfg.task.kind == "spectrum") {
        run_spectrum(cfg, dir, result.outputs);
    } else if (cfg.task.kind == "steady") {
        run_steady(cfg, dir, result.outputs);
    } else if (cfg.task.kind == "hae") {
        run_hae(cfg, dir, result.outputs);
    } else if (cfg.task.kind == "trajectories") {
        run_trajectories(cfg, dir, result.outputs);
    } else if (cfg.task.kind == "nojump") {
        run_nojump(cfg, dir, result.outputs);
    } else if (cfg.task.kind == "concurrence") {
        run_concurrence(cfg, dir, result.outputs);
    } else if (cfg.task.kind == "figure_preset") {
        run_figure_preset(cfg, dir, result.outputs);
    } else {
        throw std::invalid_argument("config: unknown task kind \"" + cfg.task.kind + "\"");
    }

    json manifest;
    manifest["tool"] = "metastab";
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["config"] = config_to_json(cfg);
    manifest["outputs"] = result.outputs;
    std::ofstream out = open_output(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
    result.outputs.push_back("manifest.json");
    return result;
}

std::vector<std::string> figure_names()
{
    return {"fig2a", "fig2bc", "fig2d", "fig3a", "fig3b", "fig4a", "fig4b"};
}

ExperimentConfig figure_config(const std::string& name, const std::string& output_dir,
                               OutputFormat format, std::uint64_t seed)
{
    require_known_figure(name);
    ExperimentConfig cfg;
    cfg.task.kind = "figure_preset";
    cfg.task.figure = name;
    cfg.output_dir = output_dir;
    cfg.format = format;
    cfg.seed = seed;
    return cfg;
}

} // namespace metastab::runner
