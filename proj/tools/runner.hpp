// runner.hpp — Experiment configuration, task dispatch, and file output behind
// the command-line driver

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "metastab/metastab.hpp"

namespace metastab::runner {

enum class OutputFormat { Csv, Json };

std::string format_name(OutputFormat format);
OutputFormat parse_format(const std::string& name);

// Tagged model description; lambda parameters double for the two-qubit
// realization, whose Hamiltonian is fixed by the same five numbers.
struct ModelConfig {
    std::string kind; // "lambda" | "two_qubit_tpr" | "chiral"
    LambdaParams lambda;
    ChiralParams chiral;
};

struct TaskConfig {
    std::string kind; // evolve | spectrum | steady | hae | trajectories | nojump
                      // | concurrence | figure_preset
    double t_max{0.0};
    int n_samples{0};
    double dt{0.0};
    int n_traj{0};
    double rho_vv{0.0};        // frozen slow population for the hae task
    std::string initial_state; // basis label; defaults to the first label
    std::string figure;        // preset name for figure_preset
};

struct ExperimentConfig {
    ModelConfig model;
    TaskConfig task;
    std::string output_dir;
    OutputFormat format{OutputFormat::Csv};
    std::uint64_t seed{0};
};

// Strict parsers: unknown keys anywhere in the document are rejected.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Column-oriented numeric table; the unit of all output files.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table_csv(const std::filesystem::path& path, const Table& table);
void write_table_json(const std::filesystem::path& path, const Table& table);

struct RunResult {
    std::vector<std::string> outputs; // file names written into output_dir
};

// Executes the configured task, writes its tables plus manifest.json (resolved
// config, tool version, seed, output list) into output_dir.
RunResult run(const ExperimentConfig& config);

// Named dataset presets behind `metastab figure <name>`.
std::vector<std::string> figure_names();
ExperimentConfig figure_config(const std::string& name, const std::string& output_dir,
                               OutputFormat format, std::uint64_t seed);

} // namespace metastab::runner
