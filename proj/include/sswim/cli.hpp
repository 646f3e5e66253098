#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sswim/data.hpp"
#include "sswim/metrics.hpp"
#include "sswim/model.hpp"
#include "sswim/synthetic.hpp"
#include "sswim/train.hpp"

namespace sswim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

/// Settings shared by the experiment commands. Field names mirror the
/// command-line flags and config-file keys.
struct RunConfig {
    std::string manifest;  // dataset manifest, or
    std::string synthetic; // synthetic kind
    Index synthetic_n = 400;
    double synthetic_noise = 0.05;

    std::string method = "sswim"; // sswim or ssgp
    ModelConfig model;
    TrainConfig train;
    Index repeats = 10;
    std::uint64_t seed = 0;
    double train_fraction = 2.0 / 3.0;
    Index max_rows = 0; // 0 keeps every row
    bool save_models = true;
    std::filesystem::path output_dir;

    std::vector<Index> pseudo_grid;
    std::vector<Index> depths;
};

/// Throws std::invalid_argument (a configuration error) on bad settings.
void validate(const RunConfig& config);

/// SSWIM_OUTPUT_DIR if set, otherwise ./sswim_output.
std::filesystem::path default_output_dir();

struct ReportRow {
    std::string dataset;
    std::string method;
    Index depth = 0;
    Index num_freqs = 0;
    Index n_pseudo = 0;
    std::string repeat; // index, or "mean" / "std" for summary rows
    double rmse = 0.0;
    double mnlp = 0.0;
    double wall_seconds = 0.0;
};

void write_report(const std::filesystem::path& path, const std::vector<ReportRow>& rows);

struct RepeatOutcome {
    ReportRow row;
    TrainTrace trace;
    SswimModel model;
    Scaler scaler;
};

Dataset load_dataset(const RunConfig& config);

/// One train/test split, standardization, training run and test evaluation.
/// depth 0 with method "ssgp" trains the plain stationary model directly.
RepeatOutcome run_repeat(const Dataset& data, const RunConfig& config, Index repeat);

int cmd_train(const RunConfig& config);
int cmd_sweep_pseudo(const RunConfig& config);
int cmd_sweep_depth(const RunConfig& config);
int cmd_overfit_trace(const RunConfig& config);

struct ExportConfig {
    std::filesystem::path model_path;
    std::vector<double> grid_min; // empty: bounding box of the conditioning inputs
    std::vector<double> grid_max;
    Index grid_points = 25; // per coordinate
    std::filesystem::path output_dir;
};

int cmd_export_warp(const ExportConfig& config);

struct SyntheticConfig {
    SyntheticSpec spec;
    std::filesystem::path output; // CSV path; a manifest is written next to it
};

int cmd_gen_synthetic(const SyntheticConfig& config);

/// Parses argv and dispatches to a subcommand. Returns the process exit code.
int run(int argc, char** argv);

} // namespace sswim::cli
