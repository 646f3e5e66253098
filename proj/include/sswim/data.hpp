#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace sswim {

using Eigen::Index;

struct Dataset {
    std::string name;
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::vector<std::string> columns; // feature names, one per column of x
    std::string target;
    std::vector<std::string> dropped_constant;

    Index size() const { return x.rows(); }
    Index dim() const { return x.cols(); }
};

enum class TargetTransform { None, Log1p };

std::string_view to_string(TargetTransform t);
TargetTransform parse_target_transform(std::string_view name);

struct Preprocessing {
    std::string target;
    std::vector<std::string> drop_columns;
    bool drop_constant = true;
    TargetTransform target_transform = TargetTransform::None;
};

/// Flat key=value file: path, target, drop_columns (comma separated),
/// drop_constant (true/false), target_transform (none/log1p). A relative path
/// is resolved against the manifest's directory.
struct Manifest {
    std::filesystem::path csv_path;
    Preprocessing preprocessing;
};

Manifest parse_manifest(const std::filesystem::path& path);

Dataset load_csv(const std::filesystem::path& path, const Preprocessing& prep);
Dataset load_manifest(const std::filesystem::path& path);

struct SplitIndices {
    std::vector<Index> train;
    std::vector<Index> test;
};

/// Uniform random permutation; the first floor(fraction * N) rows train.
SplitIndices split_indices(Index n, double train_fraction, std::uint64_t seed);

struct TrainTest {
    Dataset train;
    Dataset test;
};

TrainTest split(const Dataset& data, double train_fraction, std::uint64_t seed);

Dataset take_rows(const Dataset& data, const std::vector<Index>& rows);

/// Random subset of at most max_rows rows, in original order.
Dataset subsample(const Dataset& data, Index max_rows, std::uint64_t seed);

/// Column statistics of a training set (population standard deviation).
struct Scaler {
    Eigen::VectorXd x_mean;
    Eigen::VectorXd x_std;
    double y_mean = 0.0;
    double y_std = 1.0;

    static Scaler fit(const Dataset& train);

    Eigen::MatrixXd transform_x(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd inverse_x(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd transform_y(const Eigen::VectorXd& y) const;
    Eigen::VectorXd inverse_y(const Eigen::VectorXd& y) const;
    Dataset transform(const Dataset& data) const;
};

struct Standardized {
    Dataset train;
    Dataset test;
    Scaler scaler;
};

/// Statistics come from `train` alone.
Standardized standardize(const Dataset& train, const Dataset& test);

/// Header row then one row per sample: features followed by the target.
void write_csv(const std::filesystem::path& path, const Dataset& data);

} // namespace sswim
