#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "sswim/model.hpp"
#include "sswim/objective.hpp"

namespace sswim {

enum class GradientMode { Analytic, FiniteDifference };

std::string_view to_string(GradientMode mode);
GradientMode parse_gradient_mode(std::string_view name);

struct TrainConfig {
    Index steps = 150;
    double learning_rate = 0.01;
    GradientMode gradient_mode = GradientMode::Analytic;
    double fd_epsilon = 1e-5;
    bool trace_test_metrics = false;
    /// Return the best objective seen rather than the last iterate.
    bool keep_best = true;
    std::uint64_t seed = 0;
};

void validate(const TrainConfig& config);

struct TraceRow {
    Index step = 0;
    double objective = 0.0;
    double test_rmse = std::numeric_limits<double>::quiet_NaN();
    double test_mnlp = std::numeric_limits<double>::quiet_NaN();
};

/// rows[0] is the initial model; rows[t] follows update t.
struct TrainTrace {
    std::vector<TraceRow> rows;
    Index best_step = 0;
    Index reversions = 0;
    /// Set when training stopped after repeated non-finite steps.
    bool aborted = false;
};

struct TestData {
    MatrixXd inputs;
    VectorXd targets;
};

struct Predictions {
    VectorXd mean;
    VectorXd var; // includes the observation noise
};

/// Adam with decay rates 0.9 / 0.999 and epsilon 1e-8.
class AdamOptimizer {
public:
    AdamOptimizer(Index size, double learning_rate);
    void step(VectorXd& theta, const VectorXd& gradient);
    double learning_rate() const { return learning_rate_; }
    void set_learning_rate(double lr) { learning_rate_ = lr; }

private:
    double learning_rate_;
    VectorXd first_;
    VectorXd second_;
    Index t_ = 0;
};

/// Evaluates (value, gradient) at theta; nullopt when the point is not finite.
using GradientOracle = std::function<std::optional<ObjectiveGradient>(const VectorXd&)>;
/// Fills test metrics for the parameters most recently evaluated successfully.
using TraceHook = std::function<void(TraceRow&)>;

struct OptimizeResult {
    VectorXd theta;
    TrainTrace trace;
};

/// Full-batch first-order loop shared by every model type. A non-finite step
/// is reverted and the learning rate halved; five consecutive reversions stop
/// the run.
OptimizeResult optimize(const VectorXd& theta0, const GradientOracle& oracle, const TrainConfig& config,
                        const TraceHook& hook = {});

struct TrainResult {
    SswimModel model;
    TrainTrace trace;
};

/// Trains all parameters jointly on (inputs, targets). The returned model is
/// conditioned on the training data and ready for predict_f.
TrainResult train(SswimModel model, const MatrixXd& inputs, const VectorXd& targets, const TrainConfig& config,
                  const TestData* test = nullptr);

/// Per row: propagate, expected top-level features, SSGP prediction. The
/// variance is that of a noisy observation, v + noise_var.
Predictions predict_f(const SswimModel& model, const MatrixXd& inputs);

/// Plain stationary SSGP with trainable lengthscales, amplitude and noise.
struct StationarySsgp {
    SpectralBasis basis;
    double noise_var;
    std::optional<SsgpPosterior> posterior;
};

/// Same frequencies, lengthscale and amplitude as the top level of
/// make_model(config, ...), so a depth-0 SSWIM model and this one coincide.
StationarySsgp make_stationary(const ModelConfig& config, Index dim);

VectorXd pack_parameters(const StationarySsgp& model);
void unpack_parameters(StationarySsgp& model, const VectorXd& theta);
ObjectiveGradient stationary_objective_and_gradient(StationarySsgp& model, const MatrixXd& inputs,
                                                    const VectorXd& targets);

struct StationaryTrainResult {
    StationarySsgp model;
    TrainTrace trace;
};

StationaryTrainResult train_stationary(StationarySsgp model, const MatrixXd& inputs, const VectorXd& targets,
                                       const TrainConfig& config, const TestData* test = nullptr);
Predictions predict_stationary(const StationarySsgp& model, const MatrixXd& inputs);

} // namespace sswim
