#include "sswim/train.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sswim/errors.hpp"
#include "sswim/metrics.hpp"

namespace sswim {

std::string_view to_string(GradientMode mode) {
    return mode == GradientMode::Analytic ? "analytic" : "finite-difference";
}

GradientMode parse_gradient_mode(std::string_view name) {
    if (name == "analytic" || name == "analytic-checked") return GradientMode::Analytic;
    if (name == "finite-difference") return GradientMode::FiniteDifference;
    throw std::invalid_argument("unknown gradient mode '" + std::string(name) + "'");
}

void validate(const TrainConfig& config) {
    if (config.steps < 0) throw std::invalid_argument("train: steps must be >= 0");
    if (!(config.learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be positive");
    if (!(config.fd_epsilon > 0.0)) throw std::invalid_argument("train: fd_epsilon must be positive");
}

AdamOptimizer::AdamOptimizer(Index size, double learning_rate)
    : learning_rate_(learning_rate), first_(VectorXd::Zero(size)), second_(VectorXd::Zero(size)) {}

void AdamOptimizer::step(VectorXd& theta, const VectorXd& gradient) {
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    ++t_;
    first_ = beta1 * first_ + (1.0 - beta1) * gradient;
    second_ = beta2 * second_ + (1.0 - beta2) * gradient.cwiseAbs2();
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
    theta.array() -= learning_rate_ * (first_.array() / c1) / ((second_.array() / c2).sqrt() + eps);
}

OptimizeResult optimize(const VectorXd& theta0, const GradientOracle& oracle, const TrainConfig& config,
                        const TraceHook& hook) {
    validate(config);
    constexpr Index kMaxConsecutiveReversions = 5;

    OptimizeResult out;
    out.theta = theta0;
    auto first = oracle(theta0);
    if (!first) throw NumericalError("objective is not finite at the initial parameters");

    TraceRow row{0, first->value};
    if (hook) hook(row);
    out.trace.rows.push_back(row);

    VectorXd theta = theta0;
    VectorXd grad = std::move(first->gradient);
    double best = first->value;
    AdamOptimizer adam(theta.size(), config.learning_rate);
    Index consecutive = 0;

    for (Index step = 1; step <= config.steps; ++step) {
        const AdamOptimizer saved = adam;
        VectorXd candidate = theta;
        adam.step(candidate, grad);
        auto result = oracle(candidate);
        if (!result) {
            adam = saved;
            adam.set_learning_rate(0.5 * adam.learning_rate());
            ++out.trace.reversions;
            TraceRow repeat = out.trace.rows.back();
            repeat.step = step;
            out.trace.rows.push_back(repeat);
            if (++consecutive >= kMaxConsecutiveReversions) {
                out.trace.aborted = true;
                break;
            }
            continue;
        }
        consecutive = 0;
        theta = std::move(candidate);
        grad = std::move(result->gradient);
        TraceRow next{step, result->value};
        if (hook) hook(next);
        out.trace.rows.push_back(next);
        if (result->value < best) {
            best = result->value;
            out.trace.best_step = step;
            if (config.keep_best) out.theta = theta;
        }
    }
    if (!config.keep_best) {
        out.theta = theta;
        out.trace.best_step = out.trace.rows.back().step;
    }
    return out;
}

namespace {

void fill_metrics(TraceRow& row, const Predictions& p, const TestData& test) {
    row.test_rmse = rmse(test.targets, p.mean);
    row.test_mnlp = mnlp(test.targets, p.mean, p.var);
}

} // namespace

TrainResult train(SswimModel model, const MatrixXd& inputs, const VectorXd& targets, const TrainConfig& config,
                  const TestData* test) {
    validate(config);
    TrainResult out{std::move(model), {}};
    SswimModel& m = out.model;

    const GradientOracle oracle = [&](const VectorXd& theta) -> std::optional<ObjectiveGradient> {
        try {
            unpack_parameters(m, theta);
            if (config.gradient_mode == GradientMode::Analytic) return objective_and_gradient(m, inputs, targets);
            ObjectiveGradient r;
            r.value = objective(m, inputs, targets);
            r.gradient = finite_difference_gradient(m, inputs, targets, config.fd_epsilon);
            return r;
        } catch (const NumericalError&) {
            return std::nullopt;
        }
    };
    TraceHook hook;
    if (test != nullptr && config.trace_test_metrics) {
        hook = [&](TraceRow& row) { fill_metrics(row, predict_f(m, test->inputs), *test); };
    }

    OptimizeResult result = optimize(pack_parameters(m), oracle, config, hook);
    unpack_parameters(m, result.theta);
    condition(m, inputs, targets);
    out.trace = std::move(result.trace);
    return out;
}

Predictions predict_f(const SswimModel& model, const MatrixXd& inputs) {
    if (!model.top_post) throw std::logic_error("predict_f: model is not conditioned on data");
    require_dim(inputs.cols(), model.dim(), "predict_f inputs");
    const SsgpPosterior& post = *model.top_post;
    Predictions out{VectorXd(inputs.rows()), VectorXd(inputs.rows())};
    for (Index i = 0; i < inputs.rows(); ++i) {
        const GaussianInput warped = propagate(model.stack, inputs.row(i).transpose());
        const SsgpPrediction p = predict(post, expected_feature_map(post.basis(), warped));
        out.mean(i) = p.mean(0);
        out.var(i) = p.var + post.noise_var();
    }
    return out;
}

StationarySsgp make_stationary(const ModelConfig& config, Index dim) {
    return StationarySsgp{SpectralBasis::sample(config.family, config.num_freqs, dim, derive_seed(config.seed, 0),
                                                config.lengthscale, config.amplitude),
                          config.noise_var, std::nullopt};
}

VectorXd pack_parameters(const StationarySsgp& model) {
    const Index d = model.basis.dim();
    VectorXd theta(d + 2);
    theta.head(d) = model.basis.lengthscales().array().log().matrix();
    theta(d) = std::log(model.basis.amplitude());
    theta(d + 1) = std::log(model.noise_var);
    return theta;
}

void unpack_parameters(StationarySsgp& model, const VectorXd& theta) {
    const Index d = model.basis.dim();
    require_dim(theta.size(), d + 2, "stationary parameters");
    if (!theta.allFinite()) throw NumericalError("non-finite parameter vector");
    const VectorXd positive = theta.array().exp().matrix();
    if (!(positive.array() > 0.0).all() || !positive.allFinite()) {
        throw NumericalError("parameter transform left the positive range");
    }
    model.basis.set_lengthscales(positive.head(d));
    model.basis.set_amplitude(positive(d));
    model.noise_var = positive(d + 1);
    model.posterior.reset();
}

ObjectiveGradient stationary_objective_and_gradient(StationarySsgp& model, const MatrixXd& inputs,
                                                    const VectorXd& targets) {
    const MatrixXd design = feature_rows(model.basis, inputs);
    const NlmlGradient nl = nlml_with_gradient(design, targets, model.noise_var);
    if (!std::isfinite(nl.value)) throw NumericalError("non-finite intermediate: negative log marginal likelihood");
    const FeatureAdjoint adj = expected_feature_rows_adjoint(
        model.basis, inputs, MatrixXd::Zero(inputs.rows(), inputs.cols()), design, nl.design);
    model.posterior.emplace(model.basis, nl.weights, nl.a_factor, model.noise_var);

    const Index d = model.basis.dim();
    ObjectiveGradient out;
    out.value = nl.value;
    out.gradient.resize(d + 2);
    out.gradient.head(d) = adj.log_lengthscales;
    out.gradient(d) = adj.log_amplitude;
    out.gradient(d + 1) = nl.noise_var * model.noise_var;
    if (!out.gradient.allFinite()) throw NumericalError("non-finite intermediate: gradient");
    return out;
}

StationaryTrainResult train_stationary(StationarySsgp model, const MatrixXd& inputs, const VectorXd& targets,
                                       const TrainConfig& config, const TestData* test) {
    validate(config);
    StationaryTrainResult out{std::move(model), {}};
    StationarySsgp& m = out.model;
    const GradientOracle oracle = [&](const VectorXd& theta) -> std::optional<ObjectiveGradient> {
        try {
            unpack_parameters(m, theta);
            return stationary_objective_and_gradient(m, inputs, targets);
        } catch (const NumericalError&) {
            return std::nullopt;
        }
    };
    TraceHook hook;
    if (test != nullptr && config.trace_test_metrics) {
        hook = [&](TraceRow& row) { fill_metrics(row, predict_stationary(m, test->inputs), *test); };
    }
    OptimizeResult result = optimize(pack_parameters(m), oracle, config, hook);
    unpack_parameters(m, result.theta);
    stationary_objective_and_gradient(m, inputs, targets);
    out.trace = std::move(result.trace);
    return out;
}

Predictions predict_stationary(const StationarySsgp& model, const MatrixXd& inputs) {
    if (!model.posterior) throw std::logic_error("predict_stationary: model is not conditioned on data");
    const SsgpPosterior& post = *model.posterior;
    Predictions out{VectorXd(inputs.rows()), VectorXd(inputs.rows())};
    for (Index i = 0; i < inputs.rows(); ++i) {
        const SsgpPrediction p = predict(post, feature_map(post.basis(), inputs.row(i).transpose()));
        out.mean(i) = p.mean(0);
        out.var(i) = p.var + post.noise_var();
    }
    return out;
}

} // namespace sswim
