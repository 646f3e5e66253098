#include "sswim/objective.hpp"

#include <string>

#include "sswim/errors.hpp"

namespace sswim {

namespace {

void check_finite(const MatrixXd& m, const std::string& what) {
    if (!m.allFinite()) throw NumericalError("non-finite intermediate: " + what);
}

// Predictions of one pseudo GP at a batch of Gaussian inputs.
struct GpForward {
    MatrixXd features; // N x F expected features
    MatrixXd solved;   // N x F, features * A^-1
    MatrixXd mean;     // N x D
    VectorXd var;      // N
};

GpForward forward_gp(const PseudoGp& gp, const SsgpPosterior& post, const MatrixXd& means, const MatrixXd& vars) {
    GpForward f;
    f.features = expected_feature_rows(gp.basis, means, vars);
    const auto lower = post.a_factor().triangularView<Eigen::Lower>();
    MatrixXd half = lower.solve(f.features.transpose());
    f.var = gp.noise_var * half.colwise().squaredNorm().transpose();
    lower.transpose().solveInPlace(half);
    f.solved = half.transpose();
    f.mean = f.features * post.alpha();
    return f;
}

struct LayerTape {
    MatrixXd in_mean;
    MatrixXd in_var;
    GpForward g;
    GpForward h;
};

struct GpGradient {
    VectorXd log_lengthscales;
    double log_amplitude = 0.0;
    double log_noise_var = 0.0;
    MatrixXd inputs;
    MatrixXd targets;
};

// Pulls (dL/dmean, dL/dvar) of the GP predictions back to the GP's parameters
// and to the (uncertain) query inputs.
GpGradient backward_gp(const PseudoGp& gp, const SsgpPosterior& post, const MatrixXd& in_mean,
                       const MatrixXd& in_var, const GpForward& fwd, const MatrixXd& grad_mean,
                       const VectorXd& grad_var, MatrixXd& grad_in_mean, MatrixXd& grad_in_var) {
    const double s = gp.noise_var;
    const MatrixXd& alpha = post.alpha();

    MatrixXd grad_features = grad_mean * alpha.transpose();
    grad_features += (2.0 * s) * (fwd.solved.array().colwise() * grad_var.array()).matrix();

    // alpha = A^-1 P' Y and var_i = s f_i' A^-1 f_i
    const MatrixXd grad_alpha = fwd.features.transpose() * grad_mean;
    const MatrixXd w = cholesky_solve(post.a_factor(), grad_alpha);
    MatrixXd grad_a = -s * ((fwd.solved.array().colwise() * grad_var.array()).matrix().transpose() * fwd.solved);
    grad_a.noalias() -= w * alpha.transpose();

    const MatrixXd pseudo_features = feature_rows(gp.basis, gp.inputs);
    MatrixXd grad_pseudo = gp.targets * w.transpose();
    grad_pseudo.noalias() += pseudo_features * (grad_a + grad_a.transpose());

    GpGradient out;
    out.targets = pseudo_features * w;
    const double grad_s = grad_var.dot(fwd.var) / s + grad_a.trace();
    out.log_noise_var = grad_s * s;

    const FeatureAdjoint query = expected_feature_rows_adjoint(gp.basis, in_mean, in_var, fwd.features, grad_features);
    grad_in_mean += query.means;
    grad_in_var += query.vars;
    const FeatureAdjoint pseudo = expected_feature_rows_adjoint(
        gp.basis, gp.inputs, MatrixXd::Zero(gp.inputs.rows(), gp.inputs.cols()), pseudo_features, grad_pseudo);
    out.inputs = pseudo.means;
    out.log_lengthscales = query.log_lengthscales + pseudo.log_lengthscales;
    out.log_amplitude = query.log_amplitude + pseudo.log_amplitude;
    return out;
}

class Evaluation {
public:
    Evaluation(SswimModel& model, const MatrixXd& inputs, const VectorXd& targets)
        : model_(model), inputs_(inputs), targets_(targets) {
        require_dim(inputs.cols(), model.dim(), "objective inputs");
        require_dim(targets.size(), inputs.rows(), "objective targets");
    }

    double forward() {
        MatrixXd mean = inputs_;
        MatrixXd var = MatrixXd::Zero(inputs_.rows(), inputs_.cols());
        const auto& layers = model_.stack.layers();
        tapes_.clear();
        for (std::size_t j = 0; j < layers.size(); ++j) {
            const WarpLayer& layer = layers[j];
            const std::string tag = "layer " + std::to_string(j);
            check_finite(layer.g_posterior().alpha(), tag + " g posterior");
            check_finite(layer.h_posterior().alpha(), tag + " h posterior");
            LayerTape tape{mean, var, forward_gp(layer.g(), layer.g_posterior(), mean, var),
                           forward_gp(layer.h(), layer.h_posterior(), mean, var)};
            check_finite(tape.g.mean, tag + " g predictive mean");
            check_finite(tape.g.var, tag + " g predictive variance");
            check_finite(tape.h.mean, tag + " h predictive mean");
            check_finite(tape.h.var, tag + " h predictive variance");

            const auto& m = tape.in_mean.array();
            const auto& v = tape.in_var.array();
            const auto& mu_g = tape.g.mean.array();
            mean = (mu_g * m + tape.h.mean.array()).matrix();
            var = ((v.colwise() * tape.g.var.array()) + v * mu_g.square() +
                   (m.square().colwise() * tape.g.var.array()))
                      .matrix();
            var.array().colwise() += tape.h.var.array();
            check_finite(mean, tag + " warped mean");
            check_finite(var, tag + " warped variance");
            tapes_.push_back(std::move(tape));
        }
        top_mean_ = std::move(mean);
        top_var_ = std::move(var);
        design_ = expected_feature_rows(model_.top_basis, top_mean_, top_var_);
        check_finite(design_, "top-level expected features");

        nlml_ = nlml_with_gradient(design_, targets_, model_.top_noise_var);
        if (!std::isfinite(nlml_.value)) throw NumericalError("non-finite intermediate: negative log marginal likelihood");
        model_.top_post.emplace(model_.top_basis, nlml_.weights, nlml_.a_factor, model_.top_noise_var);
        return nlml_.value;
    }

    VectorXd backward() const {
        VectorXd grad(parameter_count(model_));
        const auto schema = parameter_schema(model_);
        Index seg = 0;
        auto put = [&](const auto& value) {
            const ParameterSegment& s = schema[static_cast<std::size_t>(seg++)];
            if constexpr (std::is_arithmetic_v<std::decay_t<decltype(value)>>) {
                grad(s.offset) = value;
            } else {
                using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
                const RowMajor r = value;
                grad.segment(s.offset, s.size) = Eigen::Map<const VectorXd>(r.data(), r.size());
            }
        };

        const FeatureAdjoint top =
            expected_feature_rows_adjoint(model_.top_basis, top_mean_, top_var_, design_, nlml_.design);
        put(top.log_lengthscales);
        put(top.log_amplitude);
        put(nlml_.noise_var * model_.top_noise_var);

        MatrixXd grad_mean = top.means;
        MatrixXd grad_var = top.vars;
        std::vector<std::pair<GpGradient, GpGradient>> layer_grads(tapes_.size());
        const auto& layers = model_.stack.layers();
        for (std::size_t j = tapes_.size(); j-- > 0;) {
            const LayerTape& t = tapes_[j];
            const auto& m = t.in_mean.array();
            const auto& v = t.in_var.array();
            const auto& mu_g = t.g.mean.array();
            const auto& gm = grad_mean.array();
            const auto& gv = grad_var.array();

            const MatrixXd grad_mu_g = (gm * m + 2.0 * gv * v * mu_g).matrix();
            const MatrixXd& grad_mu_h = grad_mean;
            const VectorXd grad_var_g = (gv * (v + m.square())).rowwise().sum().matrix();
            const VectorXd grad_var_h = gv.rowwise().sum().matrix();

            MatrixXd grad_in_mean = (gm * mu_g + 2.0 * ((gv * m).colwise() * t.g.var.array())).matrix();
            MatrixXd grad_in_var = (gv * ((mu_g.square()).colwise() + t.g.var.array())).matrix();

            const WarpLayer& layer = layers[j];
            layer_grads[j].first = backward_gp(layer.g(), layer.g_posterior(), t.in_mean, t.in_var, t.g, grad_mu_g,
                                               grad_var_g, grad_in_mean, grad_in_var);
            layer_grads[j].second = backward_gp(layer.h(), layer.h_posterior(), t.in_mean, t.in_var, t.h, grad_mu_h,
                                                grad_var_h, grad_in_mean, grad_in_var);
            grad_mean = std::move(grad_in_mean);
            grad_var = std::move(grad_in_var);
        }
        for (const auto& [g, h] : layer_grads) {
            for (const GpGradient* gp : {&g, &h}) {
                put(gp->log_lengthscales);
                put(gp->log_amplitude);
                put(gp->log_noise_var);
                put(gp->inputs);
                put(gp->targets);
            }
        }
        if (!grad.allFinite()) throw NumericalError("non-finite intermediate: gradient");
        return grad;
    }

private:
    SswimModel& model_;
    const MatrixXd& inputs_;
    const VectorXd& targets_;
    std::vector<LayerTape> tapes_;
    MatrixXd top_mean_;
    MatrixXd top_var_;
    MatrixXd design_;
    NlmlGradient nlml_;
};

} // namespace

double objective(SswimModel& model, const MatrixXd& inputs, const VectorXd& targets) {
    // TODO: a value-only pass could skip the A^-1 products nlml_with_gradient forms for the backward sweep.
    Evaluation eval(model, inputs, targets);
    return eval.forward();
}

ObjectiveGradient objective_and_gradient(SswimModel& model, const MatrixXd& inputs, const VectorXd& targets) {
    Evaluation eval(model, inputs, targets);
    ObjectiveGradient out;
    out.value = eval.forward();
    out.gradient = eval.backward();
    return out;
}

VectorXd gradient(SswimModel& model, const MatrixXd& inputs, const VectorXd& targets) {
    return objective_and_gradient(model, inputs, targets).gradient;
}

VectorXd finite_difference_gradient(const SswimModel& model, const MatrixXd& inputs, const VectorXd& targets,
                                    double rel_step) {
    const VectorXd theta = pack_parameters(model);
    SswimModel probe = model;
    VectorXd grad(theta.size());
    for (Index i = 0; i < theta.size(); ++i) {
        const double step = rel_step * std::max(1.0, std::abs(theta(i)));
        VectorXd shifted = theta;
        shifted(i) = theta(i) + step;
        unpack_parameters(probe, shifted);
        const double up = objective(probe, inputs, targets);
        shifted(i) = theta(i) - step;
        unpack_parameters(probe, shifted);
        const double down = objective(probe, inputs, targets);
        grad(i) = (up - down) / (2.0 * step);
    }
    return grad;
}

double condition(SswimModel& model, const MatrixXd& inputs, const VectorXd& targets) {
    const double value = objective(model, inputs, targets);
    model.conditioning = Conditioning{inputs, targets};
    return value;
}

} // namespace sswim
