#pragma once

#include "sswim/model.hpp"

namespace sswim {

/// Negative log marginal likelihood of y under the model: warp posteriors are
/// taken from the (always coherent) layer caches, inputs are propagated
/// through the stack and the top SSGP is fit on their expected features.
/// Refreshes model.top_post.
double objective(SswimModel& model, const MatrixXd& inputs, const VectorXd& targets);

struct ObjectiveGradient {
    double value = 0.0;
    VectorXd gradient; // d objective / d theta, in parameter_schema order
};

/// Value and exact gradient by reverse accumulation through every stage.
/// Throws NumericalError naming the first non-finite intermediate.
ObjectiveGradient objective_and_gradient(SswimModel& model, const MatrixXd& inputs, const VectorXd& targets);

VectorXd gradient(SswimModel& model, const MatrixXd& inputs, const VectorXd& targets);

/// Central differences with step rel_step * max(1, |theta_i|).
VectorXd finite_difference_gradient(const SswimModel& model, const MatrixXd& inputs, const VectorXd& targets,
                                    double rel_step = 1e-5);

/// Evaluates the objective and stores the conditioning data so the model can
/// predict (and be saved with everything needed to reproduce predictions).
double condition(SswimModel& model, const MatrixXd& inputs, const VectorXd& targets);

} // namespace sswim
