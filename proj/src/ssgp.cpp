#include "sswim/ssgp.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sswim/errors.hpp"

namespace sswim {

namespace {

MatrixXd gram_lower(const MatrixXd& design_rows, double noise_var) {
    const Index f = design_rows.cols();
    MatrixXd a = MatrixXd::Zero(f, f);
    a.selfadjointView<Eigen::Lower>().rankUpdate(design_rows.transpose());
    a.diagonal().array() += noise_var;
    return a;
}

} // namespace

MatrixXd regularized_cholesky(const MatrixXd& design_rows, double noise_var, std::string_view what) {
    if (!(noise_var > 0.0)) {
        throw std::invalid_argument(std::string(what) + ": noise variance must be positive");
    }
    MatrixXd a = gram_lower(design_rows, noise_var);
    Eigen::LLT<MatrixXd, Eigen::Lower> llt(a);
    // Eigen reports success on NaN input, so the factor is checked as well.
    auto usable = [&] { return llt.info() == Eigen::Success && llt.matrixLLT().allFinite(); };
    if (usable()) return llt.matrixL();

    const double jitter = 1e-10 * a.trace() / static_cast<double>(a.rows());
    a.diagonal().array() += jitter;
    llt.compute(a);
    if (usable()) return llt.matrixL();

    std::ostringstream msg;
    msg << what << ": Cholesky of A = Phi'Phi + s I failed (size " << a.rows() << ", noise_var " << noise_var
        << ", diag min " << a.diagonal().minCoeff() << ", diag max " << a.diagonal().maxCoeff() << ", trace "
        << a.trace() << ", finite " << (a.allFinite() ? "yes" : "no") << ")";
    throw NumericalError(msg.str());
}

MatrixXd cholesky_solve(const MatrixXd& lower, const MatrixXd& rhs) {
    const auto l = lower.triangularView<Eigen::Lower>();
    MatrixXd x = l.solve(rhs);
    l.transpose().solveInPlace(x);
    return x;
}

SsgpPosterior fit_features(const SpectralBasis& basis, const MatrixXd& design_rows, const MatrixXd& targets,
                           double noise_var) {
    require_dim(design_rows.cols(), basis.num_features(), "ssgp fit feature count");
    require_dim(targets.rows(), design_rows.rows(), "ssgp fit target rows");
    if (design_rows.rows() < 1) throw std::invalid_argument("ssgp fit: need at least one datum");
    MatrixXd factor = regularized_cholesky(design_rows, noise_var, "ssgp fit");
    MatrixXd alpha = cholesky_solve(factor, design_rows.transpose() * targets);
    return SsgpPosterior(basis, std::move(alpha), std::move(factor), noise_var);
}

SsgpPosterior fit(const SpectralBasis& basis, const MatrixXd& inputs, const MatrixXd& targets, double noise_var) {
    require_dim(inputs.cols(), basis.dim(), "ssgp fit inputs");
    return fit_features(basis, feature_rows(basis, inputs), targets, noise_var);
}

SsgpPrediction predict(const SsgpPosterior& posterior, const VectorXd& feat) {
    require_dim(feat.size(), posterior.basis().num_features(), "ssgp predict feature length");
    SsgpPrediction out;
    out.mean = posterior.alpha().transpose() * feat;
    const VectorXd half = posterior.a_factor().triangularView<Eigen::Lower>().solve(feat);
    out.var = posterior.noise_var() * half.squaredNorm();
    return out;
}

namespace {

struct WeightSpaceFit {
    MatrixXd factor;
    VectorXd weights;
    VectorXd residual;
    double value = 0.0;
};

WeightSpaceFit weight_space_fit(const MatrixXd& design_rows, const VectorXd& y, double s) {
    require_dim(y.size(), design_rows.rows(), "nlml target length");
    if (design_rows.rows() < 1) throw std::invalid_argument("nlml: need at least one datum");
    WeightSpaceFit fit;
    fit.factor = regularized_cholesky(design_rows, s, "nlml");
    fit.weights = cholesky_solve(fit.factor, design_rows.transpose() * y);
    fit.residual = y - design_rows * fit.weights;

    const double n = static_cast<double>(design_rows.rows());
    const double m = 0.5 * static_cast<double>(design_rows.cols());
    // y' r = y'y - y' Phi A^-1 Phi' y
    const double quad = y.dot(fit.residual) / (2.0 * s);
    const double log_det = fit.factor.diagonal().array().log().sum();
    fit.value = quad + log_det - m * std::log(s) + 0.5 * n * std::log(2.0 * std::numbers::pi * s);
    return fit;
}

} // namespace

double nlml(const MatrixXd& design_rows, const VectorXd& y, double noise_var) {
    return weight_space_fit(design_rows, y, noise_var).value;
}

NlmlGradient nlml_with_gradient(const MatrixXd& design_rows, const VectorXd& y, double noise_var) {
    WeightSpaceFit fit = weight_space_fit(design_rows, y, noise_var);
    const double s = noise_var;
    const double n = static_cast<double>(design_rows.rows());
    const double f = static_cast<double>(design_rows.cols());
    const double y_r = y.dot(fit.residual);

    const MatrixXd& factor = fit.factor;
    const MatrixXd l_inv =
        factor.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(factor.rows(), factor.cols()));

    NlmlGradient out;
    out.value = fit.value;
    // dL/dPhi = Phi A^-1 - r a' / s
    out.design = (design_rows * l_inv.transpose()) * l_inv;
    out.design.noalias() -= (fit.residual / s) * fit.weights.transpose();
    out.noise_var = -y_r / (2.0 * s * s) + fit.weights.squaredNorm() / (2.0 * s) + 0.5 * l_inv.squaredNorm() -
                    0.5 * f / s + 0.5 * n / s;
    out.a_factor = std::move(fit.factor);
    out.weights = std::move(fit.weights);
    return out;
}

} // namespace sswim
