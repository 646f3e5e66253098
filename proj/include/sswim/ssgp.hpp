#pragma once

#include <string_view>

#include "sswim/spectral.hpp"

namespace sswim {

/// Lower Cholesky factor of A = Phi' Phi + noise_var * I for a row-major
/// design Phi (N x F). One extra diagonal jitter of 1e-10 * trace(A) / F is
/// tried before giving up with a NumericalError naming `what`.
MatrixXd regularized_cholesky(const MatrixXd& design_rows, double noise_var, std::string_view what);

/// Solves (L L') X = B.
MatrixXd cholesky_solve(const MatrixXd& lower, const MatrixXd& rhs);

/// Weight-space posterior of a sparse spectrum GP with P independent outputs
/// sharing one feature map and one noise variance.
class SsgpPosterior {
public:
    SsgpPosterior(SpectralBasis basis, MatrixXd alpha, MatrixXd a_factor, double noise_var)
        : basis_(std::move(basis)), alpha_(std::move(alpha)), a_factor_(std::move(a_factor)), noise_var_(noise_var) {}

    const SpectralBasis& basis() const { return basis_; }
    /// 2M x P posterior weight means, A^-1 Phi Y.
    const MatrixXd& alpha() const { return alpha_; }
    /// Lower-triangular L with L L' = A.
    const MatrixXd& a_factor() const { return a_factor_; }
    double noise_var() const { return noise_var_; }
    Index num_outputs() const { return alpha_.cols(); }

private:
    SpectralBasis basis_;
    MatrixXd alpha_;
    MatrixXd a_factor_;
    double noise_var_;
};

SsgpPosterior fit(const SpectralBasis& basis, const MatrixXd& inputs, const MatrixXd& targets, double noise_var);

/// Same as fit() but with precomputed feature rows (N x 2M), e.g. expected
/// features of uncertain inputs.
SsgpPosterior fit_features(const SpectralBasis& basis, const MatrixXd& design_rows, const MatrixXd& targets,
                           double noise_var);

struct SsgpPrediction {
    VectorXd mean; // one entry per output
    double var = 0.0;
};

/// mean = alpha' feat, var = noise_var * feat' A^-1 feat. The variance is
/// that of the latent function and is shared across outputs.
SsgpPrediction predict(const SsgpPosterior& posterior, const VectorXd& feat);

/// Negative log marginal likelihood -log N(y; 0, Phi Phi' + s I) evaluated in
/// weight space, for a design with one feature row per datum.
double nlml(const MatrixXd& design_rows, const VectorXd& y, double noise_var);

struct NlmlGradient {
    double value = 0.0;
    MatrixXd design;        // dL / d design_rows
    double noise_var = 0.0; // dL / d noise_var
    MatrixXd a_factor;
    VectorXd weights;       // A^-1 Phi' y
};

NlmlGradient nlml_with_gradient(const MatrixXd& design_rows, const VectorXd& y, double noise_var);

} // namespace sswim
