#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace sswim {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class KernelFamily { Matern32, RBF };

std::string_view to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view name);

/// Diagonal Gaussian measure N(mean, diag(var)) on the input space.
/// A zero variance vector is a Dirac measure at `mean`.
struct GaussianInput {
    VectorXd mean;
    VectorXd var;

    static GaussianInput dirac(const VectorXd& x) { return {x, VectorXd::Zero(x.size())}; }
    Index dim() const { return mean.size(); }
};

/// Unit-scale spectral draws, one row per frequency.
///
/// RBF rows are i.i.d. standard normal. Matern 3/2 rows are multivariate
/// Student-t with 3 degrees of freedom: a standard normal row scaled by
/// sqrt(3 / chi2_3). The result is a pure function of the arguments.
MatrixXd sample_frequencies(KernelFamily family, Index num_freqs, Index dim, std::uint64_t seed);

/// Random Fourier feature basis for a stationary kernel.
///
/// Effective frequencies are base_draws ./ lengthscales (row-wise). The feature
/// vector has 2M entries: M cosines followed by M sines, scaled by
/// amplitude / sqrt(M) so that phi(x)' phi(x) = amplitude^2.
class SpectralBasis {
public:
    SpectralBasis(KernelFamily family, MatrixXd base_draws, VectorXd lengthscales, double amplitude);

    static SpectralBasis sample(KernelFamily family, Index num_freqs, Index dim, std::uint64_t seed,
                                double lengthscale = 1.0, double amplitude = 1.0);

    KernelFamily family() const { return family_; }
    Index num_freqs() const { return base_draws_.rows(); }
    Index dim() const { return base_draws_.cols(); }
    Index num_features() const { return 2 * base_draws_.rows(); }

    const MatrixXd& base_draws() const { return base_draws_; }
    const VectorXd& lengthscales() const { return lengthscales_; }
    double amplitude() const { return amplitude_; }

    void set_lengthscales(VectorXd lengthscales);
    void set_amplitude(double amplitude);

    /// M x D matrix of omega_m = z_m ./ lengthscales.
    MatrixXd frequencies() const;

private:
    KernelFamily family_;
    MatrixXd base_draws_;
    VectorXd lengthscales_;
    double amplitude_;
};

VectorXd feature_map(const SpectralBasis& basis, const VectorXd& x);

/// Closed-form E[phi(x~)] for x~ ~ N(mean, diag(var)). Each cos/sin pair is
/// damped by exp(-0.5 * sum_d omega_d^2 var_d).
VectorXd expected_feature_map(const SpectralBasis& basis, const GaussianInput& input);

/// E[phi(a)]' E[phi(b)].
double expected_kernel(const SpectralBasis& basis, const GaussianInput& a, const GaussianInput& b);

// Row-batched forms: one output row per input row. Rows are computed
// independently, so a row's features do not depend on the batch it is in.
MatrixXd feature_rows(const SpectralBasis& basis, const MatrixXd& inputs);
MatrixXd expected_feature_rows(const SpectralBasis& basis, const MatrixXd& means, const MatrixXd& vars);

/// Reverse-mode sensitivities of expected_feature_rows.
struct FeatureAdjoint {
    MatrixXd means;            // N x D
    MatrixXd vars;             // N x D
    VectorXd log_lengthscales; // D
    double log_amplitude = 0.0;
};

/// Pulls `grad_rows` (dL/dfeatures, N x 2M) back through the expected feature
/// map. `rows` must be the forward output for (means, vars).
FeatureAdjoint expected_feature_rows_adjoint(const SpectralBasis& basis, const MatrixXd& means,
                                             const MatrixXd& vars, const MatrixXd& rows,
                                             const MatrixXd& grad_rows);

} // namespace sswim
