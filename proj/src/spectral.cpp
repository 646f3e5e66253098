#include "sswim/spectral.hpp"

#include <cmath>
#include <random>
#include <string>

#include "sswim/errors.hpp"

namespace sswim {

std::string_view to_string(KernelFamily family) {
    switch (family) {
    case KernelFamily::Matern32:
        return "matern32";
    case KernelFamily::RBF:
        return "rbf";
    }
    return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "matern32") return KernelFamily::Matern32;
    if (name == "rbf") return KernelFamily::RBF;
    throw std::invalid_argument("unknown kernel family '" + std::string(name) + "'");
}

MatrixXd sample_frequencies(KernelFamily family, Index num_freqs, Index dim, std::uint64_t seed) {
    if (num_freqs < 1 || dim < 1) {
        throw std::invalid_argument("sample_frequencies: need num_freqs >= 1 and dim >= 1");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::chi_squared_distribution<double> chi2(3.0);

    MatrixXd draws(num_freqs, dim);
    for (Index m = 0; m < num_freqs; ++m) {
        for (Index d = 0; d < dim; ++d) draws(m, d) = normal(rng);
        if (family == KernelFamily::Matern32) {
            draws.row(m) *= std::sqrt(3.0 / chi2(rng));
        }
    }
    return draws;
}

SpectralBasis::SpectralBasis(KernelFamily family, MatrixXd base_draws, VectorXd lengthscales, double amplitude)
    : family_(family), base_draws_(std::move(base_draws)) {
    if (base_draws_.rows() < 1 || base_draws_.cols() < 1) {
        throw std::invalid_argument("SpectralBasis: empty frequency matrix");
    }
    set_lengthscales(std::move(lengthscales));
    set_amplitude(amplitude);
}

SpectralBasis SpectralBasis::sample(KernelFamily family, Index num_freqs, Index dim, std::uint64_t seed,
                                    double lengthscale, double amplitude) {
    return SpectralBasis(family, sample_frequencies(family, num_freqs, dim, seed),
                         VectorXd::Constant(dim, lengthscale), amplitude);
}

void SpectralBasis::set_lengthscales(VectorXd lengthscales) {
    require_dim(lengthscales.size(), dim(), "SpectralBasis lengthscales");
    if (!(lengthscales.array() > 0.0).all()) {
        throw std::invalid_argument("SpectralBasis: lengthscales must be positive");
    }
    lengthscales_ = std::move(lengthscales);
}

void SpectralBasis::set_amplitude(double amplitude) {
    if (!(amplitude > 0.0)) throw std::invalid_argument("SpectralBasis: amplitude must be positive");
    amplitude_ = amplitude;
}

MatrixXd SpectralBasis::frequencies() const {
    return base_draws_.array().rowwise() / lengthscales_.transpose().array();
}

namespace {

// Writes the expected features of one input row into out (length 2M). The
// inner products are explicit loops so the result is independent of batching.
void expected_row(const MatrixXd& omega, double scale, const double* mean, const double* var, Index dim,
                  double* out) {
    const Index m_count = omega.rows();
    for (Index m = 0; m < m_count; ++m) {
        double phase = 0.0;
        double decay = 0.0;
        for (Index d = 0; d < dim; ++d) {
            const double w = omega(m, d);
            phase += w * mean[d];
            decay += w * w * var[d];
        }
        const double damp = scale * std::exp(-0.5 * decay);
        out[m] = damp * std::cos(phase);
        out[m_count + m] = damp * std::sin(phase);
    }
}

double feature_scale(const SpectralBasis& basis) {
    return basis.amplitude() / std::sqrt(static_cast<double>(basis.num_freqs()));
}

} // namespace

MatrixXd expected_feature_rows(const SpectralBasis& basis, const MatrixXd& means, const MatrixXd& vars) {
    require_dim(means.cols(), basis.dim(), "expected_feature_rows means");
    require_dim(vars.cols(), basis.dim(), "expected_feature_rows vars");
    require_dim(vars.rows(), means.rows(), "expected_feature_rows row count");
    const MatrixXd omega = basis.frequencies();
    const double scale = feature_scale(basis);
    const Index dim = basis.dim();

    // Row-major scratch keeps each input row contiguous.
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const RowMajor mu = means;
    const RowMajor sv = vars;
    RowMajor out(means.rows(), basis.num_features());
    for (Index n = 0; n < means.rows(); ++n) {
        expected_row(omega, scale, mu.row(n).data(), sv.row(n).data(), dim, out.row(n).data());
    }
    return out;
}

MatrixXd feature_rows(const SpectralBasis& basis, const MatrixXd& inputs) {
    return expected_feature_rows(basis, inputs, MatrixXd::Zero(inputs.rows(), inputs.cols()));
}

VectorXd expected_feature_map(const SpectralBasis& basis, const GaussianInput& input) {
    require_dim(input.mean.size(), basis.dim(), "expected_feature_map mean");
    require_dim(input.var.size(), basis.dim(), "expected_feature_map var");
    if ((input.var.array() < 0.0).any()) throw std::invalid_argument("expected_feature_map: negative variance");
    VectorXd out(basis.num_features());
    expected_row(basis.frequencies(), feature_scale(basis), input.mean.data(), input.var.data(), basis.dim(),
                 out.data());
    return out;
}

VectorXd feature_map(const SpectralBasis& basis, const VectorXd& x) {
    return expected_feature_map(basis, GaussianInput::dirac(x));
}

double expected_kernel(const SpectralBasis& basis, const GaussianInput& a, const GaussianInput& b) {
    return expected_feature_map(basis, a).dot(expected_feature_map(basis, b));
}

FeatureAdjoint expected_feature_rows_adjoint(const SpectralBasis& basis, const MatrixXd& means,
                                             const MatrixXd& vars, const MatrixXd& rows,
                                             const MatrixXd& grad_rows) {
    const Index m_count = basis.num_freqs();
    const MatrixXd omega = basis.frequencies();
    const auto cos_part = rows.leftCols(m_count).array();
    const auto sin_part = rows.rightCols(m_count).array();
    const auto grad_cos = grad_rows.leftCols(m_count).array();
    const auto grad_sin = grad_rows.rightCols(m_count).array();

    // d cos-feature / d phase = -sin-feature, d sin-feature / d phase = cos-feature;
    // both features are linear in the damping factor and the amplitude.
    const MatrixXd grad_phase = (grad_sin * cos_part - grad_cos * sin_part).matrix();
    const MatrixXd grad_log_damp = (grad_cos * cos_part + grad_sin * sin_part).matrix();
    const MatrixXd omega_sq = omega.array().square().matrix();

    FeatureAdjoint adj;
    adj.means = grad_phase * omega;
    adj.vars = -0.5 * (grad_log_damp * omega_sq);
    const MatrixXd grad_omega =
        grad_phase.transpose() * means - ((grad_log_damp.transpose() * vars).array() * omega.array()).matrix();
    // omega = z / l, so d omega / d log l = -omega.
    adj.log_lengthscales = -(grad_omega.array() * omega.array()).colwise().sum().transpose();
    adj.log_amplitude = grad_log_damp.sum();
    return adj;
}

} // namespace sswim
