#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "sswim/errors.hpp"
#include "sswim/ssgp.hpp"
#include "support.hpp"

using namespace sswim;
using namespace testing_support;

namespace {

// Function-space quantities with K = Phi Phi' + s I, straight from dense algebra.
struct DenseOracle {
    MatrixXd phi;
    Eigen::LDLT<MatrixXd> k;
    VectorXd y;

    DenseOracle(const MatrixXd& design, const VectorXd& targets, double s)
        : phi(design), k(design * design.transpose() + s * MatrixXd::Identity(design.rows(), design.rows())),
          y(targets) {}

    double nlml() const {
        const double logdet = k.vectorD().array().log().sum();
        return 0.5 * y.dot(k.solve(y)) + 0.5 * logdet + 0.5 * y.size() * std::log(2.0 * std::numbers::pi);
    }
    double mean(const VectorXd& f) const { return (phi * f).dot(k.solve(y)); }
    double var(const VectorXd& f) const {
        const VectorXd kf = phi * f;
        return f.squaredNorm() - kf.dot(k.solve(kf));
    }
};

} // namespace

TEST_CASE("weight-space posterior matches the dense function-space oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 5 + static_cast<Index>(rng() % 30);
        const Index m = 2 + static_cast<Index>(rng() % 14);
        const Index d = 1 + static_cast<Index>(rng() % 3);
        const SpectralBasis b = random_basis(trial % 2 ? KernelFamily::RBF : KernelFamily::Matern32, m, d, rng);
        const MatrixXd x = uniform_matrix(n, d, -2.0, 2.0, rng);
        const VectorXd y = uniform_vector(n, -1.0, 1.0, rng);
        const double s = std::uniform_real_distribution<double>(0.01, 0.5)(rng);
        const MatrixXd phi = feature_rows(b, x);
        const DenseOracle oracle(phi, y, s);
        CHECK(nlml(phi, y, s) == doctest::Approx(oracle.nlml()).epsilon(1e-9));
        const SsgpPosterior post = fit(b, x, y, s);
        const VectorXd f = feature_map(b, uniform_vector(d, -2.0, 2.0, rng));
        const SsgpPrediction p = predict(post, f);
        CHECK(std::abs(p.mean(0) - oracle.mean(f)) <= 1e-9);
        CHECK(std::abs(p.var - oracle.var(f)) <= 1e-9);
    }
}

TEST_CASE("multi-output posterior fits each column independently") {
    std::mt19937_64 rng(12);
    const SpectralBasis b = random_basis(KernelFamily::RBF, 6, 2, rng);
    const MatrixXd x = uniform_matrix(12, 2, -1.0, 1.0, rng);
    const MatrixXd y = uniform_matrix(12, 3, -1.0, 1.0, rng);
    const SsgpPosterior joint = fit(b, x, y, 0.1);
    const VectorXd f = feature_map(b, uniform_vector(2, -1.0, 1.0, rng));
    for (Index c = 0; c < 3; ++c) {
        const SsgpPosterior single = fit(b, x, y.col(c), 0.1);
        CHECK(predict(joint, f).mean(c) == doctest::Approx(predict(single, f).mean(0)).epsilon(1e-12));
    }
}

TEST_CASE("nlml gradient agrees with finite differences") {
    std::mt19937_64 rng(13);
    const MatrixXd phi = uniform_matrix(9, 6, -0.5, 0.5, rng);
    const VectorXd y = uniform_vector(9, -1.0, 1.0, rng);
    const double s = 0.2;
    const NlmlGradient g = nlml_with_gradient(phi, y, s);
    CHECK(g.value == nlml(phi, y, s));
    const double h = 1e-6;
    for (Index i = 0; i < phi.rows(); ++i) {
        for (Index k = 0; k < phi.cols(); ++k) {
            MatrixXd up = phi, dn = phi;
            up(i, k) += h;
            dn(i, k) -= h;
            CHECK(g.design(i, k) == doctest::Approx((nlml(up, y, s) - nlml(dn, y, s)) / (2 * h)).epsilon(1e-6));
        }
    }
    CHECK(g.noise_var == doctest::Approx((nlml(phi, y, s + h) - nlml(phi, y, s - h)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("Cholesky retries with jitter and then reports the component") {
    MatrixXd rank_one = MatrixXd::Zero(4, 3);
    rank_one.col(0).setOnes();
    CHECK_NOTHROW(regularized_cholesky(rank_one, 1e-300, "rank one"));
    MatrixXd broken = rank_one;
    broken(2, 1) = std::nan("");
    try {
        regularized_cholesky(broken, 0.1, "broken design");
        FAIL("expected a numerical error");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("broken design") != std::string::npos);
    }
}

TEST_CASE("prediction rejects mismatched feature vectors") {
    const SpectralBasis b = SpectralBasis::sample(KernelFamily::RBF, 4, 1, 1);
    const SsgpPosterior post = fit(b, MatrixXd::Random(5, 1), VectorXd::Random(5), 0.1);
    CHECK_THROWS_AS(predict(post, VectorXd::Zero(7)), std::invalid_argument);
    CHECK_THROWS_AS(nlml(MatrixXd::Zero(3, 8), VectorXd::Zero(3), 0.0), std::invalid_argument);
}
