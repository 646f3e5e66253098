#pragma once

#include <cstdint>
#include <random>

#include "sswim/model.hpp"

namespace testing_support {

using sswim::Index;
using sswim::MatrixXd;
using sswim::VectorXd;

inline MatrixXd uniform_matrix(Index rows, Index cols, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    MatrixXd m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index k = 0; k < cols; ++k) m(i, k) = u(rng);
    return m;
}

inline VectorXd uniform_vector(Index n, double lo, double hi, std::mt19937_64& rng) {
    return uniform_matrix(n, 1, lo, hi, rng).col(0);
}

inline sswim::SpectralBasis random_basis(sswim::KernelFamily family, Index m, Index d, std::mt19937_64& rng) {
    auto b = sswim::SpectralBasis::sample(family, m, d, rng());
    b.set_lengthscales(uniform_vector(d, 0.4, 2.0, rng));
    b.set_amplitude(std::uniform_real_distribution<double>(0.5, 1.5)(rng));
    return b;
}

/// A warp layer with every pseudo target perturbed away from the identity.
inline sswim::WarpLayer random_layer(Index d, Index m, Index n_pseudo, std::mt19937_64& rng) {
    using sswim::KernelFamily;
    const VectorXd lo = VectorXd::Constant(d, -1.0);
    const VectorXd hi = VectorXd::Constant(d, 1.0);
    const double gn = std::uniform_real_distribution<double>(0.01, 0.2)(rng);
    const double hn = std::uniform_real_distribution<double>(0.01, 0.2)(rng);
    return sswim::init_warp_layer(lo, hi, {n_pseudo, 0.4, rng()}, random_basis(KernelFamily::Matern32, m, d, rng),
                                  random_basis(KernelFamily::RBF, m, d, rng), gn, hn);
}

struct Problem {
    MatrixXd x;
    VectorXd y;
};

inline Problem wavy_problem(Index n, Index d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Problem p{uniform_matrix(n, d, -1.0, 1.0, rng), VectorXd(n)};
    std::normal_distribution<double> noise(0.0, 0.1);
    for (Index i = 0; i < n; ++i) p.y(i) = (2.0 * p.x.row(i).array()).sin().sum() + noise(rng);
    return p;
}

} // namespace testing_support
