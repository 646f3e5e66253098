#include "sswim/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace sswim {

std::string_view to_string(SyntheticKind kind) {
    return kind == SyntheticKind::StepsChirp1d ? "steps_chirp_1d" : "gramacy_2d";
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
    if (name == "steps_chirp_1d") return SyntheticKind::StepsChirp1d;
    if (name == "gramacy_2d") return SyntheticKind::Gramacy2d;
    throw std::invalid_argument("unknown synthetic kind '" + std::string(name) + "'");
}

double steps_chirp(double x) {
    const double step = x < 1.0 / 3.0 ? 1.0 : (x < 2.0 / 3.0 ? -1.0 : 0.0);
    const double chirp = 0.5 * std::sin(2.0 * std::numbers::pi * (4.0 + 36.0 * x * x) * x);
    return step + chirp;
}

double gramacy(double x1, double x2) { return x1 * std::exp(-x1 * x1 - x2 * x2); }

Dataset generate(const SyntheticSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("synthetic: n must be >= 1");
    if (!(spec.noise_std >= 0.0)) throw std::invalid_argument("synthetic: noise_std must be >= 0");
    std::mt19937_64 rng(spec.seed);
    Dataset d;
    d.name = std::string(to_string(spec.kind));
    d.target = "y";
    d.y.resize(spec.n);
    if (spec.kind == SyntheticKind::StepsChirp1d) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        d.x.resize(spec.n, 1);
        d.columns = {"x"};
        for (Index i = 0; i < spec.n; ++i) d.x(i, 0) = u(rng);
        for (Index i = 0; i < spec.n; ++i) d.y(i) = steps_chirp(d.x(i, 0));
    } else {
        std::uniform_real_distribution<double> u(-2.0, 6.0);
        d.x.resize(spec.n, 2);
        d.columns = {"x1", "x2"};
        for (Index i = 0; i < spec.n; ++i) {
            d.x(i, 0) = u(rng);
            d.x(i, 1) = u(rng);
        }
        for (Index i = 0; i < spec.n; ++i) d.y(i) = gramacy(d.x(i, 0), d.x(i, 1));
    }
    if (spec.noise_std > 0.0) {
        std::normal_distribution<double> noise(0.0, spec.noise_std);
        for (Index i = 0; i < spec.n; ++i) d.y(i) += noise(rng);
    }
    return d;
}

} // namespace sswim
