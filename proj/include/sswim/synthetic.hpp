#pragma once

#include <cstdint>
#include <string_view>

#include "sswim/data.hpp"

namespace sswim {

enum class SyntheticKind { StepsChirp1d, Gramacy2d };

std::string_view to_string(SyntheticKind kind);
SyntheticKind parse_synthetic_kind(std::string_view name);

struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::StepsChirp1d;
    Index n = 400;
    double noise_std = 0.05;
    std::uint64_t seed = 0;
};

/// f(x) = step(x) + chirp(x) on [0, 1], where step(x) is 1 for x < 1/3, -1 for
/// x < 2/3 and 0 otherwise, and chirp(x) = 0.5 sin(2 pi (4 + 36 x^2) x).
double steps_chirp(double x);

/// f(x1, x2) = x1 exp(-x1^2 - x2^2) on [-2, 6]^2.
double gramacy(double x1, double x2);

/// Inputs uniform on the domain, then i.i.d. N(0, noise_std^2) target noise.
Dataset generate(const SyntheticSpec& spec);

} // namespace sswim
