#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sswim/ssgp.hpp"
#include "sswim/warp_stack.hpp"

namespace sswim {

inline constexpr Index kMaxDepth = 3;

/// Data the top-level SSGP is conditioned on.
struct Conditioning {
    MatrixXd inputs;
    VectorXd targets;
};

/// Warp stack feeding a stationary top-level SSGP through expected features.
struct SswimModel {
    WarpStack stack;
    SpectralBasis top_basis;
    double top_noise_var;
    std::uint64_t seed = 0;
    /// Refreshed by every objective evaluation.
    std::optional<SsgpPosterior> top_post;
    std::optional<Conditioning> conditioning;

    Index dim() const { return top_basis.dim(); }
    Index depth() const { return stack.depth(); }
};

struct ModelConfig {
    KernelFamily family = KernelFamily::Matern32;
    Index depth = 1;
    Index num_freqs = 256;  // top-level M
    Index warp_freqs = 256; // per warp GP
    Index n_pseudo = 1280;  // per warp GP
    double sigma_gamma = 0.1;
    double lengthscale = 1.0;
    double amplitude = 1.0;
    double noise_var = 0.1;
    double warp_lengthscale = 1.0;
    double warp_amplitude = 1.0;
    double warp_noise_var = 0.01;
    std::uint64_t seed = 0;
};

/// Builds an untrained model; pseudo-inputs are spread over the bounding box
/// of `inputs`.
SswimModel make_model(const ModelConfig& config, const MatrixXd& inputs);

/// Independent sub-seed for component `stream` of a model seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct ParameterSegment {
    std::string name;
    Index offset = 0;
    Index size = 0;
    bool log_scale = false;
};

/// Layout of the flat parameter vector: top lengthscales, amplitude and noise,
/// then per layer the g and h blocks (lengthscales, amplitude, noise, pseudo
/// inputs, pseudo targets). Positive quantities are stored as logarithms and
/// matrices row-major.
std::vector<ParameterSegment> parameter_schema(const SswimModel& model);
Index parameter_count(const SswimModel& model);

VectorXd pack_parameters(const SswimModel& model);

/// Writes theta into the model and refits every warp posterior. Any finite
/// theta yields a valid model. The top posterior is cleared.
void unpack_parameters(SswimModel& model, const VectorXd& theta);

} // namespace sswim
