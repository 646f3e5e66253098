#pragma once

#include <cstdint>

#include "sswim/spectral.hpp"
#include "sswim/ssgp.hpp"

namespace sswim {

/// A multi-output SSGP conditioned on free pseudo-training pairs.
struct PseudoGp {
    SpectralBasis basis;
    MatrixXd inputs;  // N_p x D
    MatrixXd targets; // N_p x D
    double noise_var;
};

/// One measure-valued warp m(x) = g(x) .* x + h(x) with g and h independent
/// multi-output SSGPs. Posteriors are refit whenever the pseudo data or the
/// bases change, so they always equal fit(basis, inputs, targets, noise_var).
class WarpLayer {
public:
    WarpLayer(PseudoGp g, PseudoGp h);

    const PseudoGp& g() const { return g_; }
    const PseudoGp& h() const { return h_; }
    const SsgpPosterior& g_posterior() const { return g_post_; }
    const SsgpPosterior& h_posterior() const { return h_post_; }
    Index dim() const { return g_.basis.dim(); }

    void set_g(PseudoGp g);
    void set_h(PseudoGp h);

private:
    static SsgpPosterior refit(const PseudoGp& gp);
    static void validate(const PseudoGp& gp, Index dim);

    PseudoGp g_;
    PseudoGp h_;
    SsgpPosterior g_post_;
    SsgpPosterior h_post_;
};

struct WarpInit {
    Index n_pseudo = 64;
    double sigma_gamma = 0.1;
    std::uint64_t seed = 0;
};

/// Pseudo-inputs uniform in the data box; g targets ~ N(1, sigma_gamma^2) and
/// h targets ~ N(0, sigma_gamma^2), so the initial warp is close to identity.
/// A degenerate box coordinate (min == max) is allowed and reported on stderr.
WarpLayer init_warp_layer(const VectorXd& data_min, const VectorXd& data_max, const WarpInit& init,
                          SpectralBasis g_basis, SpectralBasis h_basis, double g_noise_var, double h_noise_var);

/// Exact Gaussian law of g(x) .* x + h(x) at a deterministic point.
GaussianInput warp_point(const WarpLayer& layer, const VectorXd& x);

/// Moment-matched warp of an uncertain input. g and h are predicted through
/// the expected feature map of `input`; input, g and h are taken as mutually
/// independent.
GaussianInput warp_gaussian(const WarpLayer& layer, const GaussianInput& input);

} // namespace sswim
