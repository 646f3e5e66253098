#include "sswim/warp.hpp"

#include <iostream>
#include <random>

#include "sswim/errors.hpp"

namespace sswim {

WarpLayer::WarpLayer(PseudoGp g, PseudoGp h)
    : g_(std::move(g)), h_(std::move(h)), g_post_(refit(g_)), h_post_(refit(h_)) {
    validate(h_, g_.basis.dim());
}

void WarpLayer::validate(const PseudoGp& gp, Index dim) {
    require_dim(gp.basis.dim(), dim, "warp basis dimension");
    require_dim(gp.inputs.cols(), dim, "warp pseudo-input columns");
    require_dim(gp.targets.cols(), dim, "warp pseudo-target columns");
    require_dim(gp.targets.rows(), gp.inputs.rows(), "warp pseudo-target rows");
}

SsgpPosterior WarpLayer::refit(const PseudoGp& gp) {
    validate(gp, gp.basis.dim());
    return fit(gp.basis, gp.inputs, gp.targets, gp.noise_var);
}

void WarpLayer::set_g(PseudoGp g) {
    validate(g, dim());
    g_post_ = refit(g);
    g_ = std::move(g);
}

void WarpLayer::set_h(PseudoGp h) {
    validate(h, dim());
    h_post_ = refit(h);
    h_ = std::move(h);
}

WarpLayer init_warp_layer(const VectorXd& data_min, const VectorXd& data_max, const WarpInit& init,
                          SpectralBasis g_basis, SpectralBasis h_basis, double g_noise_var, double h_noise_var) {
    const Index dim = data_min.size();
    require_dim(data_max.size(), dim, "init_warp_layer box");
    if (init.n_pseudo < 1) throw std::invalid_argument("init_warp_layer: n_pseudo must be >= 1");
    if (!(init.sigma_gamma >= 0.0)) throw std::invalid_argument("init_warp_layer: sigma_gamma must be >= 0");
    for (Index d = 0; d < dim; ++d) {
        if (data_min(d) > data_max(d)) throw std::invalid_argument("init_warp_layer: data_min > data_max");
        if (data_min(d) == data_max(d)) {
            std::cerr << "warning: init_warp_layer: degenerate data range in coordinate " << d
                      << "; pseudo-inputs there are all " << data_min(d) << "\n";
        }
    }

    std::mt19937_64 rng(init.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const VectorXd span = data_max - data_min;

    auto draw_inputs = [&] {
        MatrixXd x(init.n_pseudo, dim);
        for (Index i = 0; i < x.rows(); ++i) {
            for (Index d = 0; d < dim; ++d) x(i, d) = data_min(d) + span(d) * unit(rng);
        }
        return x;
    };
    auto draw_targets = [&](double centre) {
        MatrixXd y(init.n_pseudo, dim);
        for (Index i = 0; i < y.rows(); ++i) {
            for (Index d = 0; d < dim; ++d) y(i, d) = centre + init.sigma_gamma * normal(rng);
        }
        return y;
    };

    MatrixXd xg = draw_inputs();
    MatrixXd yg = draw_targets(1.0);
    MatrixXd xh = draw_inputs();
    MatrixXd yh = draw_targets(0.0);
    return WarpLayer(PseudoGp{std::move(g_basis), std::move(xg), std::move(yg), g_noise_var},
                     PseudoGp{std::move(h_basis), std::move(xh), std::move(yh), h_noise_var});
}

GaussianInput warp_gaussian(const WarpLayer& layer, const GaussianInput& input) {
    require_dim(input.dim(), layer.dim(), "warp_gaussian input");
    require_dim(input.var.size(), layer.dim(), "warp_gaussian variance");
    const SsgpPrediction g = predict(layer.g_posterior(), expected_feature_map(layer.g().basis, input));
    const SsgpPrediction h = predict(layer.h_posterior(), expected_feature_map(layer.h().basis, input));

    GaussianInput out;
    out.mean = g.mean.cwiseProduct(input.mean) + h.mean;
    // Diagonal of S .* Sg + S .* mu_g mu_g' + Sg .* mu mu' + Sh with Sg = s_g I, Sh = s_h I.
    out.var = (input.var.array() * g.var + input.var.array() * g.mean.array().square() +
               g.var * input.mean.array().square() + h.var)
                  .matrix();
    return out;
}

GaussianInput warp_point(const WarpLayer& layer, const VectorXd& x) {
    return warp_gaussian(layer, GaussianInput::dirac(x));
}

} // namespace sswim
