#include "sswim/warp_stack.hpp"

#include "sswim/errors.hpp"

namespace sswim {

WarpStack::WarpStack(std::vector<WarpLayer> layers) : layers_(std::move(layers)) {
    for (const auto& layer : layers_) require_dim(layer.dim(), layers_.front().dim(), "warp stack layer dimension");
}

GaussianInput propagate(const WarpStack& stack, const VectorXd& x) {
    GaussianInput state = GaussianInput::dirac(x);
    if (stack.depth() == 0) return state;
    require_dim(x.size(), stack.layers().front().dim(), "propagate input");
    state = warp_point(stack.layers().front(), x);
    for (std::size_t j = 1; j < stack.layers().size(); ++j) state = warp_gaussian(stack.layers()[j], state);
    return state;
}

} // namespace sswim
