#pragma once

#include <vector>

#include "sswim/warp.hpp"

namespace sswim {

/// Ordered composition of warp layers (possibly none).
class WarpStack {
public:
    WarpStack() = default;
    explicit WarpStack(std::vector<WarpLayer> layers);

    const std::vector<WarpLayer>& layers() const { return layers_; }
    std::vector<WarpLayer>& layers() { return layers_; }
    Index depth() const { return static_cast<Index>(layers_.size()); }

private:
    std::vector<WarpLayer> layers_;
};

/// Depth 0 yields the Dirac measure at x; otherwise the first layer is exact
/// and later layers are moment matched.
GaussianInput propagate(const WarpStack& stack, const VectorXd& x);

} // namespace sswim
