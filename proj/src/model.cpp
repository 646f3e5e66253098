#include "sswim/model.hpp"

#include <cmath>

#include "sswim/errors.hpp"

namespace sswim {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over (seed, stream)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SswimModel make_model(const ModelConfig& config, const MatrixXd& inputs) {
    if (config.depth < 0 || config.depth > kMaxDepth) {
        throw std::invalid_argument("make_model: depth must be in 0.." + std::to_string(kMaxDepth));
    }
    if (inputs.rows() < 1) throw std::invalid_argument("make_model: no inputs");
    const Index dim = inputs.cols();
    const VectorXd lo = inputs.colwise().minCoeff().transpose();
    const VectorXd hi = inputs.colwise().maxCoeff().transpose();

    std::vector<WarpLayer> layers;
    for (Index j = 0; j < config.depth; ++j) {
        const auto stream = static_cast<std::uint64_t>(1 + 3 * j);
        auto warp_basis = [&](std::uint64_t s) {
            return SpectralBasis::sample(config.family, config.warp_freqs, dim, derive_seed(config.seed, s),
                                         config.warp_lengthscale, config.warp_amplitude);
        };
        WarpInit init{config.n_pseudo, config.sigma_gamma, derive_seed(config.seed, stream + 2)};
        layers.push_back(init_warp_layer(lo, hi, init, warp_basis(stream), warp_basis(stream + 1),
                                         config.warp_noise_var, config.warp_noise_var));
    }
    return SswimModel{WarpStack(std::move(layers)),
                      SpectralBasis::sample(config.family, config.num_freqs, dim, derive_seed(config.seed, 0),
                                            config.lengthscale, config.amplitude),
                      config.noise_var, config.seed, std::nullopt, std::nullopt};
}

std::vector<ParameterSegment> parameter_schema(const SswimModel& model) {
    std::vector<ParameterSegment> out;
    Index offset = 0;
    auto add = [&](std::string name, Index size, bool log_scale) {
        out.push_back({std::move(name), offset, size, log_scale});
        offset += size;
    };
    const Index dim = model.dim();
    add("top.log_lengthscales", dim, true);
    add("top.log_amplitude", 1, true);
    add("top.log_noise_var", 1, true);
    for (Index j = 0; j < model.depth(); ++j) {
        const WarpLayer& layer = model.stack.layers()[static_cast<std::size_t>(j)];
        for (const char* which : {"g", "h"}) {
            const PseudoGp& gp = which[0] == 'g' ? layer.g() : layer.h();
            const std::string prefix = "layer" + std::to_string(j) + "." + which + ".";
            add(prefix + "log_lengthscales", dim, true);
            add(prefix + "log_amplitude", 1, true);
            add(prefix + "log_noise_var", 1, true);
            add(prefix + "inputs", gp.inputs.size(), false);
            add(prefix + "targets", gp.targets.size(), false);
        }
    }
    return out;
}

Index parameter_count(const SswimModel& model) {
    const auto schema = parameter_schema(model);
    return schema.back().offset + schema.back().size;
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Writer {
public:
    explicit Writer(VectorXd& theta) : theta_(theta) {}
    void log_vec(const VectorXd& v) { theta_.segment(pos_, v.size()) = v.array().log().matrix(); pos_ += v.size(); }
    void log_scalar(double x) { theta_(pos_++) = std::log(x); }
    void matrix(const MatrixXd& m) {
        const RowMajor r = m;
        theta_.segment(pos_, m.size()) = Eigen::Map<const VectorXd>(r.data(), m.size());
        pos_ += m.size();
    }

private:
    VectorXd& theta_;
    Index pos_ = 0;
};

class Reader {
public:
    explicit Reader(const VectorXd& theta) : theta_(theta) {}
    VectorXd exp_vec(Index n) {
        VectorXd v = theta_.segment(pos_, n).array().exp().matrix();
        pos_ += n;
        if (!v.allFinite() || !(v.array() > 0.0).all()) throw NumericalError("log parameter out of range");
        return v;
    }
    double exp_scalar() { return exp_vec(1)(0); }
    MatrixXd matrix(Index rows, Index cols) {
        RowMajor r(rows, cols);
        Eigen::Map<VectorXd>(r.data(), r.size()) = theta_.segment(pos_, r.size());
        pos_ += r.size();
        if (!r.allFinite()) throw NumericalError("non-finite pseudo-point parameter");
        return r;
    }

private:
    const VectorXd& theta_;
    Index pos_ = 0;
};

void write_gp(Writer& w, const PseudoGp& gp) {
    w.log_vec(gp.basis.lengthscales());
    w.log_scalar(gp.basis.amplitude());
    w.log_scalar(gp.noise_var);
    w.matrix(gp.inputs);
    w.matrix(gp.targets);
}

PseudoGp read_gp(Reader& r, const PseudoGp& old) {
    PseudoGp gp = old;
    gp.basis.set_lengthscales(r.exp_vec(old.basis.dim()));
    gp.basis.set_amplitude(r.exp_scalar());
    gp.noise_var = r.exp_scalar();
    gp.inputs = r.matrix(old.inputs.rows(), old.inputs.cols());
    gp.targets = r.matrix(old.targets.rows(), old.targets.cols());
    return gp;
}

} // namespace

VectorXd pack_parameters(const SswimModel& model) {
    VectorXd theta(parameter_count(model));
    Writer w(theta);
    w.log_vec(model.top_basis.lengthscales());
    w.log_scalar(model.top_basis.amplitude());
    w.log_scalar(model.top_noise_var);
    for (const WarpLayer& layer : model.stack.layers()) {
        write_gp(w, layer.g());
        write_gp(w, layer.h());
    }
    return theta;
}

void unpack_parameters(SswimModel& model, const VectorXd& theta) {
    require_dim(theta.size(), parameter_count(model), "unpack_parameters");
    Reader r(theta);
    model.top_basis.set_lengthscales(r.exp_vec(model.dim()));
    model.top_basis.set_amplitude(r.exp_scalar());
    model.top_noise_var = r.exp_scalar();
    for (WarpLayer& layer : model.stack.layers()) {
        PseudoGp g = read_gp(r, layer.g());
        PseudoGp h = read_gp(r, layer.h());
        layer.set_g(std::move(g));
        layer.set_h(std::move(h));
    }
    model.top_post.reset();
}

} // namespace sswim
