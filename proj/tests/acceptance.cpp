// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sswim/cli.hpp"
#include "sswim/errors.hpp"
#include "sswim/objective.hpp"
#include "sswim/ssgp.hpp"
#include "sswim/train.hpp"
#include "sswim/warp_stack.hpp"
#include "support.hpp"

using namespace sswim;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

constexpr double kMcSamples = 1e6;
constexpr double kMcStandardErrors = 4.0;
constexpr double kDualityTolerance = 1e-6;
constexpr double kGradientRelTolerance = 1e-4;
constexpr double kGradientFloor = 1e-2; // relative error uses max(|fd|, floor)
constexpr double kReductionTolerance = 1e-12;
constexpr double kChirpImprovement = 0.25;
constexpr double kConcreteRmse = 0.36;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

fs::path data_dir() {
    if (const char* env = std::getenv("SSWIM_DATA_DIR"); env != nullptr && *env != '\0') return env;
    return SSWIM_DEFAULT_DATA_DIR;
}

fs::path scratch_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("sswim_acceptance_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

// Sample moments accumulated around the exact mean, which keeps the fourth
// moment estimate stable.
struct CentredMoments {
    VectorXd centre, s1, s2, s4;
    double n = 0.0;
    explicit CentredMoments(const VectorXd& c)
        : centre(c), s1(VectorXd::Zero(c.size())), s2(VectorXd::Zero(c.size())), s4(VectorXd::Zero(c.size())) {}
    void add(const VectorXd& v) {
        const VectorXd d = v - centre;
        s1 += d;
        s2 += d.cwiseAbs2();
        s4 += d.cwiseAbs2().cwiseAbs2();
        n += 1.0;
    }
    VectorXd mean() const { return centre + s1 / n; }
    VectorXd var() const { return s2 / n - (s1 / n).cwiseAbs2(); }
    VectorXd mean_se() const { return (var() / n).cwiseSqrt(); }
    VectorXd var_se() const {
        const VectorXd v = var();
        const VectorXd m4 = s4 / n;
        return ((m4 - v.cwiseAbs2()).cwiseMax(0.0) / n).cwiseSqrt();
    }
};

// Worst |estimate - exact| / SE over the coordinates.
double worst_z(const VectorXd& est, const VectorXd& exact, const VectorXd& se) {
    double z = 0.0;
    for (Index i = 0; i < est.size(); ++i) {
        const double err = std::abs(est(i) - exact(i));
        z = std::max(z, se(i) > 0.0 ? err / se(i) : (err == 0.0 ? 0.0 : INFINITY));
    }
    return z;
}

Outcome expected_features_mc() {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> z01;
    const auto n = static_cast<long>(kMcSamples);
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
        const Index d = 1 + static_cast<Index>(rng() % 3);
        const Index m = 2 + static_cast<Index>(rng() % 5);
        const SpectralBasis b = random_basis(c % 2 ? KernelFamily::RBF : KernelFamily::Matern32, m, d, rng);
        const GaussianInput in{uniform_vector(d, -2.0, 2.0, rng), uniform_vector(d, 0.01, 1.0, rng)};
        const VectorXd exact = expected_feature_map(b, in);
        const VectorXd sd = in.var.cwiseSqrt();
        CentredMoments mom(exact);
        VectorXd x(d);
        for (long s = 0; s < n; ++s) {
            for (Index k = 0; k < d; ++k) x(k) = in.mean(k) + sd(k) * z01(rng);
            mom.add(feature_map(b, x));
        }
        worst = std::max(worst, worst_z(mom.mean(), exact, mom.mean_se()));
    }
    return {worst <= kMcStandardErrors, fmt("50 cases, worst deviation %.2f SE", worst)};
}

Outcome single_layer_mc() {
    std::mt19937_64 rng(202);
    std::normal_distribution<double> z01;
    const auto n = static_cast<long>(kMcSamples);
    double worst = 0.0;
    for (int c = 0; c < 20; ++c) {
        const Index d = 1 + static_cast<Index>(rng() % 3);
        const WarpLayer layer = random_layer(d, 6, 10, rng);
        const VectorXd x = uniform_vector(d, -1.5, 1.5, rng);
        const GaussianInput w = warp_point(layer, x);
        const SsgpPrediction g = predict(layer.g_posterior(), feature_map(layer.g().basis, x));
        const SsgpPrediction h = predict(layer.h_posterior(), feature_map(layer.h().basis, x));
        const double gs = std::sqrt(g.var), hs = std::sqrt(h.var);
        CentredMoments mom(w.mean);
        VectorXd v(d);
        for (long s = 0; s < n; ++s) {
            for (Index k = 0; k < d; ++k) v(k) = (g.mean(k) + gs * z01(rng)) * x(k) + h.mean(k) + hs * z01(rng);
            mom.add(v);
        }
        worst = std::max({worst, worst_z(mom.mean(), w.mean, mom.mean_se()), worst_z(mom.var(), w.var, mom.var_se())});
    }
    return {worst <= kMcStandardErrors, fmt("20 layers, worst deviation %.2f SE", worst)};
}

Outcome nested_mc() {
    std::mt19937_64 rng(303);
    std::normal_distribution<double> z01;
    const auto n = static_cast<long>(kMcSamples);
    double worst = 0.0;
    for (int c = 0; c < 10; ++c) {
        const Index d = 1 + static_cast<Index>(rng() % 2);
        WarpLayer first = random_layer(d, 6, 10, rng);
        WarpLayer second = random_layer(d, 6, 10, rng);
        const WarpStack stack{{first, second}};
        const VectorXd x = uniform_vector(d, -1.0, 1.0, rng);
        const GaussianInput out = propagate(stack, x);

        // Layer 1 output is sampled exactly; layer 2 uses its moments frozen
        // at the expected features of that output.
        const GaussianInput mid = warp_point(first, x);
        const SsgpPrediction g = predict(second.g_posterior(), expected_feature_map(second.g().basis, mid));
        const SsgpPrediction h = predict(second.h_posterior(), expected_feature_map(second.h().basis, mid));
        const double gs = std::sqrt(g.var), hs = std::sqrt(h.var);
        const VectorXd ms = mid.var.cwiseSqrt();
        CentredMoments mom(out.mean);
        VectorXd v(d);
        for (long s = 0; s < n; ++s) {
            for (Index k = 0; k < d; ++k) {
                const double xm = mid.mean(k) + ms(k) * z01(rng);
                v(k) = (g.mean(k) + gs * z01(rng)) * xm + h.mean(k) + hs * z01(rng);
            }
            mom.add(v);
        }
        worst = std::max({worst, worst_z(mom.mean(), out.mean, mom.mean_se()),
                          worst_z(mom.var(), out.var, mom.var_se())});
    }
    return {worst <= kMcStandardErrors, fmt("10 stacks, worst deviation %.2f SE", worst)};
}

Outcome duality() {
    std::mt19937_64 rng(404);
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
        const Index n = 2 + static_cast<Index>(rng() % 39);
        const Index m = 1 + static_cast<Index>(rng() % 32);
        const Index d = 1 + static_cast<Index>(rng() % 4);
        const SpectralBasis b = random_basis(c % 2 ? KernelFamily::RBF : KernelFamily::Matern32, m, d, rng);
        const MatrixXd x = uniform_matrix(n, d, -2.0, 2.0, rng);
        const VectorXd y = uniform_vector(n, -1.0, 1.0, rng);
        const double s = std::uniform_real_distribution<double>(0.01, 0.5)(rng);

        const MatrixXd phi = feature_rows(b, x);
        const MatrixXd k = phi * phi.transpose() + s * MatrixXd::Identity(n, n);
        const Eigen::LDLT<MatrixXd> kf(k);
        const double dense_nlml = 0.5 * y.dot(kf.solve(y)) + 0.5 * kf.vectorD().array().log().sum() +
                                  0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
        worst = std::max(worst, std::abs(nlml(phi, y, s) - dense_nlml));

        const SsgpPosterior post = fit(b, x, y, s);
        for (int t = 0; t < 5; ++t) {
            const VectorXd f = feature_map(b, uniform_vector(d, -2.5, 2.5, rng));
            const VectorXd kx = phi * f;
            const SsgpPrediction p = predict(post, f);
            worst = std::max(worst, std::abs(p.mean(0) - kx.dot(kf.solve(y))));
            worst = std::max(worst, std::abs(p.var - (f.squaredNorm() - kx.dot(kf.solve(kx)))));
        }
    }
    return {worst <= kDualityTolerance, fmt("50 instances, max abs difference %.2e", worst)};
}

Outcome gradient_contract() {
    const Problem p = wavy_problem(12, 2, 505);
    ModelConfig c;
    c.depth = 1;
    c.num_freqs = 8;
    c.warp_freqs = 8;
    c.n_pseudo = 4;
    c.sigma_gamma = 0.3;
    c.seed = 5;
    SswimModel m = make_model(c, p.x);
    const VectorXd an = gradient(m, p.x, p.y);
    const VectorXd fd = finite_difference_gradient(m, p.x, p.y);
    double worst = 0.0;
    for (Index i = 0; i < an.size(); ++i) {
        worst = std::max(worst, std::abs(an(i) - fd(i)) / std::max(std::abs(fd(i)), kGradientFloor));
    }
    return {worst <= kGradientRelTolerance,
            std::to_string(an.size()) + " coordinates, max relative error " + fmt("%.2e", worst)};
}

Outcome stationary_reduction() {
    const Problem p = wavy_problem(60, 2, 606);
    const MatrixXd xt = wavy_problem(25, 2, 607).x;
    ModelConfig c;
    c.depth = 0;
    c.num_freqs = 20;
    c.seed = 6;
    SswimModel sswim = make_model(c, p.x);
    StationarySsgp ssgp = make_stationary(c, 2);
    double worst = std::abs(objective(sswim, p.x, p.y) - stationary_objective_and_gradient(ssgp, p.x, p.y).value);

    TrainConfig tc;
    tc.steps = 50;
    tc.learning_rate = 0.05;
    const TrainResult a = train(sswim, p.x, p.y, tc);
    const StationaryTrainResult b = train_stationary(ssgp, p.x, p.y, tc);
    if (a.trace.rows.size() != b.trace.rows.size()) return {false, "trace lengths differ"};
    for (std::size_t i = 0; i < a.trace.rows.size(); ++i) {
        worst = std::max(worst, std::abs(a.trace.rows[i].objective - b.trace.rows[i].objective));
    }
    const Predictions pa = predict_f(a.model, xt);
    const Predictions pb = predict_stationary(b.model, xt);
    worst = std::max({worst, (pa.mean - pb.mean).cwiseAbs().maxCoeff(), (pa.var - pb.var).cwiseAbs().maxCoeff()});
    return {worst <= kReductionTolerance, fmt("max difference %.2e over objective, trace and predictions", worst)};
}

cli::RunConfig chirp_config(Index depth) {
    cli::RunConfig rc;
    rc.synthetic = "steps_chirp_1d";
    rc.synthetic_n = 400;
    rc.synthetic_noise = 0.05;
    rc.model.depth = depth;
    rc.model.num_freqs = 100;
    rc.model.n_pseudo = 64;
    rc.model.lengthscale = 0.3;
    rc.model.warp_lengthscale = 0.3;
    rc.train.steps = 150;
    rc.repeats = 10;
    return rc;
}

Outcome chirp_win() {
    const Dataset data = cli::load_dataset(chirp_config(0));
    double flat = 0.0, warped = 0.0;
    for (Index r = 0; r < 10; ++r) {
        flat += cli::run_repeat(data, chirp_config(0), r).row.rmse / 10.0;
        warped += cli::run_repeat(data, chirp_config(1), r).row.rmse / 10.0;
    }
    const double gain = 1.0 - warped / flat;
    return {gain >= kChirpImprovement,
            fmt("mean RMSE J=1 %.4f", warped) + fmt(" vs J=0 %.4f", flat) + fmt(", improvement %.1f%%", 100.0 * gain)};
}

// Criteria 8 and 11 share one overfit-trace run on concrete.
struct ConcreteRun {
    bool ran = false;
    std::string error;
    fs::path dir;
    Index steps = 150;
    Index repeats = 10;
};

ConcreteRun& concrete_run() {
    static ConcreteRun run = [] {
        ConcreteRun r;
        const fs::path manifest = data_dir() / "concrete.manifest";
        if (!fs::exists(manifest)) {
            r.error = "dataset file not found: " + manifest.string();
            return r;
        }
        cli::RunConfig rc;
        rc.manifest = manifest.string();
        rc.model.depth = 1;
        rc.model.num_freqs = 256;
        rc.model.n_pseudo = 1280;
        rc.model.lengthscale = 2.0;
        rc.model.warp_lengthscale = 3.0;
        rc.train.steps = r.steps;
        rc.repeats = r.repeats;
        rc.save_models = false;
        r.dir = scratch_dir("concrete");
        rc.output_dir = r.dir;
        const int code = cli::cmd_overfit_trace(rc);
        r.ran = code == cli::kExitOk;
        if (!r.ran) r.error = "overfit-trace exited with code " + std::to_string(code);
        return r;
    }();
    return run;
}

Outcome concrete_table() {
    const ConcreteRun& run = concrete_run();
    if (!run.ran) return {false, run.error};
    const auto rows = read_csv(run.dir / "report.csv");
    double rmse_mean = NAN;
    bool finite = true;
    Index repeats = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][5] == "mean") rmse_mean = std::stod(rows[i][6]);
        else if (rows[i][5] != "std") {
            ++repeats;
            finite = finite && std::isfinite(std::stod(rows[i][7]));
        }
    }
    const bool pass = repeats == run.repeats && finite && rmse_mean <= kConcreteRmse;
    return {pass, fmt("mean RMSE %.4f over ", rmse_mean) + std::to_string(repeats) + " repeats, MNLP " +
                      (finite ? "finite" : "not finite")};
}

Outcome overfit_protocol() {
    const ConcreteRun& run = concrete_run();
    if (!run.ran) return {false, run.error};
    const auto rows = read_csv(run.dir / "overfit_trace.csv");
    const auto expected = static_cast<std::size_t>(run.steps * run.repeats);
    if (rows.size() != expected + 1) {
        return {false, std::to_string(rows.size() - 1) + " rows, expected " + std::to_string(expected)};
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const Index step = std::stol(rows[i][1]);
        if (step != static_cast<Index>((i - 1) % static_cast<std::size_t>(run.steps)) + 1) {
            return {false, "step index out of order at row " + std::to_string(i)};
        }
        for (std::size_t c = 2; c < 5; ++c) {
            if (!std::isfinite(std::stod(rows[i][c]))) return {false, "non-finite metric at row " + std::to_string(i)};
        }
    }
    return {true, std::to_string(expected) + " rows, monotone steps, finite metrics"};
}

Outcome depth_benefit() {
    const fs::path manifest = data_dir() / "airfoil.manifest";
    if (!fs::exists(manifest)) return {false, "dataset file not found: " + manifest.string()};
    cli::RunConfig rc;
    rc.manifest = manifest.string();
    const Dataset data = cli::load_dataset(rc);
    double flat = 0.0, warped = 0.0;
    for (Index r = 0; r < 10; ++r) {
        rc.model.depth = 0;
        flat += cli::run_repeat(data, rc, r).row.rmse / 10.0;
        rc.model.depth = 1;
        warped += cli::run_repeat(data, rc, r).row.rmse / 10.0;
    }
    return {warped < flat, fmt("mean RMSE J=1 %.4f", warped) + fmt(" vs J=0 %.4f", flat)};
}

Outcome large_smoke() {
    const std::vector<std::string> names{"ct_slice", "supercond", "protein", "buzz", "song"};
    std::string missing, failed;
    Index done = 0;
    for (const auto& name : names) {
        const fs::path manifest = data_dir() / (name + ".manifest");
        if (!fs::exists(manifest)) {
            missing += (missing.empty() ? "" : ", ") + name;
            continue;
        }
        cli::RunConfig rc;
        rc.manifest = manifest.string();
        rc.max_rows = 5000;
        rc.model.depth = 1;
        rc.train.steps = 2;
        try {
            const cli::RepeatOutcome out = cli::run_repeat(cli::load_dataset(rc), rc, 0);
            if (out.trace.aborted || out.trace.reversions > 0) failed += " " + name;
            else ++done;
        } catch (const std::exception& e) {
            failed += " " + name + " (" + e.what() + ")";
        }
    }
    if (!missing.empty()) return {false, "dataset file not found: " + missing};
    return {failed.empty(), std::to_string(done) + " datasets completed 2 steps" +
                                (failed.empty() ? std::string() : "; failed:" + failed)};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"expected features vs Monte Carlo", expected_features_mc},
        {"single-layer warp moments vs Monte Carlo", single_layer_mc},
        {"two-layer propagation vs nested Monte Carlo", nested_mc},
        {"weight/function-space duality", duality},
        {"gradient vs central differences", gradient_contract},
        {"depth zero equals stationary SSGP", stationary_reduction},
        {"nonstationary win on steps_chirp_1d", chirp_win},
        {"concrete mean RMSE", concrete_table},
        {"depth benefit on airfoil", depth_benefit},
        {"large-dataset smoke run", large_smoke},
        {"overfit-trace protocol on concrete", overfit_protocol},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.contains(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("%s [%d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
