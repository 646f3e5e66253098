#include "sswim/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "sswim/errors.hpp"
#include "sswim/objective.hpp"
#include "sswim/serialize.hpp"

namespace sswim::cli {

namespace fs = std::filesystem;

namespace {

template <class Body>
int guarded(const char* command, Body&& body) {
    try {
        body();
        return kExitOk;
    } catch (const NumericalError& e) {
        std::cerr << command << ": numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DataError& e) {
        std::cerr << command << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << command << ": configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        std::cerr << command << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << command << ": error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << std::setprecision(17);
    return out;
}

fs::path prepare_output(const RunConfig& config) {
    const fs::path dir = config.output_dir.empty() ? default_output_dir() : config.output_dir;
    fs::create_directories(dir);
    return dir;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<RepeatOutcome> run_repeats(const Dataset& data, const RunConfig& config, const char* label) {
    std::vector<RepeatOutcome> out;
    for (Index r = 0; r < config.repeats; ++r) {
        out.push_back(run_repeat(data, config, r));
        const ReportRow& row = out.back().row;
        std::cerr << label << ": " << row.dataset << " depth " << row.depth << " n_pseudo " << row.n_pseudo
                  << " repeat " << r + 1 << '/' << config.repeats << ": rmse " << row.rmse << " mnlp " << row.mnlp
                  << " (" << std::fixed << std::setprecision(1) << row.wall_seconds << " s)\n"
                  << std::defaultfloat << std::setprecision(6);
    }
    return out;
}

double mean_rmse(const std::vector<RepeatOutcome>& outcomes) {
    double total = 0.0;
    for (const auto& o : outcomes) total += o.row.rmse;
    return total / static_cast<double>(outcomes.size());
}

std::vector<ReportRow> summary_rows(const std::vector<ReportRow>& rows) {
    std::vector<MetricReport> reports;
    std::vector<double> seconds;
    for (const auto& r : rows) {
        reports.push_back({r.rmse, r.mnlp, 0});
        seconds.push_back(r.wall_seconds);
    }
    const AggregateReport agg = aggregate(reports);
    const Summary t = summarize(seconds);
    ReportRow mean = rows.front();
    mean.repeat = "mean";
    mean.rmse = agg.rmse.mean;
    mean.mnlp = agg.mnlp.mean;
    mean.wall_seconds = t.mean;
    ReportRow std = rows.front();
    std.repeat = "std";
    std.rmse = agg.rmse.std;
    std.mnlp = agg.mnlp.std;
    std.wall_seconds = t.std;
    return {mean, std};
}

nlohmann::json run_metadata(const RunConfig& config, const RepeatOutcome& o) {
    return {{"dataset", o.row.dataset},
            {"method", o.row.method},
            {"repeat", o.row.repeat},
            {"steps", config.train.steps},
            {"learning_rate", config.train.learning_rate},
            {"best_step", o.trace.best_step},
            {"reversions", o.trace.reversions},
            {"aborted", o.trace.aborted},
            {"test_rmse", o.row.rmse},
            {"test_mnlp", o.row.mnlp}};
}

std::vector<double> linspace(double lo, double hi, Index n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

} // namespace

fs::path default_output_dir() {
    const char* env = std::getenv("SSWIM_OUTPUT_DIR");
    return env != nullptr && *env != '\0' ? fs::path(env) : fs::path("sswim_output");
}

void validate(const RunConfig& c) {
    if (c.manifest.empty() == c.synthetic.empty()) {
        throw std::invalid_argument("exactly one of manifest or synthetic must be given");
    }
    if (!c.manifest.empty() && !fs::exists(c.manifest)) {
        throw std::invalid_argument("dataset manifest not found: " + c.manifest);
    }
    if (!c.synthetic.empty()) {
        parse_synthetic_kind(c.synthetic);
        if (c.synthetic_n < 2) throw std::invalid_argument("synthetic-n must be >= 2");
        if (!(c.synthetic_noise >= 0.0)) throw std::invalid_argument("synthetic-noise must be >= 0");
    }
    if (c.method != "sswim" && c.method != "ssgp") {
        throw std::invalid_argument("method must be sswim or ssgp, got '" + c.method + "'");
    }
    if (c.model.depth < 0 || c.model.depth > kMaxDepth) {
        throw std::invalid_argument("depth must lie in 0.." + std::to_string(kMaxDepth));
    }
    if (c.model.num_freqs < 1 || c.model.warp_freqs < 1) throw std::invalid_argument("feature counts must be >= 1");
    if (c.model.n_pseudo < 1) throw std::invalid_argument("n-pseudo must be >= 1");
    if (!(c.model.sigma_gamma >= 0.0)) throw std::invalid_argument("sigma-gamma must be >= 0");
    for (double v : {c.model.lengthscale, c.model.amplitude, c.model.noise_var, c.model.warp_lengthscale,
                     c.model.warp_amplitude, c.model.warp_noise_var}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("initial hyperparameters must be positive");
    }
    validate(c.train);
    if (c.repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
        throw std::invalid_argument("train-fraction must lie in (0, 1)");
    }
    if (c.max_rows < 0) throw std::invalid_argument("max-rows must be >= 0");
    for (Index j : c.depths) {
        if (j < 0 || j > kMaxDepth) {
            throw std::invalid_argument("unsupported depth " + std::to_string(j) + " (expected 0.." +
                                        std::to_string(kMaxDepth) + ")");
        }
    }
    for (Index n : c.pseudo_grid) {
        if (n < 1) throw std::invalid_argument("pseudo-grid values must be >= 1");
    }
}

void write_report(const fs::path& path, const std::vector<ReportRow>& rows) {
    std::ofstream out = open_csv(path);
    out << "dataset,method,depth,M,n_pseudo,repeat,rmse,mnlp,wall_seconds\n";
    for (const auto& r : rows) {
        out << r.dataset << ',' << r.method << ',' << r.depth << ',' << r.num_freqs << ',' << r.n_pseudo << ','
            << r.repeat << ',' << r.rmse << ',' << r.mnlp << ',' << r.wall_seconds << '\n';
    }
}

Dataset load_dataset(const RunConfig& config) {
    if (!config.synthetic.empty()) {
        return generate({parse_synthetic_kind(config.synthetic), config.synthetic_n, config.synthetic_noise, config.seed});
    }
    Dataset d = load_manifest(config.manifest);
    for (const auto& name : d.dropped_constant) std::cerr << "dropped constant column '" << name << "'\n";
    return d;
}

RepeatOutcome run_repeat(const Dataset& data, const RunConfig& config, Index repeat) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(repeat);
    const Dataset rows = subsample(data, config.max_rows, seed);
    const TrainTest tt = split(rows, config.train_fraction, seed);
    Standardized st = standardize(tt.train, tt.test);
    const TestData test{st.test.x, st.test.y};

    TrainConfig tc = config.train;
    tc.seed = seed;
    ModelConfig mc = config.model;
    mc.seed = seed;
    const bool stationary = config.method == "ssgp";
    if (stationary) mc.depth = 0;

    const auto t0 = std::chrono::steady_clock::now();
    struct Fitted {
        SswimModel model;
        TrainTrace trace;
        Predictions pred;
    };
    Fitted fitted = [&]() -> Fitted {
        if (!stationary) {
            TrainResult r = train(make_model(mc, st.train.x), st.train.x, st.train.y, tc, &test);
            Predictions pred = predict_f(r.model, test.inputs);
            return {std::move(r.model), std::move(r.trace), std::move(pred)};
        }
        StationaryTrainResult r =
            train_stationary(make_stationary(mc, st.train.x.cols()), st.train.x, st.train.y, tc, &test);
        Predictions pred = predict_stationary(r.model, test.inputs);
        SswimModel m{WarpStack(), r.model.basis, r.model.noise_var, seed, std::nullopt, std::nullopt};
        condition(m, st.train.x, st.train.y);
        return {std::move(m), std::move(r.trace), std::move(pred)};
    }();
    const Predictions& pred = fitted.pred;
    RepeatOutcome out{ReportRow{data.name, config.method, mc.depth, mc.num_freqs, mc.depth > 0 ? mc.n_pseudo : 0,
                                std::to_string(repeat), rmse(test.targets, pred.mean),
                                mnlp(test.targets, pred.mean, pred.var), seconds_since(t0)},
                      std::move(fitted.trace), std::move(fitted.model), st.scaler};
    if (out.trace.aborted) {
        std::cerr << "warning: repeat " << repeat << " stopped after repeated non-finite steps; best-so-far kept\n";
    }
    if (!std::isfinite(out.row.rmse) || !std::isfinite(out.row.mnlp)) {
        throw NumericalError("non-finite test metrics in repeat " + std::to_string(repeat));
    }
    return out;
}

int cmd_train(const RunConfig& config) {
    return guarded("train", [&] {
        validate(config);
        const Dataset data = load_dataset(config);
        const fs::path dir = prepare_output(config);
        const auto outcomes = run_repeats(data, config, "train");
        std::vector<ReportRow> rows;
        for (const auto& o : outcomes) {
            rows.push_back(o.row);
            if (config.save_models) {
                save_model(dir / ("model_r" + o.row.repeat + ".json"),
                           ModelDocument{o.model, o.scaler, run_metadata(config, o)});
            }
        }
        const auto summary = summary_rows(rows);
        rows.insert(rows.end(), summary.begin(), summary.end());
        write_report(dir / "report.csv", rows);
    });
}

int cmd_sweep_pseudo(const RunConfig& config) {
    return guarded("sweep-pseudo", [&] {
        validate(config);
        if (config.method != "sswim") throw std::invalid_argument("sweep-pseudo needs method sswim");
        if (config.model.depth < 1) throw std::invalid_argument("sweep-pseudo needs depth >= 1");
        if (config.pseudo_grid.empty()) throw std::invalid_argument("pseudo-grid is empty");
        const Dataset data = load_dataset(config);
        const fs::path dir = prepare_output(config);
        std::vector<ReportRow> rows;
        std::map<Index, double> means;
        for (Index n : config.pseudo_grid) {
            RunConfig c = config;
            c.model.n_pseudo = n;
            const auto outcomes = run_repeats(data, c, "sweep-pseudo");
            for (const auto& o : outcomes) rows.push_back(o.row);
            means[n] = mean_rmse(outcomes);
        }
        write_report(dir / "sweep_pseudo.csv", rows);
        if (means.size() > 1 && means.rbegin()->second > means.begin()->second) {
            std::cerr << "warning: mean RMSE at n_pseudo " << means.rbegin()->first << " (" << means.rbegin()->second
                      << ") exceeds that at n_pseudo " << means.begin()->first << " (" << means.begin()->second << ")\n";
        }
    });
}

int cmd_sweep_depth(const RunConfig& config) {
    return guarded("sweep-depth", [&] {
        validate(config);
        if (config.method != "sswim") throw std::invalid_argument("sweep-depth needs method sswim");
        if (config.depths.empty()) throw std::invalid_argument("depths is empty");
        const Dataset data = load_dataset(config);
        const fs::path dir = prepare_output(config);
        std::vector<ReportRow> rows;
        std::map<Index, double> means;
        for (Index j : config.depths) {
            RunConfig c = config;
            c.model.depth = j;
            const auto outcomes = run_repeats(data, c, "sweep-depth");
            for (const auto& o : outcomes) rows.push_back(o.row);
            means[j] = mean_rmse(outcomes);
            if (j == 0) {
                RunConfig direct = c;
                direct.method = "ssgp";
                for (Index r = 0; r < c.repeats; ++r) {
                    const ReportRow check = run_repeat(data, direct, r).row;
                    const ReportRow& row = outcomes[static_cast<std::size_t>(r)].row;
                    if (std::abs(check.rmse - row.rmse) > 1e-10 || std::abs(check.mnlp - row.mnlp) > 1e-10) {
                        throw NumericalError("depth-0 run disagrees with the direct SSGP run in repeat " +
                                             std::to_string(r));
                    }
                }
            }
        }
        write_report(dir / "sweep_depth.csv", rows);
        if (means.count(0) != 0 && means.count(1) != 0 && !(means[1] < means[0])) {
            std::cerr << "warning: mean RMSE at depth 1 (" << means[1] << ") is not below depth 0 (" << means[0]
                      << ")\n";
        }
    });
}

int cmd_overfit_trace(const RunConfig& config) {
    return guarded("overfit-trace", [&] {
        validate(config);
        RunConfig c = config;
        c.train.trace_test_metrics = true;
        const Dataset data = load_dataset(c);
        const fs::path dir = prepare_output(c);
        const auto outcomes = run_repeats(data, c, "overfit-trace");
        std::ofstream out = open_csv(dir / "overfit_trace.csv");
        out << "repeat,step,objective,test_rmse,test_mnlp\n";
        std::vector<ReportRow> rows;
        for (const auto& o : outcomes) {
            for (const TraceRow& t : o.trace.rows) {
                if (t.step == 0) continue;
                out << o.row.repeat << ',' << t.step << ',' << t.objective << ',' << t.test_rmse << ',' << t.test_mnlp
                    << '\n';
            }
            rows.push_back(o.row);
        }
        const auto summary = summary_rows(rows);
        rows.insert(rows.end(), summary.begin(), summary.end());
        write_report(dir / "report.csv", rows);
    });
}

int cmd_export_warp(const ExportConfig& config) {
    return guarded("export-warp", [&] {
        if (!fs::exists(config.model_path)) {
            throw std::invalid_argument("model file not found: " + config.model_path.string());
        }
        const ModelDocument doc = load_model(config.model_path);
        const SswimModel& m = doc.model;
        const Index d = m.dim();
        if (!m.conditioning) throw DataError("model has no conditioning data; cannot predict");
        if (config.grid_points < 1) throw std::invalid_argument("grid-points must be >= 1");

        VectorXd lo(d);
        VectorXd hi(d);
        if (config.grid_min.empty() && config.grid_max.empty()) {
            lo = m.conditioning->inputs.colwise().minCoeff().transpose();
            hi = m.conditioning->inputs.colwise().maxCoeff().transpose();
        } else {
            if (static_cast<Index>(config.grid_min.size()) != d || static_cast<Index>(config.grid_max.size()) != d) {
                throw std::invalid_argument("grid-min and grid-max need " + std::to_string(d) + " values each");
            }
            lo = Eigen::Map<const VectorXd>(config.grid_min.data(), d);
            hi = Eigen::Map<const VectorXd>(config.grid_max.data(), d);
        }
        const double total = std::pow(static_cast<double>(config.grid_points), static_cast<double>(d));
        if (total > 1e6) throw std::invalid_argument("grid has more than 10^6 points; lower grid-points");

        const fs::path dir = config.output_dir.empty() ? default_output_dir() : config.output_dir;
        fs::create_directories(dir);

        std::ofstream pseudo = open_csv(dir / "pseudo_points.csv");
        pseudo << "layer,component,index";
        for (Index k = 0; k < d; ++k) pseudo << ",x" << k;
        for (Index k = 0; k < d; ++k) pseudo << ",y" << k;
        pseudo << '\n';
        const auto& layers = m.stack.layers();
        for (std::size_t j = 0; j < layers.size(); ++j) {
            for (const auto& [name, gp] : {std::pair<const char*, const PseudoGp*>{"g", &layers[j].g()},
                                           std::pair<const char*, const PseudoGp*>{"h", &layers[j].h()}}) {
                for (Index i = 0; i < gp->inputs.rows(); ++i) {
                    pseudo << j << ',' << name << ',' << i;
                    for (Index k = 0; k < d; ++k) pseudo << ',' << gp->inputs(i, k);
                    for (Index k = 0; k < d; ++k) pseudo << ',' << gp->targets(i, k);
                    pseudo << '\n';
                }
            }
        }

        const auto n = static_cast<Index>(total);
        std::vector<std::vector<double>> axes;
        for (Index k = 0; k < d; ++k) axes.push_back(linspace(lo(k), hi(k), config.grid_points));
        MatrixXd grid(n, d);
        for (Index i = 0; i < n; ++i) {
            Index rest = i;
            for (Index k = 0; k < d; ++k) {
                grid(i, k) = axes[static_cast<std::size_t>(k)][static_cast<std::size_t>(rest % config.grid_points)];
                rest /= config.grid_points;
            }
        }
        const Predictions pred = predict_f(m, grid);
        std::ofstream warp = open_csv(dir / "warp_grid.csv");
        warp << (d > 0 ? "x0" : "");
        for (Index k = 1; k < d; ++k) warp << ",x" << k;
        for (Index k = 0; k < d; ++k) warp << ",warp_mean" << k;
        for (Index k = 0; k < d; ++k) warp << ",warp_var" << k;
        warp << ",pred_mean,pred_var\n";
        for (Index i = 0; i < n; ++i) {
            const GaussianInput w = propagate(m.stack, grid.row(i).transpose());
            for (Index k = 0; k < d; ++k) warp << (k > 0 ? "," : "") << grid(i, k);
            for (Index k = 0; k < d; ++k) warp << ',' << w.mean(k);
            for (Index k = 0; k < d; ++k) warp << ',' << w.var(k);
            warp << ',' << pred.mean(i) << ',' << pred.var(i) << '\n';
        }
    });
}

int cmd_gen_synthetic(const SyntheticConfig& config) {
    return guarded("gen-synthetic", [&] {
        if (config.output.empty()) throw std::invalid_argument("out path is required");
        const Dataset d = generate(config.spec);
        if (config.output.has_parent_path()) fs::create_directories(config.output.parent_path());
        write_csv(config.output, d);
        fs::path manifest = config.output;
        manifest.replace_extension(".manifest");
        std::ofstream out(manifest);
        if (!out) throw DataError("cannot write " + manifest.string());
        out << "path=" << config.output.filename().string() << "\ntarget=" << d.target
            << "\ndrop_constant=true\ntarget_transform=none\n";
    });
}

int run(int argc, char** argv) {
    CLI::App app{"Sparse spectrum warped input measures: training and experiment driver"};
    app.set_config("--config", "", "Flat key=value file keyed by long flag name, e.g. num-freqs=256. Flags win.");
    app.fallthrough();
    app.require_subcommand(1);

    RunConfig rc;
    std::string kernel = "matern32";
    std::string gradient_mode = "analytic";
    std::string output_dir;
    app.add_option("--manifest", rc.manifest, "Dataset manifest file");
    app.add_option("--synthetic", rc.synthetic, "Synthetic dataset kind (steps_chirp_1d, gramacy_2d)");
    app.add_option("--synthetic-n", rc.synthetic_n, "Synthetic sample count")->capture_default_str();
    app.add_option("--synthetic-noise", rc.synthetic_noise, "Synthetic noise standard deviation")->capture_default_str();
    app.add_option("--method", rc.method, "sswim or ssgp")->capture_default_str();
    app.add_option("--kernel", kernel, "matern32 or rbf")->capture_default_str();
    app.add_option("--depth", rc.model.depth, "Warping depth J")->capture_default_str();
    app.add_option("--num-freqs", rc.model.num_freqs, "Top-level frequencies M")->capture_default_str();
    app.add_option("--warp-freqs", rc.model.warp_freqs, "Frequencies per warp GP")->capture_default_str();
    app.add_option("--n-pseudo", rc.model.n_pseudo, "Pseudo-training points per warp GP")->capture_default_str();
    app.add_option("--sigma-gamma", rc.model.sigma_gamma, "Pseudo-target initial spread")->capture_default_str();
    app.add_option("--lengthscale", rc.model.lengthscale, "Initial top-level lengthscale")->capture_default_str();
    app.add_option("--amplitude", rc.model.amplitude, "Initial top-level amplitude")->capture_default_str();
    app.add_option("--noise-var", rc.model.noise_var, "Initial top-level noise variance")->capture_default_str();
    app.add_option("--warp-lengthscale", rc.model.warp_lengthscale, "Initial warp lengthscale")->capture_default_str();
    app.add_option("--warp-amplitude", rc.model.warp_amplitude, "Initial warp amplitude")->capture_default_str();
    app.add_option("--warp-noise-var", rc.model.warp_noise_var, "Initial warp noise variance")->capture_default_str();
    app.add_option("--steps", rc.train.steps, "Optimizer steps")->capture_default_str();
    app.add_option("--learning-rate", rc.train.learning_rate, "Adam learning rate")->capture_default_str();
    app.add_option("--gradient-mode", gradient_mode, "analytic or finite-difference")->capture_default_str();
    app.add_option("--fd-epsilon", rc.train.fd_epsilon, "Relative finite-difference step")->capture_default_str();
    app.add_option("--keep-best", rc.train.keep_best, "Return the best iterate")->capture_default_str();
    app.add_option("--repeats", rc.repeats, "Repeats (one split and seed each)")->capture_default_str();
    app.add_option("--seed", rc.seed, "Base seed")->capture_default_str();
    app.add_option("--train-fraction", rc.train_fraction, "Training fraction of each split")->capture_default_str();
    app.add_option("--max-rows", rc.max_rows, "Subsample to at most this many rows (0 keeps all)")->capture_default_str();
    app.add_option("--save-models", rc.save_models, "Write one model document per repeat")->capture_default_str();
    app.add_option("--output-dir", output_dir, "Output directory (default: $SSWIM_OUTPUT_DIR or ./sswim_output)");
    app.add_option("--pseudo-grid", rc.pseudo_grid, "Comma-separated n_pseudo values")->delimiter(',');
    app.add_option("--depths", rc.depths, "Comma-separated depths")->delimiter(',');

    ExportConfig ec;
    std::string model_path;
    app.add_option("--model", model_path, "Saved model document");
    app.add_option("--grid-min", ec.grid_min, "Comma-separated grid lower corner")->delimiter(',');
    app.add_option("--grid-max", ec.grid_max, "Comma-separated grid upper corner")->delimiter(',');
    app.add_option("--grid-points", ec.grid_points, "Grid points per coordinate")->capture_default_str();

    SyntheticConfig sc;
    std::string kind = "steps_chirp_1d";
    std::string out_path;
    app.add_option("--kind", kind, "Synthetic kind")->capture_default_str();
    app.add_option("--n", sc.spec.n, "Synthetic sample count")->capture_default_str();
    app.add_option("--noise-std", sc.spec.noise_std, "Synthetic noise standard deviation")->capture_default_str();
    app.add_option("--out", out_path, "Output CSV path");

    auto* train_cmd = app.add_subcommand("train", "Train one model per repeat and report test metrics");
    auto* pseudo_cmd = app.add_subcommand("sweep-pseudo", "Repeat training over a grid of pseudo-point counts");
    auto* depth_cmd = app.add_subcommand("sweep-depth", "Repeat training over warping depths");
    auto* trace_cmd = app.add_subcommand("overfit-trace", "Record test metrics after every optimizer step");
    auto* export_cmd = app.add_subcommand("export-warp", "Export pseudo points and the learned warp on a grid");
    auto* gen_cmd = app.add_subcommand("gen-synthetic", "Write a synthetic dataset and its manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    int code = kExitOk;
    const int parsed = guarded("sswim", [&] {
        rc.model.family = parse_kernel_family(kernel);
        rc.train.gradient_mode = parse_gradient_mode(gradient_mode);
        rc.output_dir = output_dir;
        ec.model_path = model_path;
        ec.output_dir = output_dir;
        sc.spec.kind = parse_synthetic_kind(kind);
        sc.spec.seed = rc.seed;
        sc.output = out_path;
    });
    if (parsed != kExitOk) return parsed;

    if (train_cmd->parsed()) code = cmd_train(rc);
    else if (pseudo_cmd->parsed()) code = cmd_sweep_pseudo(rc);
    else if (depth_cmd->parsed()) code = cmd_sweep_depth(rc);
    else if (trace_cmd->parsed()) code = cmd_overfit_trace(rc);
    else if (export_cmd->parsed()) code = cmd_export_warp(ec);
    else if (gen_cmd->parsed()) code = cmd_gen_synthetic(sc);
    return code;
}

} // namespace sswim::cli
