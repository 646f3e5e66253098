#include "sswim/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sswim/errors.hpp"

namespace sswim {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(trim(field));
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    if (trim(value).empty()) return out;
    for (auto& f : split_fields(value)) {
        if (!f.empty()) out.push_back(f);
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw DataError("manifest key '" + key + "' expects true or false, got '" + value + "'");
}

} // namespace

std::string_view to_string(TargetTransform t) { return t == TargetTransform::Log1p ? "log1p" : "none"; }

TargetTransform parse_target_transform(std::string_view name) {
    if (name == "none") return TargetTransform::None;
    if (name == "log1p") return TargetTransform::Log1p;
    throw DataError("unknown target_transform '" + std::string(name) + "' (expected none or log1p)");
}

Manifest parse_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest " + path.string());
    Manifest m;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "path") {
            m.csv_path = value;
        } else if (key == "target") {
            m.preprocessing.target = value;
        } else if (key == "drop_columns") {
            m.preprocessing.drop_columns = split_list(value);
        } else if (key == "drop_constant") {
            m.preprocessing.drop_constant = parse_bool(key, value);
        } else if (key == "target_transform") {
            m.preprocessing.target_transform = parse_target_transform(value);
        } else {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": unknown manifest key '" + key + "'");
        }
    }
    if (m.csv_path.empty()) throw DataError("manifest " + path.string() + " has no path");
    if (m.preprocessing.target.empty()) throw DataError("manifest " + path.string() + " has no target");
    if (m.csv_path.is_relative()) m.csv_path = path.parent_path() / m.csv_path;
    return m;
}

Dataset load_csv(const std::filesystem::path& path, const Preprocessing& prep) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) throw DataError("data file " + path.string() + " is empty");
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::vector<std::string> header = split_fields(line);

    const auto target_it = std::find(header.begin(), header.end(), prep.target);
    if (target_it == header.end()) {
        throw DataError("target column '" + prep.target + "' not found in " + path.string());
    }
    const std::size_t target_col = static_cast<std::size_t>(target_it - header.begin());
    for (const auto& name : prep.drop_columns) {
        if (std::find(header.begin(), header.end(), name) == header.end()) {
            throw DataError("drop column '" + name + "' not found in " + path.string());
        }
    }
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == target_col) continue;
        if (std::find(prep.drop_columns.begin(), prep.drop_columns.end(), header[c]) != prep.drop_columns.end()) continue;
        feature_cols.push_back(c);
    }

    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw DataError(path.string() + ": line " + std::to_string(lineno) + " has " +
                            std::to_string(fields.size()) + " fields, header has " + std::to_string(header.size()));
        }
        std::vector<double> row(feature_cols.size() + 1);
        auto read = [&](std::size_t c, double& out) {
            if (!parse_double(fields[c], out)) {
                throw DataError(path.string() + ": non-numeric value '" + fields[c] + "' at line " +
                                std::to_string(lineno) + ", column '" + header[c] + "'");
            }
        };
        for (std::size_t k = 0; k < feature_cols.size(); ++k) read(feature_cols[k], row[k]);
        read(target_col, row.back());
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw DataError("data file " + path.string() + " has fewer than 2 rows");

    Dataset d;
    d.name = path.stem().string();
    d.target = prep.target;
    const Index n = static_cast<Index>(rows.size());
    Eigen::MatrixXd x(n, static_cast<Index>(feature_cols.size()));
    d.y.resize(n);
    for (Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        for (Index k = 0; k < x.cols(); ++k) x(i, k) = r[static_cast<std::size_t>(k)];
        d.y(i) = r.back();
    }
    if (prep.target_transform == TargetTransform::Log1p) {
        if ((d.y.array() <= -1.0).any()) throw DataError("log1p target transform needs targets > -1");
        d.y = d.y.array().log1p().matrix();
    }

    std::vector<Index> keep;
    for (Index k = 0; k < x.cols(); ++k) {
        const std::string& name = header[feature_cols[static_cast<std::size_t>(k)]];
        if (prep.drop_constant && x.col(k).maxCoeff() == x.col(k).minCoeff()) {
            d.dropped_constant.push_back(name);
        } else {
            keep.push_back(k);
            d.columns.push_back(name);
        }
    }
    d.x.resize(n, static_cast<Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) d.x.col(static_cast<Index>(k)) = x.col(keep[k]);
    if (d.x.cols() == 0) throw DataError("data file " + path.string() + " has no usable feature columns");
    return d;
}

Dataset load_manifest(const std::filesystem::path& path) {
    const Manifest m = parse_manifest(path);
    if (!std::filesystem::exists(m.csv_path)) throw DataError("data file not found: " + m.csv_path.string());
    Dataset d = load_csv(m.csv_path, m.preprocessing);
    d.name = path.stem().string();
    return d;
}

SplitIndices split_indices(Index n, double train_fraction, std::uint64_t seed) {
    if (n < 2) throw DataError("split needs at least 2 rows");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("split: train fraction must lie in (0, 1)");
    }
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto n_train = static_cast<std::ptrdiff_t>(std::floor(train_fraction * static_cast<double>(n)));
    return {std::vector<Index>(perm.begin(), perm.begin() + n_train), std::vector<Index>(perm.begin() + n_train, perm.end())};
}

Dataset take_rows(const Dataset& data, const std::vector<Index>& rows) {
    Dataset out = data;
    out.x.resize(static_cast<Index>(rows.size()), data.dim());
    out.y.resize(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.x.row(static_cast<Index>(i)) = data.x.row(rows[i]);
        out.y(static_cast<Index>(i)) = data.y(rows[i]);
    }
    return out;
}

TrainTest split(const Dataset& data, double train_fraction, std::uint64_t seed) {
    const SplitIndices idx = split_indices(data.size(), train_fraction, seed);
    return {take_rows(data, idx.train), take_rows(data, idx.test)};
}

Dataset subsample(const Dataset& data, Index max_rows, std::uint64_t seed) {
    if (max_rows <= 0 || data.size() <= max_rows) return data;
    std::vector<Index> perm(static_cast<std::size_t>(data.size()));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    perm.resize(static_cast<std::size_t>(max_rows));
    std::sort(perm.begin(), perm.end());
    return take_rows(data, perm);
}

Scaler Scaler::fit(const Dataset& train) {
    if (train.size() < 1) throw DataError("cannot standardize an empty training set");
    Scaler s;
    const double n = static_cast<double>(train.size());
    s.x_mean = train.x.colwise().mean().transpose();
    s.x_std = ((train.x.rowwise() - s.x_mean.transpose()).array().square().colwise().sum() / n).sqrt().transpose();
    for (Index k = 0; k < s.x_std.size(); ++k) {
        if (!(s.x_std(k) > 0.0)) {
            const std::string name = k < static_cast<Index>(train.columns.size())
                                         ? train.columns[static_cast<std::size_t>(k)]
                                         : "column " + std::to_string(k);
            throw DataError("training column '" + name + "' has zero variance");
        }
    }
    s.y_mean = train.y.mean();
    s.y_std = std::sqrt((train.y.array() - s.y_mean).square().sum() / n);
    if (!(s.y_std > 0.0)) throw DataError("training target '" + train.target + "' has zero variance");
    return s;
}

Eigen::MatrixXd Scaler::transform_x(const Eigen::MatrixXd& x) const {
    return ((x.rowwise() - x_mean.transpose()).array().rowwise() / x_std.transpose().array()).matrix();
}

Eigen::MatrixXd Scaler::inverse_x(const Eigen::MatrixXd& x) const {
    return ((x.array().rowwise() * x_std.transpose().array()).rowwise() + x_mean.transpose().array()).matrix();
}

Eigen::VectorXd Scaler::transform_y(const Eigen::VectorXd& y) const {
    return ((y.array() - y_mean) / y_std).matrix();
}

Eigen::VectorXd Scaler::inverse_y(const Eigen::VectorXd& y) const { return (y.array() * y_std + y_mean).matrix(); }

Dataset Scaler::transform(const Dataset& data) const {
    Dataset out = data;
    out.x = transform_x(data.x);
    out.y = transform_y(data.y);
    return out;
}

Standardized standardize(const Dataset& train, const Dataset& test) {
    Scaler s = Scaler::fit(train);
    return {s.transform(train), s.transform(test), std::move(s)};
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& c : data.columns) out << c << ',';
    out << (data.target.empty() ? "y" : data.target) << '\n';
    out << std::setprecision(17);
    for (Index i = 0; i < data.size(); ++i) {
        for (Index k = 0; k < data.dim(); ++k) out << data.x(i, k) << ',';
        out << data.y(i) << '\n';
    }
}

} // namespace sswim
