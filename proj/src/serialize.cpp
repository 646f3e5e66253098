#include "sswim/serialize.hpp"

#include <fstream>
#include <string>

#include "sswim/errors.hpp"
#include "sswim/objective.hpp"

namespace sswim {

namespace {

using nlohmann::json;

json matrix_json(const MatrixXd& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_json(const VectorXd& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

MatrixXd matrix_from(const json& j, Index cols, const char* what) {
    if (!j.is_array()) throw DataError(std::string("model document: ") + what + " must be an array of rows");
    MatrixXd m(static_cast<Index>(j.size()), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw DataError(std::string("model document: ") + what + " row " + std::to_string(i) +
                            " does not have " + std::to_string(cols) + " entries");
        }
        for (Index k = 0; k < cols; ++k) m(static_cast<Index>(i), k) = row[static_cast<std::size_t>(k)].get<double>();
    }
    return m;
}

VectorXd vector_from(const json& j) {
    VectorXd v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = j[i].get<double>();
    return v;
}

json basis_json(const SpectralBasis& b) {
    return {{"family", std::string(to_string(b.family()))},
            {"base_draws", matrix_json(b.base_draws())},
            {"lengthscales", vector_json(b.lengthscales())},
            {"amplitude", b.amplitude()}};
}

SpectralBasis basis_from(const json& j, Index dim) {
    const MatrixXd draws = matrix_from(j.at("base_draws"), dim, "base_draws");
    return SpectralBasis(parse_kernel_family(j.at("family").get<std::string>()), draws,
                         vector_from(j.at("lengthscales")), j.at("amplitude").get<double>());
}

json gp_json(const PseudoGp& gp) {
    return {{"basis", basis_json(gp.basis)},
            {"noise_var", gp.noise_var},
            {"inputs", matrix_json(gp.inputs)},
            {"targets", matrix_json(gp.targets)}};
}

PseudoGp gp_from(const json& j, Index dim) {
    return PseudoGp{basis_from(j.at("basis"), dim), matrix_from(j.at("inputs"), dim, "pseudo inputs"),
                    matrix_from(j.at("targets"), dim, "pseudo targets"), j.at("noise_var").get<double>()};
}

} // namespace

json to_json(const ModelDocument& doc) {
    const SswimModel& m = doc.model;
    json layers = json::array();
    for (const WarpLayer& layer : m.stack.layers()) layers.push_back({{"g", gp_json(layer.g())}, {"h", gp_json(layer.h())}});
    json j = {{"format", "sswim-model"},
              {"schema_version", kModelSchemaVersion},
              {"seed", m.seed},
              {"dim", m.dim()},
              {"depth", m.depth()},
              {"top", {{"basis", basis_json(m.top_basis)}, {"noise_var", m.top_noise_var}}},
              {"layers", std::move(layers)},
              {"metadata", doc.metadata}};
    if (m.conditioning) {
        j["conditioning"] = {{"inputs", matrix_json(m.conditioning->inputs)},
                             {"targets", vector_json(m.conditioning->targets)}};
    }
    if (doc.scaler) {
        j["scaler"] = {{"x_mean", vector_json(doc.scaler->x_mean)},
                       {"x_std", vector_json(doc.scaler->x_std)},
                       {"y_mean", doc.scaler->y_mean},
                       {"y_std", doc.scaler->y_std}};
    }
    return j;
}

ModelDocument from_json(const json& j) {
    try {
        if (j.value("format", std::string()) != "sswim-model") throw DataError("not an sswim model document");
        const int version = j.at("schema_version").get<int>();
        if (version != kModelSchemaVersion) {
            throw DataError("unsupported model schema version " + std::to_string(version));
        }
        const Index dim = j.at("dim").get<Index>();
        std::vector<WarpLayer> layers;
        for (const json& l : j.at("layers")) layers.emplace_back(gp_from(l.at("g"), dim), gp_from(l.at("h"), dim));
        const json& top = j.at("top");
        ModelDocument doc{SswimModel{WarpStack(std::move(layers)), basis_from(top.at("basis"), dim),
                                     top.at("noise_var").get<double>(), j.at("seed").get<std::uint64_t>(),
                                     std::nullopt, std::nullopt},
                          std::nullopt, j.value("metadata", json::object())};
        if (j.contains("conditioning")) {
            const json& c = j.at("conditioning");
            condition(doc.model, matrix_from(c.at("inputs"), dim, "conditioning inputs"), vector_from(c.at("targets")));
        }
        if (j.contains("scaler")) {
            const json& s = j.at("scaler");
            Scaler sc;
            sc.x_mean = vector_from(s.at("x_mean"));
            sc.x_std = vector_from(s.at("x_std"));
            sc.y_mean = s.at("y_mean").get<double>();
            sc.y_std = s.at("y_std").get<double>();
            doc.scaler = std::move(sc);
        }
        return doc;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelDocument& doc) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model " + path.string());
    out << to_json(doc).dump(1) << '\n';
}

ModelDocument load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("model " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

} // namespace sswim
