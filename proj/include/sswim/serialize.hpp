#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "sswim/data.hpp"
#include "sswim/model.hpp"

namespace sswim {

inline constexpr int kModelSchemaVersion = 1;

struct ModelDocument {
    SswimModel model;
    std::optional<Scaler> scaler;
    nlohmann::json metadata = nlohmann::json::object();
};

/// Self-describing JSON: schema version, seed, kernel family, every basis
/// (frozen draws, lengthscales, amplitude), noise variances, pseudo data, the
/// conditioning data and an optional scaler. Loading refits every posterior.
nlohmann::json to_json(const ModelDocument& doc);
ModelDocument from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const ModelDocument& doc);
ModelDocument load_model(const std::filesystem::path& path);

} // namespace sswim
