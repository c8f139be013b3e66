#include "meditools/llm/registry.hpp"

#include "meditools/error.hpp"

#include <fstream>
#include <sstream>

namespace meditools::llm {

ModelRegistry::ModelRegistry(std::vector<ModelInfo> models) : models_(std::move(models))
{
    for (std::size_t i = 0; i < models_.size(); ++i) {
        auto& m = models_[i];
        if (m.id.empty())
            throw Error(ErrorCode::InvalidRequest, "model registry entry with empty id");
        if (m.display_name.empty())
            m.display_name = m.id;
        if (!index_.emplace(m.id, i).second)
            throw Error(ErrorCode::InvalidRequest, "duplicate model id in registry: " + m.id);
    }
}

ModelRegistry ModelRegistry::from_json(const nlohmann::json& doc)
{
    if (!doc.is_object() || !doc.contains("models") || !doc["models"].is_array())
        throw Error(ErrorCode::InvalidRequest, "model registry needs a \"models\" array");
    std::vector<ModelInfo> models;
    for (const auto& entry : doc["models"]) {
        if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string() ||
            !entry.contains("route") || !entry["route"].is_string())
            throw Error(ErrorCode::InvalidRequest, "model registry entries need string id and route");
        ModelInfo info;
        info.id = entry["id"].get<std::string>();
        info.display_name = entry.value("display_name", "");
        info.route = route_from_string(entry["route"].get<std::string>());
        models.push_back(std::move(info));
    }
    return ModelRegistry(std::move(models));
}

ModelRegistry ModelRegistry::load(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw Error(ErrorCode::MissingFile, "cannot read model registry " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return from_json(nlohmann::json::parse(buf.str()));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidRequest, "model registry " + file.string() + " is not valid JSON: " + e.what());
    }
}

const ModelInfo& ModelRegistry::info(const std::string& model) const
{
    auto it = index_.find(model);
    if (it == index_.end())
        throw Error(ErrorCode::UnknownModel, "unknown model: " + model, {{"model", model}});
    return models_[it->second];
}

ProviderRoute ModelRegistry::route(const std::string& model) const
{
    return info(model).route;
}

} // namespace meditools::llm
