#pragma once

#include "meditools/llm/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace meditools::llm {

struct ModelInfo {
    std::string id;
    std::string display_name;
    ProviderRoute route = ProviderRoute::Aggregator;
};

/// Declarative list of selectable models. Immutable once loaded.
///
/// File format (JSON):
///
///     { "models": [ { "id": "gpt-4o", "display_name": "GPT-4o", "route": "openai" },
///                   { "id": "anthropic/claude-3-haiku", "route": "openrouter" } ] }
///
/// `route` is one of "openai", "openrouter", "mock"; `display_name` defaults
/// to the id. Ids must be unique and nonempty.
class ModelRegistry {
public:
    ModelRegistry() = default;
    explicit ModelRegistry(std::vector<ModelInfo> models);

    static ModelRegistry from_json(const nlohmann::json& doc);
    static ModelRegistry load(const std::filesystem::path& file);

    /// Throws Error(UnknownModel) for ids absent from the registry.
    ProviderRoute route(const std::string& model) const;
    const ModelInfo& info(const std::string& model) const;
    bool contains(const std::string& model) const { return index_.count(model) != 0; }

    /// In file order.
    const std::vector<ModelInfo>& models() const { return models_; }
    bool empty() const { return models_.empty(); }

private:
    std::vector<ModelInfo> models_;
    std::map<std::string, std::size_t> index_;
};

} // namespace meditools::llm
