#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace meditools::api {

struct ServiceConfig {
    std::string openai_key;     // MEDITOOLS_OPENAI_KEY
    std::string openrouter_key; // MEDITOOLS_OPENROUTER_KEY
    std::string serper_key;     // MEDITOOLS_SERPER_KEY
    std::string diffbot_token;  // MEDITOOLS_DIFFBOT_TOKEN
    std::string mailer_key;     // MEDITOOLS_MAILER_KEY
    std::string ncbi_key;       // MEDITOOLS_NCBI_KEY

    std::filesystem::path image_root;    // MEDITOOLS_IMAGE_ROOT
    std::filesystem::path state_dir;     // MEDITOOLS_STATE_DIR, empty: no persistence
    std::filesystem::path registry_path; // MEDITOOLS_REGISTRY_PATH, default <data_dir>/registry.json
    std::filesystem::path data_dir;      // MEDITOOLS_DATA_DIR

    std::string mailer_from; // MEDITOOLS_MAILER_FROM
    std::string mailer_to;   // MEDITOOLS_MAILER_TO
    std::string news_model = "gpt-4o"; // MEDITOOLS_NEWS_MODEL
    std::string chain_model;           // MEDITOOLS_CHAIN_MODEL, empty: the case's model

    /// MEDITOOLS_LLM=mock wires the mock provider into every route.
    bool mock_llm = false;
    /// MEDITOOLS_FIXTURES: serve upstream HTTP from recordings.
    std::filesystem::path fixtures_dir;

    using Lookup = std::function<std::optional<std::string>(const std::string&)>;

    static ServiceConfig from_env(const Lookup& lookup);
    static ServiceConfig from_process_env();

    /// Values that must never appear in a response or log line.
    std::vector<std::string> secrets() const;

    /// Throws Error(MissingRoot) naming the variable at fault.
    void validate() const;
};

/// Directory compiled in as the default data location.
std::filesystem::path default_data_dir();

} // namespace meditools::api
