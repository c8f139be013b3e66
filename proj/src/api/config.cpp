#include "meditools/api/config.hpp"

#include "meditools/error.hpp"

#include <cstdlib>

#ifndef MEDITOOLS_DEFAULT_DATA_DIR
#define MEDITOOLS_DEFAULT_DATA_DIR "data"
#endif

namespace meditools::api {

namespace fs = std::filesystem;

fs::path default_data_dir()
{
    return MEDITOOLS_DEFAULT_DATA_DIR;
}

ServiceConfig ServiceConfig::from_env(const Lookup& lookup)
{
    const auto get = [&](const char* name) { return lookup(name).value_or(""); };
    ServiceConfig c;
    c.openai_key = get("MEDITOOLS_OPENAI_KEY");
    c.openrouter_key = get("MEDITOOLS_OPENROUTER_KEY");
    c.serper_key = get("MEDITOOLS_SERPER_KEY");
    c.diffbot_token = get("MEDITOOLS_DIFFBOT_TOKEN");
    c.mailer_key = get("MEDITOOLS_MAILER_KEY");
    c.ncbi_key = get("MEDITOOLS_NCBI_KEY");
    c.image_root = get("MEDITOOLS_IMAGE_ROOT");
    c.state_dir = get("MEDITOOLS_STATE_DIR");
    c.data_dir = get("MEDITOOLS_DATA_DIR");
    if (c.data_dir.empty())
        c.data_dir = default_data_dir();
    c.registry_path = get("MEDITOOLS_REGISTRY_PATH");
    if (c.registry_path.empty())
        c.registry_path = c.data_dir / "registry.json";
    c.mailer_from = get("MEDITOOLS_MAILER_FROM");
    c.mailer_to = get("MEDITOOLS_MAILER_TO");
    if (auto m = lookup("MEDITOOLS_NEWS_MODEL"); m && !m->empty())
        c.news_model = *m;
    c.chain_model = get("MEDITOOLS_CHAIN_MODEL");
    c.mock_llm = get("MEDITOOLS_LLM") == "mock";
    c.fixtures_dir = get("MEDITOOLS_FIXTURES");
    return c;
}

ServiceConfig ServiceConfig::from_process_env()
{
    return from_env([](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str()))
            return std::string(v);
        return std::nullopt;
    });
}

std::vector<std::string> ServiceConfig::secrets() const
{
    std::vector<std::string> out;
    for (const auto* s : {&openai_key, &openrouter_key, &serper_key, &diffbot_token, &mailer_key, &ncbi_key})
        if (!s->empty())
            out.push_back(*s);
    return out;
}

void ServiceConfig::validate() const
{
    std::error_code ec;
    if (image_root.empty())
        throw Error(ErrorCode::MissingRoot, "MEDITOOLS_IMAGE_ROOT is not set",
                    {{"variable", "MEDITOOLS_IMAGE_ROOT"}});
    if (!fs::is_directory(image_root, ec))
        throw Error(ErrorCode::MissingRoot, "MEDITOOLS_IMAGE_ROOT is not a directory: " + image_root.string(),
                    {{"variable", "MEDITOOLS_IMAGE_ROOT"}});
    if (!fs::is_regular_file(registry_path, ec))
        throw Error(ErrorCode::MissingRoot, "MEDITOOLS_REGISTRY_PATH does not name a file: " + registry_path.string(),
                    {{"variable", "MEDITOOLS_REGISTRY_PATH"}});
    if (!fs::is_directory(data_dir / "prompts", ec))
        throw Error(ErrorCode::MissingRoot, "MEDITOOLS_DATA_DIR has no prompts/ directory: " + data_dir.string(),
                    {{"variable", "MEDITOOLS_DATA_DIR"}});
    if (!fixtures_dir.empty() && !fs::is_directory(fixtures_dir, ec))
        throw Error(ErrorCode::MissingRoot, "MEDITOOLS_FIXTURES is not a directory: " + fixtures_dir.string(),
                    {{"variable", "MEDITOOLS_FIXTURES"}});
}

} // namespace meditools::api
