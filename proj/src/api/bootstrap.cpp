#include "meditools/api/logging.hpp"
#include "meditools/api/service.hpp"
#include "meditools/llm/openai_compatible.hpp"
#include "meditools/net/replay_transport.hpp"
#include "meditools/news/serper.hpp"

namespace meditools::api {

namespace {

template <typename F>
auto naming(const char* variable, F&& load)
{
    try {
        return load();
    } catch (const Error& e) {
        throw Error(ErrorCode::MissingRoot, std::string(variable) + ": " + e.what(),
                    {{"variable", variable}, {"cause", to_string(e.code())}});
    }
}

} // namespace

ServiceBundle build_service(const ServiceConfig& config, BuildOverrides o)
{
    config.validate();

    auto scrubber = std::make_shared<SecretScrubber>(config.secrets());
    auto logger = o.logger ? o.logger : make_console_logger(scrubber);

    std::shared_ptr<net::HttpTransport> transport = o.transport;
    if (!transport)
        transport = config.fixtures_dir.empty()
                        ? net::make_live_transport()
                        : std::static_pointer_cast<net::HttpTransport>(
                              net::ReplayTransport::from_directory(config.fixtures_dir));

    auto registry = naming("MEDITOOLS_REGISTRY_PATH", [&] { return llm::ModelRegistry::load(config.registry_path); });
    auto catalog = naming("MEDITOOLS_IMAGE_ROOT", [&] {
        return std::make_shared<const catalog::Catalog>(catalog::Catalog::scan(config.image_root));
    });
    auto derm_config = naming("MEDITOOLS_DATA_DIR", [&] { return derm::DermConfig::load(config.data_dir); });
    derm_config.chain_model = config.chain_model;
    const auto prompts = config.data_dir / "prompts";
    auto paper_prompt =
        naming("MEDITOOLS_DATA_DIR", [&] { return llm::PromptTemplate::load(prompts / "paper_chat.txt"); });
    auto summary_prompt =
        naming("MEDITOOLS_DATA_DIR", [&] { return llm::PromptTemplate::load(prompts / "news_summary.txt"); });

    auto mock = o.mock ? o.mock : std::make_shared<llm::MockProvider>(&llm::MockProvider::scripted);
    llm::ProviderSet providers;
    providers.mock = mock;
    if (config.mock_llm) {
        providers.openai = providers.aggregator = mock;
        providers.speech = mock;
    } else {
        auto openai = std::make_shared<llm::OpenAiCompatibleProvider>(transport, llm::openai_config(config.openai_key));
        providers.openai = openai;
        providers.speech = openai;
        providers.aggregator =
            std::make_shared<llm::OpenAiCompatibleProvider>(transport, llm::openrouter_config(config.openrouter_key));
    }
    auto gateway = std::make_shared<const llm::LlmGateway>(std::move(registry), std::move(providers));
    if (!gateway->registry().contains(config.news_model))
        throw Error(ErrorCode::UnknownModel, "MEDITOOLS_NEWS_MODEL is not in the registry: " + config.news_model,
                    {{"variable", "MEDITOOLS_NEWS_MODEL"}});
    if (!config.chain_model.empty() && !gateway->registry().contains(config.chain_model))
        throw Error(ErrorCode::UnknownModel, "MEDITOOLS_CHAIN_MODEL is not in the registry: " + config.chain_model,
                    {{"variable", "MEDITOOLS_CHAIN_MODEL"}});

    session::SessionStore::Options store_options;
    if (o.clock)
        store_options.now = o.clock;
    auto store = std::make_shared<session::SessionStore>(store_options);

    ServiceDeps deps;
    deps.store = store;
    deps.catalog = catalog;
    deps.gateway = gateway;
    deps.derm = std::make_shared<derm::DermEngine>(store, catalog, gateway, std::move(derm_config));
    pubmed::ClientOptions pubmed_options;
    pubmed_options.api_key = config.ncbi_key;
    deps.pubmed = std::make_shared<pubmed::PubMedClient>(transport, pubmed_options);
    deps.extractor = o.extractor ? o.extractor : net::make_default_extractor(transport, config.diffbot_token);
    deps.paper_prompt = std::move(paper_prompt);
    auto clock = o.clock ? o.clock : [] { return std::chrono::system_clock::now(); };
    deps.news_search = o.news_search ? o.news_search
                                     : std::make_shared<news::SerperSearch>(
                                           transport, config.serper_key, news::SerperSearch::kDefaultEndpoint,
                                           [clock] { return std::chrono::floor<std::chrono::days>(clock()); });
    deps.news_topics =
        naming("MEDITOOLS_DATA_DIR", [&] { return news::load_topic_list(config.data_dir / "news" / "specialties.txt"); });
    news::SummarizerConfig summarizer_config;
    summarizer_config.model = config.news_model;
    summarizer_config.prompt = std::move(summary_prompt);
    deps.summarizer = std::make_shared<news::Summarizer>(deps.extractor, gateway, std::move(summarizer_config));

    std::string mailer_kind = "sendgrid";
    if (o.mailer) {
        deps.mailer = o.mailer;
        mailer_kind = "custom";
    } else if (!config.mailer_key.empty()) {
        deps.mailer = std::make_shared<SendGridMailer>(
            transport, SendGridOptions{.api_key = config.mailer_key, .from = config.mailer_from, .to = config.mailer_to});
    } else {
        deps.mailer = std::make_shared<MemoryMailer>();
        mailer_kind = "memory";
        logger->warn("MEDITOOLS_MAILER_KEY is not set; feedback is kept in memory only");
    }

    deps.scrubber = scrubber;
    deps.logger = logger;
    if (o.clock)
        deps.clock = o.clock;
    deps.seed = o.seed;
    if (!config.state_dir.empty())
        deps.snapshot_file = config.state_dir / "sessions.json";
    deps.health = {
        {"llm", config.mock_llm ? "mock" : "live"},
        {"upstream", config.fixtures_dir.empty() && !o.transport ? "live" : "replay"},
        {"providers",
         {{"openai", config.mock_llm || !config.openai_key.empty()},
          {"openrouter", config.mock_llm || !config.openrouter_key.empty()}}},
        {"news_search", static_cast<bool>(o.news_search) || !config.serper_key.empty()},
        {"extractor", config.diffbot_token.empty() ? "direct" : "diffbot+direct"},
        {"mailer", mailer_kind},
        {"persistence", !config.state_dir.empty()},
    };

    ServiceBundle bundle;
    bundle.mock = mock;
    bundle.service = std::make_unique<ApiService>(std::move(deps));
    return bundle;
}

} // namespace meditools::api
