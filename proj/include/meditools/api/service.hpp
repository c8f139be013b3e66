#pragma once

#include "meditools/api/config.hpp"
#include "meditools/api/errors.hpp"
#include "meditools/api/mailer.hpp"
#include "meditools/catalog/catalog.hpp"
#include "meditools/derm/engine.hpp"
#include "meditools/llm/gateway.hpp"
#include "meditools/llm/mock_provider.hpp"
#include "meditools/net/content_extractor.hpp"
#include "meditools/news/news.hpp"
#include "meditools/pubmed/client.hpp"
#include "meditools/session/store.hpp"

#include <spdlog/logger.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <string>

namespace meditools::api {

inline constexpr const char* kSessionCookie = "meditools_session";
inline constexpr const char* kPubmedNamespace = "pubmed";

/// One part of a multipart/form-data body.
struct FormPart {
    std::string name;
    std::string filename;
    std::string content_type;
    std::string content;
};

/// Transport-neutral request; the HTTP adapter fills it from the wire.
struct ApiRequest {
    std::string method = "GET";
    std::string target; // path plus optional query string
    net::Headers headers;
    std::string body;
    std::vector<FormPart> parts;
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    net::Headers headers;

    bool is_stream() const { return content_type == "text/event-stream"; }
};

struct ServiceDeps {
    std::shared_ptr<session::SessionStore> store;
    std::shared_ptr<const catalog::Catalog> catalog;
    std::shared_ptr<const llm::LlmGateway> gateway;
    std::shared_ptr<derm::DermEngine> derm;
    std::shared_ptr<pubmed::PubMedClient> pubmed;
    std::shared_ptr<net::ContentExtractor> extractor;
    llm::PromptTemplate paper_prompt{""};
    std::shared_ptr<news::NewsSearch> news_search;
    std::shared_ptr<news::Summarizer> summarizer;
    /// Suggested topics for the news picker; requests may name others.
    std::vector<std::string> news_topics;
    std::shared_ptr<Mailer> mailer;
    std::shared_ptr<SecretScrubber> scrubber;
    std::shared_ptr<spdlog::logger> logger;

    std::function<std::chrono::system_clock::time_point()> clock = [] { return std::chrono::system_clock::now(); };
    std::optional<std::uint64_t> seed; // fixed seed makes case draws reproducible
    /// Static dependency status reported by /healthz.
    nlohmann::json health;
    /// Sessions are written here on shutdown and read back by restore().
    std::filesystem::path snapshot_file;
};

/// The HTTP/JSON surface. handle() never throws: every failure becomes an
/// ApiError body, and every body and log line passes through the scrubber.
class ApiService {
public:
    explicit ApiService(ServiceDeps deps);

    ApiResponse handle(const ApiRequest& request) noexcept;

    /// Loads the snapshot file if it exists; returns sessions restored.
    std::size_t restore();
    /// Writes the snapshot file (when configured).
    void shutdown();

    const ServiceDeps& deps() const { return deps_; }
    std::size_t requests_served() const { return served_.load(); }

private:
    struct Context;
    using Handler = ApiResponse (ApiService::*)(Context&);
    struct Route {
        std::string method;
        std::string path; // a trailing '*' matches one nonempty segment
        Handler handler;
        bool needs_session;
    };

    ApiResponse dispatch(Context& ctx);
    std::string require_session(Context& ctx) const;
    std::string random_hex(std::size_t bytes);

    ApiResponse create_session(Context& ctx);
    ApiResponse list_models(Context& ctx);
    ApiResponse health(Context& ctx);
    ApiResponse derm_get_case(Context& ctx);
    ApiResponse derm_new_case(Context& ctx);
    ApiResponse derm_model(Context& ctx);
    ApiResponse derm_feedback_mode(Context& ctx);
    ApiResponse derm_message(Context& ctx);
    ApiResponse derm_audio(Context& ctx);
    ApiResponse derm_labs(Context& ctx);
    ApiResponse derm_image(Context& ctx);
    ApiResponse derm_guess(Context& ctx);
    ApiResponse derm_repeat(Context& ctx);
    ApiResponse derm_report(Context& ctx);
    ApiResponse pubmed_search(Context& ctx);
    ApiResponse pubmed_select(Context& ctx);
    ApiResponse pubmed_chat(Context& ctx);
    ApiResponse news_topics(Context& ctx);
    ApiResponse news(Context& ctx);
    ApiResponse feedback(Context& ctx);

    ServiceDeps deps_;
    std::vector<Route> routes_;
    std::mutex rng_mutex_;
    std::mt19937_64 rng_;
    std::atomic<std::size_t> served_{0};
};

/// Knobs tests and the CLI use to replace live dependencies.
struct BuildOverrides {
    std::shared_ptr<net::HttpTransport> transport;
    std::shared_ptr<llm::MockProvider> mock;
    std::shared_ptr<Mailer> mailer;
    std::shared_ptr<spdlog::logger> logger;
    std::shared_ptr<news::NewsSearch> news_search;
    std::shared_ptr<net::ContentExtractor> extractor;
    std::function<std::chrono::system_clock::time_point()> clock;
    std::optional<std::uint64_t> seed;
};

struct ServiceBundle {
    std::shared_ptr<llm::MockProvider> mock;
    std::unique_ptr<ApiService> service;
};

/// Validates the config, loads registry, catalog, prompts and wires every
/// module. Throws Error naming the missing dependency (e.g. MEDITOOLS_IMAGE_ROOT).
ServiceBundle build_service(const ServiceConfig& config, BuildOverrides overrides = {});

} // namespace meditools::api
