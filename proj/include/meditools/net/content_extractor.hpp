#pragma once

#include "meditools/net/html_text.hpp"
#include "meditools/net/http.hpp"

#include <memory>
#include <string>

namespace meditools::net {

/// Turns a web page URL into readable text.
///
/// Implementations throw Error(FetchFailed) when the page cannot be
/// retrieved and Error(ExtractionFailed) when it yields no text.
class ContentExtractor {
public:
    virtual ~ContentExtractor() = default;
    virtual PageText extract(const std::string& url) = 0;
};

/// Article-extraction API (Diffbot v3 wire format).
class DiffbotExtractor : public ContentExtractor {
public:
    static constexpr const char* kDefaultEndpoint = "https://api.diffbot.com/v3/article";

    DiffbotExtractor(std::shared_ptr<HttpTransport> transport, std::string token,
                     std::string endpoint = kDefaultEndpoint);

    PageText extract(const std::string& url) override;

private:
    std::shared_ptr<HttpTransport> transport_;
    std::string token_;
    std::string endpoint_;
};

/// Fetches the page itself and strips the markup.
class DirectFetchExtractor : public ContentExtractor {
public:
    explicit DirectFetchExtractor(std::shared_ptr<HttpTransport> transport);

    PageText extract(const std::string& url) override;

private:
    std::shared_ptr<HttpTransport> transport_;
};

/// Tries `primary`, then `fallback` on any failure.
class FallbackExtractor : public ContentExtractor {
public:
    FallbackExtractor(std::shared_ptr<ContentExtractor> primary, std::shared_ptr<ContentExtractor> fallback);

    PageText extract(const std::string& url) override;

private:
    std::shared_ptr<ContentExtractor> primary_;
    std::shared_ptr<ContentExtractor> fallback_;
};

/// Diffbot with direct-fetch fallback when a token is configured, otherwise
/// direct fetch alone.
std::shared_ptr<ContentExtractor> make_default_extractor(std::shared_ptr<HttpTransport> transport,
                                                         const std::string& diffbot_token);

} // namespace meditools::net
