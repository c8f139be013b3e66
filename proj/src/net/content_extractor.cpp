#include "meditools/net/content_extractor.hpp"

#include "meditools/error.hpp"

#include <nlohmann/json.hpp>

namespace meditools::net {

namespace {

bool blank(const std::string& text)
{
    return text.find_first_not_of(" \t\r\n") == std::string::npos;
}

HttpResponse fetch(HttpTransport& transport, const HttpRequest& request, const std::string& what)
{
    HttpResponse response;
    try {
        response = transport.send(request);
    } catch (const TransportError& e) {
        throw Error(ErrorCode::FetchFailed, what + " unreachable: " + e.what());
    }
    if (!response.ok())
        throw Error(ErrorCode::FetchFailed, what + " returned HTTP " + std::to_string(response.status),
                    {{"status", response.status}});
    return response;
}

} // namespace

DiffbotExtractor::DiffbotExtractor(std::shared_ptr<HttpTransport> transport, std::string token,
                                   std::string endpoint)
    : transport_(std::move(transport)), token_(std::move(token)), endpoint_(std::move(endpoint))
{
}

PageText DiffbotExtractor::extract(const std::string& url)
{
    HttpRequest request;
    request.url = endpoint_ + "?" + build_query({{"token", token_}, {"url", url}});
    request.headers.emplace("Accept", "application/json");
    const HttpResponse response = fetch(*transport_, request, "article extraction service");

    nlohmann::json body;
    try {
        body = nlohmann::json::parse(response.body);
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::ExtractionFailed, "article extraction returned invalid JSON");
    }
    if (body.contains("error"))
        throw Error(ErrorCode::ExtractionFailed,
                    "article extraction failed: " + body.value("error", std::string("unknown error")));

    const auto objects = body.value("objects", nlohmann::json::array());
    if (!objects.is_array() || objects.empty() || !objects[0].is_object())
        throw Error(ErrorCode::ExtractionFailed, "article extraction returned no objects for " + url);

    PageText page;
    page.title = objects[0].value("title", "");
    page.text = objects[0].value("text", "");
    if (blank(page.text))
        throw Error(ErrorCode::ExtractionFailed, "article extraction returned empty text for " + url);
    return page;
}

DirectFetchExtractor::DirectFetchExtractor(std::shared_ptr<HttpTransport> transport)
    : transport_(std::move(transport))
{
}

PageText DirectFetchExtractor::extract(const std::string& url)
{
    HttpRequest request;
    request.url = url;
    request.headers.emplace("Accept", "text/html,application/xhtml+xml");
    const HttpResponse response = fetch(*transport_, request, url);
    PageText page = html_to_text(response.body);
    if (blank(page.text))
        throw Error(ErrorCode::ExtractionFailed, "no readable text at " + url);
    return page;
}

FallbackExtractor::FallbackExtractor(std::shared_ptr<ContentExtractor> primary,
                                     std::shared_ptr<ContentExtractor> fallback)
    : primary_(std::move(primary)), fallback_(std::move(fallback))
{
}

PageText FallbackExtractor::extract(const std::string& url)
{
    try {
        return primary_->extract(url);
    } catch (const Error&) {
        return fallback_->extract(url);
    }
}

std::shared_ptr<ContentExtractor> make_default_extractor(std::shared_ptr<HttpTransport> transport,
                                                         const std::string& diffbot_token)
{
    auto direct = std::make_shared<DirectFetchExtractor>(transport);
    if (diffbot_token.empty())
        return direct;
    return std::make_shared<FallbackExtractor>(
        std::make_shared<DiffbotExtractor>(std::move(transport), diffbot_token), direct);
}

} // namespace meditools::net
