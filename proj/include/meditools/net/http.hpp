#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace meditools::net {

using Headers = std::multimap<std::string, std::string>;

struct HttpRequest {
    std::string method = "GET";
    std::string url;
    Headers headers;
    std::string body;
    std::string content_type;
};

struct HttpResponse {
    int status = 0;
    Headers headers;
    std::string body;

    bool ok() const { return status >= 200 && status < 300; }
};

/// Connection-level failure: DNS, refused, TLS, timeout. HTTP error statuses
/// are returned as responses, not thrown.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All outbound traffic goes through this so tests can run on recordings.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// Adapts a callable; handy for tests and for wrapping one transport in another.
class FunctionTransport : public HttpTransport {
public:
    using Handler = std::function<HttpResponse(const HttpRequest&)>;
    explicit FunctionTransport(Handler handler) : handler_(std::move(handler)) {}
    HttpResponse send(const HttpRequest& request) override { return handler_(request); }

private:
    Handler handler_;
};

struct LiveTransportOptions {
    std::chrono::seconds connect_timeout{10};
    std::chrono::seconds read_timeout{120};
    std::string user_agent = "meditools/1.0";
};

/// HTTPS/HTTP client backed by cpp-httplib.
std::shared_ptr<HttpTransport> make_live_transport(LiveTransportOptions options = {});

struct UrlParts {
    std::string scheme;
    std::string host;
    int port = 0;
    std::string path; // includes query string
};

UrlParts split_url(std::string_view url);

std::string percent_encode(std::string_view text);
std::string percent_decode(std::string_view text);

/// Builds "k1=v1&k2=v2" with both sides percent-encoded, in the given order.
std::string build_query(const std::vector<std::pair<std::string, std::string>>& params);

/// Parses the query part of a URL (or a bare query string) into ordered pairs.
std::vector<std::pair<std::string, std::string>> parse_query(std::string_view url_or_query);

std::string header_value(const Headers& headers, std::string_view name);

} // namespace meditools::net
