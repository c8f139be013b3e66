#include "meditools/net/http.hpp"

#include <httplib.h>

namespace meditools::net {

namespace {

class LiveTransport : public HttpTransport {
public:
    explicit LiveTransport(LiveTransportOptions options) : options_(std::move(options)) {}

    HttpResponse send(const HttpRequest& request) override
    {
        const UrlParts url = split_url(request.url);
        httplib::Client client(url.scheme + "://" + url.host + ":" + std::to_string(url.port));
        client.set_connection_timeout(options_.connect_timeout);
        client.set_read_timeout(options_.read_timeout);
        client.set_follow_location(true);

        httplib::Headers headers;
        for (const auto& [key, value] : request.headers)
            headers.emplace(key, value);
        if (headers.find("User-Agent") == headers.end())
            headers.emplace("User-Agent", options_.user_agent);

        httplib::Result result;
        const std::string content_type =
            request.content_type.empty() ? "application/octet-stream" : request.content_type;
        if (request.method == "GET")
            result = client.Get(url.path, headers);
        else if (request.method == "POST")
            result = client.Post(url.path, headers, request.body, content_type);
        else if (request.method == "PUT")
            result = client.Put(url.path, headers, request.body, content_type);
        else if (request.method == "DELETE")
            result = client.Delete(url.path, headers);
        else
            throw TransportError("unsupported HTTP method: " + request.method);

        if (!result)
            throw TransportError(url.host + ": " + httplib::to_string(result.error()));

        HttpResponse response;
        response.status = result->status;
        response.body = std::move(result->body);
        for (const auto& [key, value] : result->headers)
            response.headers.emplace(key, value);
        return response;
    }

private:
    LiveTransportOptions options_;
};

} // namespace

std::shared_ptr<HttpTransport> make_live_transport(LiveTransportOptions options)
{
    return std::make_shared<LiveTransport>(std::move(options));
}

} // namespace meditools::net
