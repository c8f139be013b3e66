#include "meditools/api/http_server.hpp"

#include <httplib.h>

namespace meditools::api {

struct HttpServer::Impl {
    ApiService& service;
    httplib::Server server;

    explicit Impl(ApiService& s) : service(s) {}

    void handle(const httplib::Request& req, httplib::Response& res)
    {
        ApiRequest request;
        request.method = req.method;
        request.target = req.target.empty() ? req.path : req.target;
        for (const auto& [name, value] : req.headers)
            request.headers.emplace(name, value);
        request.body = req.body;
        for (const auto& [name, file] : req.files)
            request.parts.push_back({file.name, file.filename, file.content_type, file.content});

        auto response = service.handle(request);
        res.status = response.status;
        for (const auto& [name, value] : response.headers)
            res.set_header(name, value);
        res.set_content(std::move(response.body), response.content_type);
    }
};

HttpServer::HttpServer(ApiService& service, std::size_t max_body_bytes) : impl_(std::make_unique<Impl>(service))
{
    auto& server = impl_->server;
    server.set_payload_max_length(max_body_bytes);
    const auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->handle(req, res); };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Patch(".*", handler);
    server.Delete(".*", handler);
    server.Options(".*", handler);

    // Failures httplib detects before routing (oversized bodies, bad framing).
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty())
            return;
        const auto code = res.status == 413 ? ErrorCode::InvalidRequest
                          : res.status == 404 ? ErrorCode::NotFound
                          : res.status >= 500 ? ErrorCode::Internal
                                              : ErrorCode::InvalidRequest;
        res.set_content(error_body(code, httplib::status_message(res.status)).dump(), "application/json");
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
        res.status = 500;
        res.set_content(error_body(ErrorCode::Internal, "internal error").dump(), "application/json");
    });
}

HttpServer::~HttpServer()
{
    stop();
}

int HttpServer::bind(const std::string& host, int port)
{
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                                : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound <= 0)
        throw Error(ErrorCode::Internal, "cannot listen on " + host + ":" + std::to_string(port));
    return bound;
}

void HttpServer::run()
{
    impl_->server.listen_after_bind();
}

void HttpServer::stop()
{
    if (impl_)
        impl_->server.stop();
}

void HttpServer::wait_until_ready() const
{
    impl_->server.wait_until_ready();
}

} // namespace meditools::api
