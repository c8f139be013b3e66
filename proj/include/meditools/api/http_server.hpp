#pragma once

#include "meditools/api/service.hpp"

#include <memory>
#include <string>

namespace meditools::api {

/// Serves an ApiService over HTTP. The service's response is sent as is; the
/// adapter only converts wire formats (including multipart bodies).
class HttpServer {
public:
    explicit HttpServer(ApiService& service, std::size_t max_body_bytes = 32u << 20);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the listening socket; port 0 picks a free one. Returns the port.
    /// Throws Error(Internal) when the address cannot be bound.
    int bind(const std::string& host, int port);

    /// Serves until stop(); in-flight requests finish before it returns.
    void run();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace meditools::api
