#pragma once

#include "meditools/net/http.hpp"

#include <atomic>
#include <filesystem>
#include <mutex>
#include <optional>
#include <set>

namespace meditools::net {

/// One recorded exchange. A request matches when method, scheme, host and
/// path agree, the query parameters agree as a multiset (ignoring credential
/// parameters), and the body contains `body_contains` if that is set.
struct RecordedExchange {
    std::string method = "GET";
    std::string url;
    std::string body_contains;
    int status = 200;
    std::string content_type;
    std::string body;
    std::optional<std::string> transport_error;
};

/// Serves recorded exchanges instead of touching the network.
///
/// Fixture directories hold an `index.json`:
///
///     { "exchanges": [ { "method": "GET", "url": "...", "status": 200,
///                        "body_file": "esearch.json" }, ... ] }
///
/// `body` may be given inline instead of `body_file`; `error` turns the entry
/// into a connection failure. Unmatched requests throw TransportError.
/// A directory without its own index loads every subdirectory that has one.
class ReplayTransport : public HttpTransport {
public:
    ReplayTransport() = default;
    explicit ReplayTransport(std::vector<RecordedExchange> exchanges);

    static std::shared_ptr<ReplayTransport> from_directory(const std::filesystem::path& dir);

    void add(RecordedExchange exchange);

    HttpResponse send(const HttpRequest& request) override;

    std::size_t calls() const { return calls_.load(); }

    /// Query parameters never compared (they carry credentials).
    static const std::set<std::string>& credential_params();

private:
    mutable std::mutex mutex_;
    std::vector<RecordedExchange> exchanges_;
    std::atomic<std::size_t> calls_{0};
};

/// Forwards to an inner transport and appends every exchange to a fixture
/// directory in the format ReplayTransport reads. Credential query parameters
/// and headers are never written.
class RecordingTransport : public HttpTransport {
public:
    RecordingTransport(std::shared_ptr<HttpTransport> inner, std::filesystem::path dir);

    HttpResponse send(const HttpRequest& request) override;

private:
    std::shared_ptr<HttpTransport> inner_;
    std::filesystem::path dir_;
    std::mutex mutex_;
    std::size_t counter_ = 0;
};

} // namespace meditools::net
