#pragma once

#include "meditools/error.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

namespace meditools::api {

int http_status(ErrorCode code) noexcept;

/// {"error": {"code", "message", "detail"}}
nlohmann::json error_body(ErrorCode code, const std::string& message, const nlohmann::json& detail = nullptr);

/// Replaces every registered secret with "[redacted]". Secrets shorter than
/// four characters are ignored so that scrubbing cannot mangle ordinary text.
class SecretScrubber {
public:
    static constexpr const char* kMask = "[redacted]";

    SecretScrubber() = default;
    explicit SecretScrubber(std::vector<std::string> secrets);

    void add(std::string secret);
    std::string scrub(std::string text) const;
    bool leaks(std::string_view text) const;
    std::vector<std::string> secrets() const;

private:
    mutable std::shared_mutex mutex_;
    std::vector<std::string> secrets_;
};

} // namespace meditools::api
