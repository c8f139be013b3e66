#include "meditools/api/errors.hpp"

#include <algorithm>
#include <mutex>

namespace meditools::api {

int http_status(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidRequest:
    case ErrorCode::EmptyText:
        return 400;
    case ErrorCode::UnknownSession:
        return 401;
    case ErrorCode::NotFound:
        return 404;
    case ErrorCode::MethodNotAllowed:
        return 405;
    case ErrorCode::ModelNotSelected:
    case ErrorCode::NoActiveCase:
    case ErrorCode::CaseClosed:
    case ErrorCode::EmptyTranscript:
    case ErrorCode::NotPmcEligible:
        return 409;
    case ErrorCode::ContextTooLong:
        return 413;
    case ErrorCode::UnsupportedFormat:
        return 415;
    case ErrorCode::UnknownModel:
        return 422;
    case ErrorCode::ProviderUnavailable:
    case ErrorCode::AuthFailure:
    case ErrorCode::MalformedLabTable:
    case ErrorCode::UpstreamUnavailable:
    case ErrorCode::MalformedResponse:
    case ErrorCode::MalformedXml:
    case ErrorCode::ExtractionFailed:
    case ErrorCode::FetchFailed:
        return 502;
    case ErrorCode::MissingRoot:
    case ErrorCode::EmptyCatalog:
    case ErrorCode::MailerUnavailable:
        return 503;
    case ErrorCode::MissingKey:
    case ErrorCode::MalformedPath:
    case ErrorCode::MissingFile:
    case ErrorCode::Internal:
        return 500;
    }
    return 500;
}

nlohmann::json error_body(ErrorCode code, const std::string& message, const nlohmann::json& detail)
{
    return {{"error", {{"code", to_string(code)}, {"message", message}, {"detail", detail}}}};
}

SecretScrubber::SecretScrubber(std::vector<std::string> secrets)
{
    for (auto& s : secrets)
        add(std::move(s));
}

void SecretScrubber::add(std::string secret)
{
    if (secret.size() < 4)
        return;
    std::unique_lock lock(mutex_);
    if (std::find(secrets_.begin(), secrets_.end(), secret) != secrets_.end())
        return;
    secrets_.push_back(std::move(secret));
    // Longest first so a secret containing another is masked whole.
    std::sort(secrets_.begin(), secrets_.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
}

std::string SecretScrubber::scrub(std::string text) const
{
    std::shared_lock lock(mutex_);
    for (const auto& secret : secrets_) {
        std::size_t pos = 0;
        while ((pos = text.find(secret, pos)) != std::string::npos) {
            text.replace(pos, secret.size(), kMask);
            pos += std::char_traits<char>::length(kMask);
        }
    }
    return text;
}

bool SecretScrubber::leaks(std::string_view text) const
{
    std::shared_lock lock(mutex_);
    return std::any_of(secrets_.begin(), secrets_.end(),
                       [&](const std::string& s) { return text.find(s) != std::string_view::npos; });
}

std::vector<std::string> SecretScrubber::secrets() const
{
    std::shared_lock lock(mutex_);
    return secrets_;
}

} // namespace meditools::api
