#pragma once

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace meditools {

/// Every failure the service can report. Each code has exactly one wire name
/// and one HTTP status (see api/errors.cpp).
enum class ErrorCode {
    // request shape
    InvalidRequest,
    NotFound,
    MethodNotAllowed,
    // llm_gateway
    UnknownModel,
    MissingKey,
    ProviderUnavailable,
    AuthFailure,
    ContextTooLong,
    UnsupportedFormat,
    EmptyText,
    // session_store
    UnknownSession,
    // image_catalog
    MissingRoot,
    EmptyCatalog,
    MalformedPath,
    // derm_sim
    ModelNotSelected,
    NoActiveCase,
    CaseClosed,
    EmptyTranscript,
    MissingFile,
    MalformedLabTable,
    // pubmed / news
    UpstreamUnavailable,
    MalformedResponse,
    MalformedXml,
    ExtractionFailed,
    FetchFailed,
    NotPmcEligible,
    // api_service
    MailerUnavailable,
    Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, nlohmann::json detail = nullptr)
        : std::runtime_error(message), code_(code), detail_(std::move(detail))
    {
    }

    ErrorCode code() const noexcept { return code_; }
    const nlohmann::json& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    nlohmann::json detail_;
};

} // namespace meditools
