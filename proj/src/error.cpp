#include "meditools/error.hpp"

namespace meditools {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidRequest: return "invalid_request";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::MethodNotAllowed: return "method_not_allowed";
    case ErrorCode::UnknownModel: return "unknown_model";
    case ErrorCode::MissingKey: return "missing_key";
    case ErrorCode::ProviderUnavailable: return "provider_unavailable";
    case ErrorCode::AuthFailure: return "auth_failure";
    case ErrorCode::ContextTooLong: return "context_too_long";
    case ErrorCode::UnsupportedFormat: return "unsupported_format";
    case ErrorCode::EmptyText: return "empty_text";
    case ErrorCode::UnknownSession: return "unknown_session";
    case ErrorCode::MissingRoot: return "missing_root";
    case ErrorCode::EmptyCatalog: return "empty_catalog";
    case ErrorCode::MalformedPath: return "malformed_path";
    case ErrorCode::ModelNotSelected: return "model_not_selected";
    case ErrorCode::NoActiveCase: return "no_active_case";
    case ErrorCode::CaseClosed: return "case_closed";
    case ErrorCode::EmptyTranscript: return "empty_transcript";
    case ErrorCode::MissingFile: return "missing_file";
    case ErrorCode::MalformedLabTable: return "malformed_lab_table";
    case ErrorCode::UpstreamUnavailable: return "upstream_unavailable";
    case ErrorCode::MalformedResponse: return "malformed_response";
    case ErrorCode::MalformedXml: return "malformed_xml";
    case ErrorCode::ExtractionFailed: return "extraction_failed";
    case ErrorCode::FetchFailed: return "fetch_failed";
    case ErrorCode::NotPmcEligible: return "not_pmc_eligible";
    case ErrorCode::MailerUnavailable: return "mailer_unavailable";
    case ErrorCode::Internal: return "internal";
    }
    return "internal";
}

} // namespace meditools
