#include "meditools/llm/openai_compatible.hpp"

#include "meditools/error.hpp"

#include <random>

namespace meditools::llm {

namespace {

bool mentions_context_limit(const std::string& code, const std::string& message)
{
    return code == "context_length_exceeded" || message.find("context length") != std::string::npos ||
           message.find("context window") != std::string::npos ||
           message.find("maximum context") != std::string::npos || message.find("too many tokens") != std::string::npos;
}

// Maps an upstream HTTP failure onto the gateway's error taxonomy.
[[noreturn]] void raise_for_status(const std::string& provider, const net::HttpResponse& response)
{
    std::string code;
    std::string message;
    try {
        const auto body = nlohmann::json::parse(response.body);
        if (body.contains("error")) {
            const auto& err = body["error"];
            if (err.is_object()) {
                if (err.contains("message") && err["message"].is_string())
                    message = err["message"].get<std::string>();
                if (err.contains("code") && err["code"].is_string())
                    code = err["code"].get<std::string>();
            } else if (err.is_string()) {
                message = err.get<std::string>();
            }
        }
    } catch (const nlohmann::json::exception&) {
    }
    if (message.empty())
        message = "HTTP " + std::to_string(response.status);

    nlohmann::json detail = {{"provider", provider}, {"status", response.status}, {"upstream_message", message}};
    if (response.status == 401 || response.status == 403)
        throw Error(ErrorCode::AuthFailure, provider + " rejected the credentials", std::move(detail));
    if ((response.status == 400 || response.status == 413) && mentions_context_limit(code, message))
        throw Error(ErrorCode::ContextTooLong, provider + ": request exceeds the model's context window",
                    std::move(detail));
    throw Error(ErrorCode::ProviderUnavailable, provider + " request failed (HTTP " +
                                                    std::to_string(response.status) + ")",
                std::move(detail));
}

std::string multipart_boundary()
{
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    return "----meditools" + std::to_string(rng());
}

} // namespace

OpenAiCompatibleConfig openai_config(std::string api_key)
{
    OpenAiCompatibleConfig config;
    config.name = "openai";
    config.base_url = "https://api.openai.com/v1";
    config.api_key = std::move(api_key);
    return config;
}

OpenAiCompatibleConfig openrouter_config(std::string api_key)
{
    OpenAiCompatibleConfig config;
    config.name = "openrouter";
    config.base_url = "https://openrouter.ai/api/v1";
    config.api_key = std::move(api_key);
    config.extra_headers.emplace("X-Title", "MediTools");
    return config;
}

OpenAiCompatibleProvider::OpenAiCompatibleProvider(std::shared_ptr<net::HttpTransport> transport,
                                                   OpenAiCompatibleConfig config)
    : transport_(std::move(transport)), config_(std::move(config))
{
}

nlohmann::json OpenAiCompatibleProvider::chat_body(const CompletionRequest& request)
{
    return {{"model", request.model},
            {"messages", to_json(request.transcript)},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens},
            {"stream", false}};
}

net::HttpResponse OpenAiCompatibleProvider::post(const std::string& path, std::string body,
                                                 std::string content_type, const char* operation)
{
    if (config_.api_key.empty())
        throw Error(ErrorCode::AuthFailure, "no API key configured for " + config_.name,
                    {{"provider", config_.name}});

    net::HttpRequest request;
    request.method = "POST";
    request.url = config_.base_url + path;
    request.body = std::move(body);
    request.content_type = std::move(content_type);
    request.headers.emplace("Authorization", "Bearer " + config_.api_key);
    for (const auto& header : config_.extra_headers)
        request.headers.insert(header);

    net::HttpResponse response;
    try {
        response = transport_->send(request);
    } catch (const net::TransportError& e) {
        throw Error(ErrorCode::ProviderUnavailable, config_.name + " unreachable during " + operation,
                    {{"provider", config_.name}, {"transport", e.what()}});
    }
    if (!response.ok())
        raise_for_status(config_.name, response);
    return response;
}

ChatMessage OpenAiCompatibleProvider::complete(const CompletionRequest& request)
{
    const auto response = post("/chat/completions", chat_body(request).dump(), "application/json", "chat");
    try {
        const auto body = nlohmann::json::parse(response.body);
        const auto& choice = body.at("choices").at(0);
        const auto& content = choice.at("message").at("content");
        if (!content.is_string())
            throw Error(ErrorCode::ProviderUnavailable, config_.name + " returned a completion without text",
                        {{"provider", config_.name}, {"finish_reason", choice.value("finish_reason", "")}});
        return {Role::Assistant, content.get<std::string>()};
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ProviderUnavailable, config_.name + " returned an unreadable completion",
                    {{"provider", config_.name}, {"parse_error", e.what()}});
    }
}

std::string OpenAiCompatibleProvider::transcribe(const AudioClip& clip)
{
    const std::string boundary = multipart_boundary();
    const std::string ext(to_string(clip.format));
    const std::string mime = clip.format == AudioFormat::Wav ? "audio/wav" : "audio/mpeg";

    std::string body;
    body += "--" + boundary + "\r\n";
    body += "Content-Disposition: form-data; name=\"model\"\r\n\r\n" + config_.stt_model + "\r\n";
    body += "--" + boundary + "\r\n";
    body += "Content-Disposition: form-data; name=\"response_format\"\r\n\r\njson\r\n";
    body += "--" + boundary + "\r\n";
    body += "Content-Disposition: form-data; name=\"file\"; filename=\"audio." + ext + "\"\r\n";
    body += "Content-Type: " + mime + "\r\n\r\n";
    body += clip.bytes;
    body += "\r\n--" + boundary + "--\r\n";

    const auto response = post("/audio/transcriptions", std::move(body),
                               "multipart/form-data; boundary=" + boundary, "transcription");
    try {
        return nlohmann::json::parse(response.body).at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ProviderUnavailable, config_.name + " returned an unreadable transcription",
                    {{"provider", config_.name}, {"parse_error", e.what()}});
    }
}

AudioClip OpenAiCompatibleProvider::synthesize(const std::string& text, const std::string& voice,
                                               AudioFormat format)
{
    const nlohmann::json body = {{"model", config_.tts_model},
                                 {"input", text},
                                 {"voice", voice},
                                 {"response_format", std::string(to_string(format))}};
    auto response = post("/audio/speech", body.dump(), "application/json", "speech synthesis");
    if (response.body.empty())
        throw Error(ErrorCode::ProviderUnavailable, config_.name + " returned empty audio",
                    {{"provider", config_.name}});
    AudioClip clip;
    clip.format = format;
    clip.bytes = std::move(response.body);
    clip.duration_s = format == AudioFormat::Wav ? wav_duration(clip.bytes) : mp3_duration(clip.bytes);
    return clip;
}

} // namespace meditools::llm
