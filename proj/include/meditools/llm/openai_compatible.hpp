#pragma once

#include "meditools/llm/provider.hpp"
#include "meditools/net/http.hpp"

#include <memory>
#include <string>

namespace meditools::llm {

struct OpenAiCompatibleConfig {
    /// Short name used in error detail ("openai", "openrouter").
    std::string name;
    /// Up to and including the version segment, e.g. https://api.openai.com/v1
    std::string base_url;
    std::string api_key;
    /// Sent with every request; OpenRouter uses HTTP-Referer and X-Title.
    net::Headers extra_headers;
    std::string stt_model = "whisper-1";
    std::string tts_model = "tts-1";
};

OpenAiCompatibleConfig openai_config(std::string api_key);
OpenAiCompatibleConfig openrouter_config(std::string api_key);

/// Chat-completions client for OpenAI and OpenAI-compatible aggregators,
/// plus the OpenAI audio endpoints.
class OpenAiCompatibleProvider : public ChatProvider, public SpeechProvider {
public:
    OpenAiCompatibleProvider(std::shared_ptr<net::HttpTransport> transport, OpenAiCompatibleConfig config);

    ChatMessage complete(const CompletionRequest& request) override;
    std::string transcribe(const AudioClip& clip) override;
    AudioClip synthesize(const std::string& text, const std::string& voice, AudioFormat format) override;

    /// Request body sent for a completion (exposed for wire-format tests).
    static nlohmann::json chat_body(const CompletionRequest& request);

private:
    net::HttpResponse post(const std::string& path, std::string body, std::string content_type,
                           const char* operation);

    std::shared_ptr<net::HttpTransport> transport_;
    OpenAiCompatibleConfig config_;
};

} // namespace meditools::llm
