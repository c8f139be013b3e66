#pragma once

#include "meditools/llm/provider.hpp"
#include "meditools/llm/registry.hpp"

#include <memory>
#include <string>

namespace meditools::llm {

/// Backends per route. A null slot makes that route report
/// ProviderUnavailable.
struct ProviderSet {
    std::shared_ptr<ChatProvider> openai;
    std::shared_ptr<ChatProvider> aggregator;
    std::shared_ptr<ChatProvider> mock;
    std::shared_ptr<SpeechProvider> speech;
};

struct GatewayDefaults {
    double temperature = kDefaultTemperature;
    int max_tokens = kDefaultMaxTokens;
    std::string voice = "alloy";
    AudioFormat speech_format = AudioFormat::Wav;
};

/// Single entry point for chat, transcription and speech synthesis.
/// Immutable after construction and safe to share between threads.
class LlmGateway {
public:
    LlmGateway(ModelRegistry registry, ProviderSet providers, GatewayDefaults defaults = {});

    const ModelRegistry& registry() const { return registry_; }
    const GatewayDefaults& defaults() const { return defaults_; }

    /// Throws Error(UnknownModel).
    ProviderRoute route_model(const std::string& model) const;

    /// A request carrying the configured sampling defaults.
    CompletionRequest make_request(std::string model, ChatTranscript transcript, std::string purpose = {}) const;

    /// Returns the Assistant reply; the caller decides whether to remember it.
    ChatMessage complete_chat(const CompletionRequest& request) const;

    /// Throws UnsupportedFormat for empty payloads or payloads whose magic
    /// bytes contradict the declared format.
    std::string transcribe_audio(const AudioClip& clip) const;

    /// Throws EmptyText for blank input. An empty voice selects the default.
    AudioClip synthesize_speech(const std::string& text, const std::string& voice = {}) const;

private:
    ChatProvider& provider_for(ProviderRoute route) const;
    SpeechProvider& speech() const;

    ModelRegistry registry_;
    ProviderSet providers_;
    GatewayDefaults defaults_;
};

} // namespace meditools::llm
