#include "meditools/llm/gateway.hpp"

#include "meditools/error.hpp"

namespace meditools::llm {

LlmGateway::LlmGateway(ModelRegistry registry, ProviderSet providers, GatewayDefaults defaults)
    : registry_(std::move(registry)), providers_(std::move(providers)), defaults_(std::move(defaults))
{
}

ProviderRoute LlmGateway::route_model(const std::string& model) const
{
    return registry_.route(model);
}

CompletionRequest LlmGateway::make_request(std::string model, ChatTranscript transcript, std::string purpose) const
{
    CompletionRequest request;
    request.model = std::move(model);
    request.transcript = std::move(transcript);
    request.temperature = defaults_.temperature;
    request.max_tokens = defaults_.max_tokens;
    request.purpose = std::move(purpose);
    return request;
}

ChatProvider& LlmGateway::provider_for(ProviderRoute route) const
{
    const std::shared_ptr<ChatProvider>* slot = nullptr;
    switch (route) {
    case ProviderRoute::OpenAiDirect: slot = &providers_.openai; break;
    case ProviderRoute::Aggregator: slot = &providers_.aggregator; break;
    case ProviderRoute::Mock: slot = &providers_.mock; break;
    }
    if (!slot || !*slot)
        throw Error(ErrorCode::ProviderUnavailable,
                    "no provider configured for route " + std::string(to_string(route)),
                    {{"route", to_string(route)}});
    return **slot;
}

SpeechProvider& LlmGateway::speech() const
{
    if (!providers_.speech)
        throw Error(ErrorCode::ProviderUnavailable, "no speech provider configured");
    return *providers_.speech;
}

ChatMessage LlmGateway::complete_chat(const CompletionRequest& request) const
{
    request.validate();
    const ProviderRoute route = route_model(request.model);
    ChatMessage reply = provider_for(route).complete(request);
    reply.role = Role::Assistant;
    return reply;
}

std::string LlmGateway::transcribe_audio(const AudioClip& clip) const
{
    if (clip.bytes.empty())
        throw Error(ErrorCode::UnsupportedFormat, "audio payload is empty");
    if (!payload_matches_format(clip.bytes, clip.format))
        throw Error(ErrorCode::UnsupportedFormat,
                    "audio payload is not valid " + std::string(to_string(clip.format)));
    return speech().transcribe(clip);
}

AudioClip LlmGateway::synthesize_speech(const std::string& text, const std::string& voice) const
{
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw Error(ErrorCode::EmptyText, "cannot synthesize speech from empty text");
    AudioClip clip = speech().synthesize(text, voice.empty() ? defaults_.voice : voice, defaults_.speech_format);
    if (clip.bytes.empty())
        throw Error(ErrorCode::ProviderUnavailable, "speech provider returned no audio");
    return clip;
}

} // namespace meditools::llm
