#include "meditools/llm/types.hpp"

#include "meditools/error.hpp"

#include <algorithm>
#include <cstdint>

namespace meditools::llm {

namespace {

std::uint32_t le32(std::string_view b, std::size_t at)
{
    return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
           static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::size_t id3_length(std::string_view b)
{
    if (b.size() < 10 || b.substr(0, 3) != "ID3")
        return 0;
    std::size_t size = 0;
    for (int i = 6; i < 10; ++i)
        size = (size << 7) | (static_cast<unsigned char>(b[i]) & 0x7F);
    return 10 + size;
}

bool mpeg_sync(std::string_view b, std::size_t at)
{
    return at + 1 < b.size() && static_cast<unsigned char>(b[at]) == 0xFF &&
           (static_cast<unsigned char>(b[at + 1]) & 0xE0) == 0xE0;
}

} // namespace

std::string_view to_string(Role role)
{
    switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
    }
    return "user";
}

Role role_from_string(std::string_view text)
{
    if (text == "system")
        return Role::System;
    if (text == "user")
        return Role::User;
    if (text == "assistant")
        return Role::Assistant;
    throw Error(ErrorCode::InvalidRequest, "unknown chat role: " + std::string(text));
}

ChatTranscript::ChatTranscript(std::vector<ChatMessage> messages)
{
    messages_.reserve(messages.size());
    for (auto& m : messages)
        append(std::move(m));
}

void ChatTranscript::append(ChatMessage message)
{
    if (message.role == Role::System && !messages_.empty())
        throw Error(ErrorCode::InvalidRequest, "a system message may only open the transcript");
    messages_.push_back(std::move(message));
}

void ChatTranscript::pop_back()
{
    if (!messages_.empty())
        messages_.pop_back();
}

std::size_t ChatTranscript::count(Role role) const
{
    return static_cast<std::size_t>(
        std::count_if(messages_.begin(), messages_.end(), [&](const auto& m) { return m.role == role; }));
}

nlohmann::json to_json(const ChatMessage& message)
{
    return {{"role", to_string(message.role)}, {"content", message.content}};
}

nlohmann::json to_json(const ChatTranscript& transcript)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& m : transcript.messages())
        out.push_back(to_json(m));
    return out;
}

ChatTranscript transcript_from_json(const nlohmann::json& json)
{
    if (!json.is_array())
        throw Error(ErrorCode::InvalidRequest, "transcript must be an array");
    std::vector<ChatMessage> messages;
    for (const auto& m : json) {
        if (!m.is_object() || !m.contains("role") || !m["role"].is_string() || !m.contains("content") ||
            !m["content"].is_string())
            throw Error(ErrorCode::InvalidRequest, "transcript entries need string role and content");
        messages.push_back({role_from_string(m["role"].get<std::string>()), m["content"].get<std::string>()});
    }
    return ChatTranscript(std::move(messages));
}

std::string_view to_string(ProviderRoute route)
{
    switch (route) {
    case ProviderRoute::OpenAiDirect: return "openai";
    case ProviderRoute::Aggregator: return "openrouter";
    case ProviderRoute::Mock: return "mock";
    }
    return "mock";
}

ProviderRoute route_from_string(std::string_view text)
{
    if (text == "openai")
        return ProviderRoute::OpenAiDirect;
    if (text == "openrouter")
        return ProviderRoute::Aggregator;
    if (text == "mock")
        return ProviderRoute::Mock;
    throw Error(ErrorCode::InvalidRequest, "unknown provider route: " + std::string(text));
}

void CompletionRequest::validate() const
{
    if (model.empty())
        throw Error(ErrorCode::InvalidRequest, "completion request has no model");
    if (transcript.empty())
        throw Error(ErrorCode::InvalidRequest, "completion request has an empty transcript");
    if (!(temperature >= 0.0 && temperature <= 2.0))
        throw Error(ErrorCode::InvalidRequest, "temperature must lie in [0, 2]");
    if (max_tokens <= 0)
        throw Error(ErrorCode::InvalidRequest, "max_tokens must be positive");
}

std::string_view to_string(AudioFormat format)
{
    return format == AudioFormat::Wav ? "wav" : "mp3";
}

AudioFormat audio_format_from_string(std::string_view text)
{
    if (text == "wav" || text == "audio/wav" || text == "audio/x-wav" || text == "audio/wave")
        return AudioFormat::Wav;
    if (text == "mp3" || text == "audio/mpeg" || text == "audio/mp3")
        return AudioFormat::Mp3;
    throw Error(ErrorCode::UnsupportedFormat, "unsupported audio format: " + std::string(text));
}

double wav_duration(std::string_view b)
{
    if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE")
        return 0.0;
    std::uint32_t byte_rate = 0;
    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        const auto id = b.substr(pos, 4);
        const std::uint32_t size = le32(b, pos + 4);
        const std::size_t data = pos + 8;
        if (id == "fmt " && data + 12 <= b.size()) {
            byte_rate = le32(b, data + 8);
        } else if (id == "data") {
            if (byte_rate == 0)
                return 0.0;
            const std::size_t available = b.size() - data;
            const std::size_t length = size == 0xFFFFFFFFu ? available : std::min<std::size_t>(size, available);
            return static_cast<double>(length) / byte_rate;
        }
        pos = data + size + (size & 1);
    }
    return 0.0;
}

double mp3_duration(std::string_view b)
{
    static constexpr int kMpeg1Layer3[16] = {0, 32, 40, 48, 56, 64, 80, 96, 112, 128, 160, 192, 224, 256, 320, 0};
    static constexpr int kMpeg2Layer3[16] = {0, 8, 16, 24, 32, 40, 48, 56, 64, 80, 96, 112, 128, 144, 160, 0};

    std::size_t pos = id3_length(b);
    while (pos < b.size() && !mpeg_sync(b, pos))
        ++pos;
    if (pos + 3 > b.size())
        return 0.0;
    const auto h1 = static_cast<unsigned char>(b[pos + 1]);
    const auto h2 = static_cast<unsigned char>(b[pos + 2]);
    const int version = (h1 >> 3) & 0x3; // 3 = MPEG1
    const int layer = (h1 >> 1) & 0x3;   // 1 = Layer III
    if (layer != 1 || version == 1)
        return 0.0;
    const int kbps = (version == 3 ? kMpeg1Layer3 : kMpeg2Layer3)[h2 >> 4];
    if (kbps == 0)
        return 0.0;
    return static_cast<double>(b.size() - pos) * 8.0 / (kbps * 1000.0);
}

bool payload_matches_format(std::string_view b, AudioFormat format)
{
    if (b.empty())
        return false;
    if (format == AudioFormat::Wav)
        return b.size() >= 12 && b.substr(0, 4) == "RIFF" && b.substr(8, 4) == "WAVE";
    const std::size_t start = id3_length(b);
    return b.substr(0, 3) == "ID3" || mpeg_sync(b, start);
}

} // namespace meditools::llm
