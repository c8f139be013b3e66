#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace meditools::llm {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);
Role role_from_string(std::string_view text);

struct ChatMessage {
    Role role = Role::User;
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

/// Ordered chat memory. At most one System message, and only in front.
class ChatTranscript {
public:
    ChatTranscript() = default;

    /// Validates the ordering rule; throws Error(InvalidRequest).
    explicit ChatTranscript(std::vector<ChatMessage> messages);

    /// Throws Error(InvalidRequest) for a System message anywhere but first.
    void append(ChatMessage message);
    void append(Role role, std::string content) { append(ChatMessage{role, std::move(content)}); }

    /// Drops the most recent message (used to undo a failed turn).
    void pop_back();

    const std::vector<ChatMessage>& messages() const { return messages_; }
    bool empty() const { return messages_.empty(); }
    std::size_t size() const { return messages_.size(); }
    std::size_t count(Role role) const;
    bool has_system() const { return !messages_.empty() && messages_.front().role == Role::System; }

    bool operator==(const ChatTranscript&) const = default;

private:
    std::vector<ChatMessage> messages_;
};

nlohmann::json to_json(const ChatMessage& message);
nlohmann::json to_json(const ChatTranscript& transcript);
ChatTranscript transcript_from_json(const nlohmann::json& json);

/// Which upstream serves a model.
enum class ProviderRoute { OpenAiDirect, Aggregator, Mock };

std::string_view to_string(ProviderRoute route);
ProviderRoute route_from_string(std::string_view text);

inline constexpr double kDefaultTemperature = 0.7;
inline constexpr int kDefaultMaxTokens = 1024;

struct CompletionRequest {
    std::string model;
    ChatTranscript transcript;
    double temperature = kDefaultTemperature;
    int max_tokens = kDefaultMaxTokens;
    /// Free-form label of the chain issuing the call ("patient", "labs", ...).
    /// Used for logging and by scripted mock providers; never sent upstream.
    std::string purpose;

    /// Throws Error(InvalidRequest) on an empty transcript or out-of-range
    /// sampling parameters.
    void validate() const;
};

enum class AudioFormat { Wav, Mp3 };

std::string_view to_string(AudioFormat format);
AudioFormat audio_format_from_string(std::string_view text);

struct AudioClip {
    std::string bytes;
    AudioFormat format = AudioFormat::Wav;
    double duration_s = 0.0;
};

/// Seconds of audio described by a PCM WAV header, or 0 when it cannot be
/// determined.
double wav_duration(std::string_view bytes);

/// Estimate from the first MPEG audio frame header's bitrate, or 0.
double mp3_duration(std::string_view bytes);

/// True when the payload's magic bytes agree with the declared format.
bool payload_matches_format(std::string_view bytes, AudioFormat format);

} // namespace meditools::llm
