#pragma once

#include "meditools/error.hpp"
#include "meditools/llm/provider.hpp"

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>

namespace meditools::llm {

/// Deterministic in-process provider for tests and offline demos.
///
/// By default it echoes the content of the last User message. A responder
/// can replace that behaviour; it must be a pure function of the request for
/// the determinism guarantee to hold.
class MockProvider : public ChatProvider, public SpeechProvider {
public:
    using Responder = std::function<std::string(const CompletionRequest&)>;

    static constexpr char kSentinelByte = '\x01';

    MockProvider();
    explicit MockProvider(Responder responder);

    static std::string echo(const CompletionRequest& request);
    /// Canned, purpose-aware replies (patient, labs, report_*, paper_chat,
    /// news_summary) for offline demos.
    static std::string scripted(const CompletionRequest& request);

    void set_responder(Responder responder);
    /// Requests whose transcript holds more characters than this fail with
    /// ContextTooLong.
    void set_context_limit(std::optional<std::size_t> chars);
    /// Every subsequent call fails with this code until cleared.
    void set_failure(std::optional<ErrorCode> code);
    void set_transcript(std::string text);

    ChatMessage complete(const CompletionRequest& request) override;
    std::string transcribe(const AudioClip& clip) override;
    AudioClip synthesize(const std::string& text, const std::string& voice, AudioFormat format) override;

    std::size_t chat_calls() const { return chat_calls_.load(); }
    std::size_t speech_calls() const { return speech_calls_.load(); }

private:
    void maybe_fail(const char* operation) const;

    mutable std::mutex mutex_;
    Responder responder_;
    std::optional<std::size_t> context_limit_;
    std::optional<ErrorCode> failure_;
    std::string transcript_ = "mock transcription";
    std::atomic<std::size_t> chat_calls_{0};
    std::atomic<std::size_t> speech_calls_{0};
};

} // namespace meditools::llm
