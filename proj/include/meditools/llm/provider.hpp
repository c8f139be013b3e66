#pragma once

#include "meditools/llm/types.hpp"

#include <string>

namespace meditools::llm {

/// A chat-completion backend. Returns the final Assistant message; never
/// appends to the request's transcript.
///
/// Failures are reported as Error with ProviderUnavailable, AuthFailure or
/// ContextTooLong, carrying provider detail.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual ChatMessage complete(const CompletionRequest& request) = 0;
};

/// Speech-to-text and text-to-speech backend.
class SpeechProvider {
public:
    virtual ~SpeechProvider() = default;
    virtual std::string transcribe(const AudioClip& clip) = 0;
    virtual AudioClip synthesize(const std::string& text, const std::string& voice, AudioFormat format) = 0;
};

} // namespace meditools::llm
