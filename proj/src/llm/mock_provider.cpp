#include "meditools/llm/mock_provider.hpp"

namespace meditools::llm {

MockProvider::MockProvider() : responder_(&MockProvider::echo) {}

MockProvider::MockProvider(Responder responder) : responder_(std::move(responder)) {}

std::string MockProvider::echo(const CompletionRequest& request)
{
    const auto& messages = request.transcript.messages();
    for (auto it = messages.rbegin(); it != messages.rend(); ++it)
        if (it->role == Role::User)
            return it->content;
    return {};
}

std::string MockProvider::scripted(const CompletionRequest& request)
{
    const std::string& purpose = request.purpose;
    if (purpose == "labs")
        return "Test | Result | Reference Range\n"
               "Complete Blood Count\n"
               "WBC | 8.3 x10^3/uL | 4.5-11.0 x10^3/uL\n"
               "Hemoglobin | 13.9 g/dL | 13.5-17.5 g/dL\n"
               "Platelets | 251 x10^3/uL | 150-400 x10^3/uL\n"
               "Inflammatory Markers\n"
               "CRP | 4.1 mg/L | 0.0-5.0 mg/L";
    if (purpose == "report_condition")
        return "Overview of the condition: typical presentation, common triggers, how it is diagnosed, "
               "and first-line treatment options.";
    if (purpose == "report_feedback")
        return "What went well: you asked open questions and confirmed the timeline.\n"
               "What could be improved: ask about medication history and family history earlier.";
    if (purpose == "news_summary")
        return "The article describes a recent clinical advance, the team behind it, and what it could mean "
               "for patient care.";
    if (purpose == "paper_chat")
        return "According to the paper: " + echo(request);
    return "It started a couple of weeks ago and it has been bothering me. You asked: " + echo(request);
}

void MockProvider::set_responder(Responder responder)
{
    std::lock_guard lock(mutex_);
    responder_ = std::move(responder);
}

void MockProvider::set_context_limit(std::optional<std::size_t> chars)
{
    std::lock_guard lock(mutex_);
    context_limit_ = chars;
}

void MockProvider::set_failure(std::optional<ErrorCode> code)
{
    std::lock_guard lock(mutex_);
    failure_ = code;
}

void MockProvider::set_transcript(std::string text)
{
    std::lock_guard lock(mutex_);
    transcript_ = std::move(text);
}

void MockProvider::maybe_fail(const char* operation) const
{
    if (failure_)
        throw Error(*failure_, std::string("mock provider: simulated failure in ") + operation,
                    {{"provider", "mock"}});
}

ChatMessage MockProvider::complete(const CompletionRequest& request)
{
    ++chat_calls_;
    Responder responder;
    {
        std::lock_guard lock(mutex_);
        maybe_fail("chat");
        if (context_limit_) {
            std::size_t chars = 0;
            for (const auto& m : request.transcript.messages())
                chars += m.content.size();
            if (chars > *context_limit_)
                throw Error(ErrorCode::ContextTooLong, "mock provider: context limit exceeded",
                            {{"provider", "mock"}, {"context_chars", chars}, {"limit_chars", *context_limit_}});
        }
        responder = responder_;
    }
    return {Role::Assistant, responder(request)};
}

std::string MockProvider::transcribe(const AudioClip&)
{
    ++speech_calls_;
    std::lock_guard lock(mutex_);
    maybe_fail("transcription");
    return transcript_;
}

AudioClip MockProvider::synthesize(const std::string&, const std::string&, AudioFormat format)
{
    ++speech_calls_;
    std::lock_guard lock(mutex_);
    maybe_fail("speech synthesis");
    return {std::string(1, kSentinelByte), format, 0.0};
}

} // namespace meditools::llm
