#include "meditools/llm/chat_memory.hpp"

namespace meditools::llm {

ChatMessage converse(const LlmGateway& gateway, ChatTranscript& memory, const std::string& model,
                     std::string user_text, const std::string& purpose)
{
    memory.append(Role::User, std::move(user_text));
    try {
        ChatMessage reply = gateway.complete_chat(gateway.make_request(model, memory, purpose));
        memory.append(reply);
        return reply;
    } catch (...) {
        memory.pop_back();
        throw;
    }
}

} // namespace meditools::llm
