#pragma once

#include "meditools/llm/gateway.hpp"

namespace meditools::llm {

/// One conversational turn: appends the user text, asks the model, appends
/// the reply. If the model call throws, the user message is withdrawn so the
/// memory keeps exactly one Assistant reply per User message.
ChatMessage converse(const LlmGateway& gateway, ChatTranscript& memory, const std::string& model,
                     std::string user_text, const std::string& purpose = {});

} // namespace meditools::llm
