#pragma once

#include "meditools/llm/gateway.hpp"
#include "meditools/llm/prompt_template.hpp"
#include "meditools/pubmed/types.hpp"

namespace meditools::pubmed {

/// What the UI needs once a paper is picked for chat.
struct ChatSelection {
    std::string pmid;
    std::string pmcid;
    std::string model;
    std::string pmc_url;
    std::string pdf_url;
};

/// Throws NotPmcEligible when the article has no PMCID and UnknownModel for
/// an unregistered model.
ChatSelection select_for_chat(const ArticleMetadata& article, const std::string& model,
                              const llm::LlmGateway& gateway);

/// [System(template with {title} and {full_text}), history..., User(question)].
/// `history` holds earlier User/Assistant turns only.
llm::CompletionRequest build_paper_chat(const llm::LlmGateway& gateway, const std::string& model,
                                        const FullText& fulltext, const std::string& question,
                                        const llm::ChatTranscript& history,
                                        const llm::PromptTemplate& system_prompt);

/// Sends the request; ContextTooLong is rethrown with the paper's length in
/// the detail ("text_length", characters).
llm::ChatMessage ask_paper(const llm::LlmGateway& gateway, const llm::CompletionRequest& request,
                           const FullText& fulltext);

} // namespace meditools::pubmed
