#include "meditools/pubmed/paper_chat.hpp"

#include "meditools/error.hpp"

namespace meditools::pubmed {

ChatSelection select_for_chat(const ArticleMetadata& article, const std::string& model,
                              const llm::LlmGateway& gateway)
{
    if (!article.pmcid)
        throw Error(ErrorCode::NotPmcEligible, "this article has no full text in PubMed Central",
                    {{"pmid", article.pmid}});
    gateway.route_model(model);
    return {article.pmid, *article.pmcid, model, pmc_full_text_url(*article.pmcid), pmc_pdf_url(*article.pmcid)};
}

llm::CompletionRequest build_paper_chat(const llm::LlmGateway& gateway, const std::string& model,
                                        const FullText& fulltext, const std::string& question,
                                        const llm::ChatTranscript& history,
                                        const llm::PromptTemplate& system_prompt)
{
    if (model.empty())
        throw Error(ErrorCode::ModelNotSelected, "choose a model before chatting with the paper");
    if (question.find_first_not_of(" \t\r\n") == std::string::npos)
        throw Error(ErrorCode::InvalidRequest, "question is empty");
    if (history.has_system())
        throw Error(ErrorCode::InvalidRequest, "paper chat history must not carry a System message");

    std::vector<llm::ChatMessage> messages{
        {llm::Role::System, system_prompt.render({{"title", fulltext.title}, {"full_text", fulltext.text}})}};
    messages.insert(messages.end(), history.messages().begin(), history.messages().end());
    messages.push_back({llm::Role::User, question});
    return gateway.make_request(model, llm::ChatTranscript(std::move(messages)), "paper_chat");
}

llm::ChatMessage ask_paper(const llm::LlmGateway& gateway, const llm::CompletionRequest& request,
                           const FullText& fulltext)
{
    try {
        return gateway.complete_chat(request);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ContextTooLong)
            throw;
        auto detail = e.detail().is_object() ? e.detail() : nlohmann::json::object();
        detail["text_length"] = fulltext.text.size();
        throw Error(ErrorCode::ContextTooLong,
                    "the paper (" + std::to_string(fulltext.text.size()) +
                        " characters) does not fit the model's context window",
                    detail);
    }
}

} // namespace meditools::pubmed
