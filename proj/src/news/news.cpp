#include "meditools/news/news.hpp"

#include "meditools/error.hpp"

#include <exception>
#include <fstream>
#include <future>
#include <sstream>

namespace meditools::news {

namespace {

bool blank(const std::string& s)
{
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string trimmed(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

struct TopicOutcome {
    bool searched = false;
    bool search_failed = false;
    std::vector<NewsSummary> summaries;
    std::vector<SkippedItem> skipped;
};

TopicOutcome run_topic(const std::string& topic, int allocated, const NewsParams& params, NewsSearch& search,
                       const Summarizer& summarizer, Date now, int overfetch)
{
    TopicOutcome out;
    if (allocated <= 0)
        return out;
    out.searched = true;

    std::vector<NewsItem> items;
    try {
        items = search.search(build_query(topic, params.keywords), allocated * overfetch, params.recency);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UpstreamUnavailable && e.code() != ErrorCode::MalformedResponse)
            throw;
        out.search_failed = true;
        return out;
    }

    for (const auto& item : filter_recency(items, params.recency, now)) {
        if (static_cast<int>(out.summaries.size()) >= allocated)
            break;
        try {
            out.summaries.push_back(summarizer.summarize(topic, item));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::FetchFailed && e.code() != ErrorCode::ExtractionFailed)
                throw;
            out.skipped.push_back({topic, item.url, e.what()});
        }
    }
    return out;
}

} // namespace

std::string_view to_string(Recency recency)
{
    switch (recency) {
    case Recency::Week1: return "week1";
    case Recency::Week2: return "week2";
    case Recency::Month1: return "month1";
    case Recency::AnyTime: return "any";
    }
    return "any";
}

Recency recency_from_string(std::string_view text)
{
    for (auto r : {Recency::Week1, Recency::Week2, Recency::Month1, Recency::AnyTime})
        if (text == to_string(r))
            return r;
    throw Error(ErrorCode::InvalidRequest, "recency must be one of week1, week2, month1, any",
                {{"field", "recency"}});
}

std::optional<int> window_days(Recency recency)
{
    switch (recency) {
    case Recency::Week1: return 7;
    case Recency::Week2: return 14;
    case Recency::Month1: return 31;
    case Recency::AnyTime: return std::nullopt;
    }
    return std::nullopt;
}

void NewsParams::validate() const
{
    if (topics.empty())
        throw Error(ErrorCode::InvalidRequest, "choose at least one topic", {{"field", "topics"}});
    for (const auto& t : topics)
        if (blank(t))
            throw Error(ErrorCode::InvalidRequest, "topic names must be nonempty", {{"field", "topics"}});
    if (keywords.size() > kMaxKeywords)
        throw Error(ErrorCode::InvalidRequest, "at most 5 keywords are allowed", {{"field", "keywords"}});
    for (const auto& k : keywords)
        if (blank(k))
            throw Error(ErrorCode::InvalidRequest, "keywords must be nonempty", {{"field", "keywords"}});
    if (total < kMinTotal || total > kMaxTotal)
        throw Error(ErrorCode::InvalidRequest, "total must be between 3 and 10", {{"field", "total"}});
}

std::string build_query(const std::string& topic, const std::vector<std::string>& keywords)
{
    std::string raw = topic + " latest advancements updates";
    for (const auto& k : keywords)
        raw += " " + k;
    std::istringstream words(raw);
    std::string word, query;
    while (words >> word)
        query += (query.empty() ? "" : " ") + word;
    return query;
}

std::vector<std::string> load_topic_list(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw Error(ErrorCode::MissingFile, "cannot read topic list " + file.string());
    std::vector<std::string> topics;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        topics.push_back(line.substr(first, line.find_last_not_of(" \t\r") - first + 1));
    }
    return topics;
}

std::vector<int> allocate_counts(int total, std::size_t topic_count)
{
    if (topic_count == 0 || total < 0)
        throw Error(ErrorCode::InvalidRequest, "allocation needs topics and a nonnegative total");
    const int n = static_cast<int>(topic_count);
    std::vector<int> counts(topic_count, total / n);
    const int remainder = total % n;
    for (int i = n - remainder; i < n; ++i)
        ++counts[static_cast<std::size_t>(i)];
    return counts;
}

std::vector<NewsItem> filter_recency(const std::vector<NewsItem>& items, Recency recency, Date now)
{
    const auto window = window_days(recency);
    if (!window)
        return items;
    std::vector<NewsItem> kept;
    for (const auto& item : items)
        if (item.published && (now - *item.published).count() <= *window)
            kept.push_back(item);
    return kept;
}

std::string cap_words(const std::string& text, int cap)
{
    std::istringstream in(text);
    std::string word, out;
    int n = 0;
    while (n < cap && in >> word) {
        out += (out.empty() ? "" : " ") + word;
        ++n;
    }
    return out;
}

Summarizer::Summarizer(std::shared_ptr<net::ContentExtractor> extractor,
                       std::shared_ptr<const llm::LlmGateway> gateway, SummarizerConfig config)
    : extractor_(std::move(extractor)), gateway_(std::move(gateway)), config_(std::move(config))
{
}

NewsSummary Summarizer::summarize(const std::string& topic, const NewsItem& item) const
{
    if (item.url.empty())
        throw Error(ErrorCode::FetchFailed, "news item has no URL");
    const net::PageText page = extractor_->extract(item.url);
    if (blank(page.text))
        throw Error(ErrorCode::ExtractionFailed, "page has no readable text", {{"url", item.url}});

    NewsSummary out;
    out.topic = topic;
    out.url = item.url;
    out.title = trimmed(!blank(page.title) ? page.title : !blank(item.title) ? item.title : item.url);

    const std::string content = page.text.substr(0, config_.max_content_chars);
    const std::string system = config_.prompt.render({{"title", out.title},
                                                      {"url", item.url},
                                                      {"content", content},
                                                      {"word_cap", std::to_string(config_.word_cap)}});
    llm::ChatTranscript chain({{llm::Role::System, system}, {llm::Role::User, "Summarize the article."}});
    const auto reply = gateway_->complete_chat(gateway_->make_request(config_.model, std::move(chain), "news_summary"));
    out.summary = cap_words(reply.content, config_.word_cap);
    if (out.summary.empty())
        throw Error(ErrorCode::ProviderUnavailable, "the summarizer returned an empty summary", {{"url", item.url}});
    return out;
}

nlohmann::json to_json(const NewsResult& result)
{
    nlohmann::json topics = nlohmann::json::array();
    for (const auto& t : result.topics) {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& s : t.summaries)
            items.push_back({{"title", s.title}, {"url", s.url}, {"summary", s.summary}});
        topics.push_back({{"topic", t.topic}, {"summaries", items}});
    }
    nlohmann::json warnings = nlohmann::json::array();
    for (const auto& w : result.warnings)
        warnings.push_back({{"topic", w.topic}, {"allocated", w.allocated}, {"produced", w.produced},
                            {"message", w.message}});
    nlohmann::json skipped = nlohmann::json::array();
    for (const auto& s : result.skipped)
        skipped.push_back({{"topic", s.topic}, {"url", s.url}, {"reason", s.reason}});
    return {{"summaries", topics}, {"warnings", warnings}, {"skipped", skipped}};
}

NewsResult gather_news(const NewsParams& params, NewsSearch& search, const Summarizer& summarizer, Date now,
                       GatherOptions options)
{
    params.validate();
    const auto counts = allocate_counts(params.total, params.topics.size());
    const int overfetch = std::max(1, options.overfetch);

    std::vector<TopicOutcome> outcomes(params.topics.size());
    if (options.parallel && params.topics.size() > 1) {
        std::vector<std::future<TopicOutcome>> futures;
        for (std::size_t i = 0; i < params.topics.size(); ++i)
            futures.push_back(std::async(std::launch::async, run_topic, std::cref(params.topics[i]), counts[i],
                                         std::cref(params), std::ref(search), std::cref(summarizer), now,
                                         overfetch));
        std::exception_ptr first_error;
        for (std::size_t i = 0; i < futures.size(); ++i) {
            try {
                outcomes[i] = futures[i].get();
            } catch (...) {
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
        if (first_error)
            std::rethrow_exception(first_error);
    } else {
        for (std::size_t i = 0; i < params.topics.size(); ++i)
            outcomes[i] = run_topic(params.topics[i], counts[i], params, search, summarizer, now, overfetch);
    }

    std::size_t searched = 0, failed = 0;
    for (const auto& o : outcomes) {
        searched += o.searched;
        failed += o.search_failed;
    }
    if (searched > 0 && failed == searched)
        throw Error(ErrorCode::UpstreamUnavailable, "news search is unavailable for every topic");

    NewsResult result;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        auto& o = outcomes[i];
        const auto& topic = params.topics[i];
        const int produced = static_cast<int>(o.summaries.size());
        result.topics.push_back({topic, std::move(o.summaries)});
        result.skipped.insert(result.skipped.end(), o.skipped.begin(), o.skipped.end());
        if (produced < counts[i]) {
            std::string message = o.search_failed
                ? "News search failed for " + topic + "; no articles could be retrieved."
                : "Not enough " + topic + " articles were available with the selected filters: showing " +
                      std::to_string(produced) + " of " + std::to_string(counts[i]) + ".";
            result.warnings.push_back({topic, counts[i], produced, std::move(message)});
        }
    }
    return result;
}

std::string render_blocks(const NewsResult& result)
{
    std::string out;
    for (const auto& t : result.topics) {
        if (t.summaries.empty())
            continue;
        out += t.topic + " Results:\n\n";
        for (const auto& s : t.summaries)
            out += "TITLE: " + s.title + "\n\nLINK: " + s.url + "\n\nSUMMARY: " + s.summary + "\n\n";
    }
    for (const auto& w : result.warnings)
        out += "WARNING: " + w.message + "\n";
    while (!out.empty() && out.back() == '\n')
        out.pop_back();
    return out;
}

} // namespace meditools::news
