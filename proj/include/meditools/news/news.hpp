#pragma once

#include "meditools/llm/gateway.hpp"
#include "meditools/llm/prompt_template.hpp"
#include "meditools/net/content_extractor.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace meditools::news {

using Date = std::chrono::sys_days;

enum class Recency { Week1, Week2, Month1, AnyTime };

std::string_view to_string(Recency recency);
/// "week1", "week2", "month1", "any". Throws InvalidRequest.
Recency recency_from_string(std::string_view text);
/// Trailing window in days; nullopt for AnyTime. A month is 31 days.
std::optional<int> window_days(Recency recency);

/// One topic per line; blank lines and '#' comments are skipped.
/// Throws MissingFile.
std::vector<std::string> load_topic_list(const std::filesystem::path& file);

struct NewsParams {
    static constexpr std::size_t kMaxKeywords = 5;
    static constexpr int kMinTotal = 3;
    static constexpr int kMaxTotal = 10;

    std::vector<std::string> topics;
    std::vector<std::string> keywords;
    Recency recency = Recency::AnyTime;
    int total = 5;

    /// Throws InvalidRequest naming the offending field.
    void validate() const;
};

struct NewsItem {
    std::string title;
    std::string url;
    std::optional<Date> published;
    std::string snippet;
};

struct NewsSummary {
    std::string topic;
    std::string title;
    std::string url;
    std::string summary;
};

/// "<topic> latest advancements updates <kw1> <kw2> ...", single-spaced.
std::string build_query(const std::string& topic, const std::vector<std::string>& keywords);

/// Equal split; the remainder goes one each to the last topics.
std::vector<int> allocate_counts(int total, std::size_t topic_count);

/// Keeps items published at most window_days(recency) days before `now`
/// (inclusive). Undated items survive only AnyTime. Order is preserved.
std::vector<NewsItem> filter_recency(const std::vector<NewsItem>& items, Recency recency, Date now);

/// News search backend. Throws UpstreamUnavailable or MalformedResponse.
class NewsSearch {
public:
    virtual ~NewsSearch() = default;
    virtual std::vector<NewsItem> search(const std::string& query, int count, Recency recency) = 0;
};

struct SummarizerConfig {
    std::string model; // fixed per deployment
    llm::PromptTemplate prompt{""}; // {title}, {url}, {content}, {word_cap}
    int word_cap = 120;
    std::size_t max_content_chars = 24000;
};

/// Truncates to at most `cap` whitespace-separated words.
std::string cap_words(const std::string& text, int cap);

class Summarizer {
public:
    Summarizer(std::shared_ptr<net::ContentExtractor> extractor, std::shared_ptr<const llm::LlmGateway> gateway,
               SummarizerConfig config);

    /// Extracts the page, then runs the summary chain. Throws FetchFailed or
    /// ExtractionFailed for the page; gateway errors pass through.
    NewsSummary summarize(const std::string& topic, const NewsItem& item) const;

    const SummarizerConfig& config() const { return config_; }

private:
    std::shared_ptr<net::ContentExtractor> extractor_;
    std::shared_ptr<const llm::LlmGateway> gateway_;
    SummarizerConfig config_;
};

/// A topic that came up short of its allocation.
struct Warning {
    std::string topic;
    int allocated = 0;
    int produced = 0;
    std::string message;
};

/// An article dropped because its page could not be read.
struct SkippedItem {
    std::string topic;
    std::string url;
    std::string reason;
};

struct TopicResults {
    std::string topic;
    std::vector<NewsSummary> summaries;
};

struct NewsResult {
    std::vector<TopicResults> topics; // selection order
    std::vector<Warning> warnings;    // one per short topic, after all results
    std::vector<SkippedItem> skipped;
};

nlohmann::json to_json(const NewsResult& result);

struct GatherOptions {
    int overfetch = 3;
    bool parallel = true;
};

/// Runs each topic's search → filter → summarize pipeline and joins them in
/// topic order. Throws UpstreamUnavailable only if every search failed.
NewsResult gather_news(const NewsParams& params, NewsSearch& search, const Summarizer& summarizer, Date now,
                       GatherOptions options = {});

/// Plain-text rendering: "<Topic> Results:" then TITLE/LINK/SUMMARY blocks,
/// warnings last.
std::string render_blocks(const NewsResult& result);

} // namespace meditools::news
