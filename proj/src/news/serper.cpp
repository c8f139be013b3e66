#include "meditools/news/serper.hpp"

#include "meditools/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace meditools::news {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::optional<unsigned> month_index(const std::string& word)
{
    static constexpr std::array<std::string_view, 12> kMonths{"jan", "feb", "mar", "apr", "may", "jun",
                                                              "jul", "aug", "sep", "oct", "nov", "dec"};
    if (word.size() < 3)
        return std::nullopt;
    for (unsigned i = 0; i < kMonths.size(); ++i)
        if (word.compare(0, 3, kMonths[i]) == 0)
            return i + 1;
    return std::nullopt;
}

std::optional<Date> make_date(int y, unsigned m, unsigned d)
{
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!ymd.ok())
        return std::nullopt;
    return Date{ymd};
}

bool is_number(const std::string& s)
{
    return !s.empty() && s.size() <= 4 &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

std::optional<Date> parse_news_date(std::string_view text, Date today)
{
    std::string cleaned;
    for (char c : lower(text))
        cleaned.push_back(c == ',' || c == '.' ? ' ' : c);
    std::istringstream in(cleaned);
    std::vector<std::string> words;
    for (std::string w; in >> w;)
        words.push_back(w);
    if (words.empty())
        return std::nullopt;

    // "N unit(s) ago"
    if (words.size() == 3 && words[2] == "ago" && is_number(words[0])) {
        const int n = std::stoi(words[0]);
        std::string unit = words[1];
        if (unit.back() == 's')
            unit.pop_back();
        if (unit == "second" || unit == "minute" || unit == "min" || unit == "hour")
            return today;
        if (unit == "day")
            return today - std::chrono::days{n};
        if (unit == "week")
            return today - std::chrono::days{7 * n};
        if (unit == "month")
            return today - std::chrono::days{30 * n};
        if (unit == "year")
            return today - std::chrono::days{365 * n};
        return std::nullopt;
    }
    if (words.size() == 1 && (words[0] == "today" || words[0] == "yesterday"))
        return words[0] == "today" ? today : today - std::chrono::days{1};

    // 2024-06-05
    if (words.size() == 1 && words[0].size() >= 10 && words[0][4] == '-' && words[0][7] == '-') {
        const auto& w = words[0];
        if (is_number(w.substr(0, 4)) && is_number(w.substr(5, 2)) && is_number(w.substr(8, 2)))
            return make_date(std::stoi(w.substr(0, 4)), static_cast<unsigned>(std::stoi(w.substr(5, 2))),
                             static_cast<unsigned>(std::stoi(w.substr(8, 2))));
        return std::nullopt;
    }
    if (words.size() == 3) {
        // Jun 5 2024
        if (auto m = month_index(words[0]); m && is_number(words[1]) && is_number(words[2]) && words[2].size() == 4)
            return make_date(std::stoi(words[2]), *m, static_cast<unsigned>(std::stoi(words[1])));
        // 5 Jun 2024
        if (auto m = month_index(words[1]); m && is_number(words[0]) && is_number(words[2]) && words[2].size() == 4)
            return make_date(std::stoi(words[2]), *m, static_cast<unsigned>(std::stoi(words[0])));
    }
    return std::nullopt;
}

SerperSearch::SerperSearch(std::shared_ptr<net::HttpTransport> transport, std::string api_key, std::string endpoint,
                           Today today)
    : transport_(std::move(transport)), api_key_(std::move(api_key)), endpoint_(std::move(endpoint)),
      today_(std::move(today))
{
    if (!today_)
        today_ = [] { return std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now()); };
}

std::vector<NewsItem> SerperSearch::search(const std::string& query, int count, Recency recency)
{
    if (api_key_.empty())
        throw Error(ErrorCode::UpstreamUnavailable, "news search key is not configured");

    nlohmann::json body{{"q", query}, {"num", count}};
    // A coarse upstream window; filter_recency applies the exact one.
    if (recency == Recency::Week1)
        body["tbs"] = "qdr:w";
    else if (recency != Recency::AnyTime)
        body["tbs"] = "qdr:m";

    net::HttpRequest request;
    request.method = "POST";
    request.url = endpoint_;
    request.content_type = "application/json";
    request.body = body.dump();
    request.headers.emplace("X-API-KEY", api_key_);

    net::HttpResponse response;
    try {
        response = transport_->send(request);
    } catch (const net::TransportError&) {
        throw Error(ErrorCode::UpstreamUnavailable, "news search is unreachable");
    }
    if (!response.ok())
        throw Error(ErrorCode::UpstreamUnavailable, "news search returned HTTP " + std::to_string(response.status),
                    {{"status", response.status}});

    const auto doc = nlohmann::json::parse(response.body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error(ErrorCode::MalformedResponse, "news search response is not JSON");
    const auto news = doc.find("news");
    if (news == doc.end())
        return {};
    if (!news->is_array())
        throw Error(ErrorCode::MalformedResponse, "news search response has a non-array \"news\" field");

    const Date today = today_();
    std::vector<NewsItem> items;
    for (const auto& entry : *news) {
        if (!entry.is_object())
            continue;
        NewsItem item;
        item.url = entry.value("link", "");
        if (item.url.empty())
            continue;
        item.title = entry.value("title", "");
        item.snippet = entry.value("snippet", "");
        if (const auto date = entry.find("date"); date != entry.end() && date->is_string())
            item.published = parse_news_date(date->get<std::string>(), today);
        items.push_back(std::move(item));
    }
    return items;
}

} // namespace meditools::news
