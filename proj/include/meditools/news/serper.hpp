#pragma once

#include "meditools/net/http.hpp"
#include "meditools/news/news.hpp"

#include <functional>

namespace meditools::news {

/// Parses the date strings news search returns: "3 days ago", "5 hours ago",
/// "1 week ago", "Jun 5, 2024", "5 Jun 2024", "2024-06-05". nullopt otherwise.
std::optional<Date> parse_news_date(std::string_view text, Date today);

/// Serper-style JSON news search (POST {q, num[, tbs]}, X-API-KEY header).
class SerperSearch : public NewsSearch {
public:
    static constexpr const char* kDefaultEndpoint = "https://google.serper.dev/news";
    using Today = std::function<Date()>;

    SerperSearch(std::shared_ptr<net::HttpTransport> transport, std::string api_key,
                 std::string endpoint = kDefaultEndpoint, Today today = nullptr);

    std::vector<NewsItem> search(const std::string& query, int count, Recency recency) override;

private:
    std::shared_ptr<net::HttpTransport> transport_;
    std::string api_key_;
    std::string endpoint_;
    Today today_;
};

} // namespace meditools::news
