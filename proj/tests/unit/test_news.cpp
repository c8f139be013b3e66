#include "support.hpp"

#include "meditools/net/replay_transport.hpp"
#include "meditools/news/news.hpp"
#include "meditools/news/serper.hpp"

#include <doctest.h>

#include <algorithm>
#include <iterator>
#include <sstream>
#include <numeric>

using namespace meditools;
using namespace meditools::news;
using namespace std::chrono;
using support::error_code_of;

namespace {

const Date kToday = sys_days{year{2024} / July / 15};

struct Rig {
    std::shared_ptr<net::ReplayTransport> transport = net::ReplayTransport::from_directory(support::fixture_dir() / "news");
    std::shared_ptr<llm::MockProvider> mock = std::make_shared<llm::MockProvider>(support::scripted_responder());
    std::shared_ptr<llm::LlmGateway> gateway = std::make_shared<llm::LlmGateway>(
        llm::ModelRegistry({{"gpt-4o", "GPT-4o", llm::ProviderRoute::OpenAiDirect}}),
        llm::ProviderSet{mock, nullptr, nullptr, mock});
    SerperSearch search{transport, "serper-test-key", SerperSearch::kDefaultEndpoint, [] { return kToday; }};
    Summarizer summarizer{std::make_shared<net::DirectFetchExtractor>(transport), gateway, config()};

    static SummarizerConfig config()
    {
        SummarizerConfig c;
        c.model = "gpt-4o";
        c.prompt = llm::PromptTemplate::load(support::data_dir() / "prompts" / "news_summary.txt");
        return c;
    }

    NewsResult run(std::vector<std::string> topics, int total, Recency recency, bool parallel = true)
    {
        NewsParams p;
        p.topics = std::move(topics);
        p.total = total;
        p.recency = recency;
        return gather_news(p, search, summarizer, kToday, {3, parallel});
    }
};

int produced(const NewsResult& r, const std::string& topic)
{
    for (const auto& t : r.topics)
        if (t.topic == topic)
            return static_cast<int>(t.summaries.size());
    return -1;
}

// produced < allocated  <=>  a warning names the topic
void check_warning_completeness(const NewsResult& r, const std::vector<std::string>& topics, int total)
{
    const auto counts = allocate_counts(total, topics.size());
    for (std::size_t i = 0; i < topics.size(); ++i) {
        const bool short_topic = produced(r, topics[i]) < counts[i];
        const bool warned = std::any_of(r.warnings.begin(), r.warnings.end(), [&](const Warning& w) {
            return w.topic == topics[i] && w.message.find(topics[i]) != std::string::npos;
        });
        CHECK_MESSAGE(short_topic == warned, topics[i]);
        CHECK(produced(r, topics[i]) <= counts[i]);
    }
}

} // namespace

TEST_SUITE("news")
{
    TEST_CASE("allocation examples")
    {
        CHECK(allocate_counts(7, 3) == std::vector<int>{2, 2, 3});
        CHECK(allocate_counts(3, 1) == std::vector<int>{3});
        CHECK(allocate_counts(10, 4) == std::vector<int>{2, 2, 3, 3});
        CHECK(allocate_counts(3, 5) == std::vector<int>{0, 0, 1, 1, 1});
        CHECK(error_code_of([] { allocate_counts(5, 0); }) == ErrorCode::InvalidRequest);
    }

    TEST_CASE("allocation property")
    {
        for (int total = NewsParams::kMinTotal; total <= NewsParams::kMaxTotal; ++total)
            for (std::size_t n = 1; n <= NewsParams::kMaxKeywords; ++n) {
                const auto c = allocate_counts(total, n);
                CHECK(c.size() == n);
                CHECK(std::accumulate(c.begin(), c.end(), 0) == total);
                const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
                CHECK(*hi - *lo <= 1);
                CHECK(std::is_sorted(c.begin(), c.end()));
            }
    }

    TEST_CASE("query building")
    {
        CHECK(build_query("Dermatology", {}) == "Dermatology latest advancements updates");
        CHECK(build_query("  Cardiology ", {"heart  failure", " AI "}) ==
              "Cardiology latest advancements updates heart failure AI");
    }

    TEST_CASE("parameter validation")
    {
        NewsParams p;
        CHECK(error_code_of([&] { p.validate(); }) == ErrorCode::InvalidRequest);
        p.topics = {"Dermatology"};
        p.validate();
        p.keywords = {"a", "b", "c", "d", "e", "f"};
        CHECK(error_code_of([&] { p.validate(); }) == ErrorCode::InvalidRequest);
        p.keywords = {};
        for (int bad : {2, 11, -1}) {
            p.total = bad;
            CHECK(error_code_of([&] { p.validate(); }) == ErrorCode::InvalidRequest);
        }
        CHECK(recency_from_string("week2") == Recency::Week2);
        CHECK(error_code_of([] { recency_from_string("fortnight"); }) == ErrorCode::InvalidRequest);
        CHECK(window_days(Recency::Month1) == 31);
        CHECK_FALSE(window_days(Recency::AnyTime).has_value());
    }

    TEST_CASE("topic list")
    {
        const auto topics = load_topic_list(support::data_dir() / "news" / "specialties.txt");
        for (const char* t : {"Dermatology", "Cardiology", "Rheumatology", "Immunology"})
            CHECK(std::find(topics.begin(), topics.end(), t) != topics.end());
        CHECK(error_code_of([] { load_topic_list("/missing/topics.txt"); }) == ErrorCode::MissingFile);
    }

    TEST_CASE("news date parsing")
    {
        CHECK(parse_news_date("3 days ago", kToday) == kToday - days{3});
        CHECK(parse_news_date("5 hours ago", kToday) == kToday);
        CHECK(parse_news_date("1 week ago", kToday) == kToday - days{7});
        CHECK(parse_news_date("2 months ago", kToday) == kToday - days{60});
        CHECK(parse_news_date("yesterday", kToday) == kToday - days{1});
        CHECK(parse_news_date("Jun 5, 2024", kToday) == sys_days{year{2024} / June / 5});
        CHECK(parse_news_date("5 Jun 2024", kToday) == sys_days{year{2024} / June / 5});
        CHECK(parse_news_date("2024-06-05", kToday) == sys_days{year{2024} / June / 5});
        for (const char* bad : {"", "soon", "Foo 5, 2024", "2024-13-40", "3 fortnights ago"})
            CHECK_MESSAGE(!parse_news_date(bad, kToday).has_value(), bad);
    }

    TEST_CASE("recency filter")
    {
        std::vector<NewsItem> items{{"a", "u1", kToday, ""},
                                    {"b", "u2", kToday - days{7}, ""},
                                    {"c", "u3", kToday - days{8}, ""},
                                    {"d", "u4", std::nullopt, ""},
                                    {"e", "u5", kToday - days{31}, ""},
                                    {"f", "u6", kToday - days{32}, ""}};
        CHECK(filter_recency(items, Recency::Week1, kToday).size() == 2);
        CHECK(filter_recency(items, Recency::Week2, kToday).size() == 3);
        CHECK(filter_recency(items, Recency::Month1, kToday).size() == 4);
        CHECK(filter_recency(items, Recency::AnyTime, kToday).size() == 6);
        CHECK(filter_recency(items, Recency::Week2, kToday)[2].title == "c");
    }

    TEST_CASE("cap words")
    {
        CHECK(cap_words("one two  three\nfour", 3) == "one two three");
        CHECK(cap_words("  ", 5).empty());
        CHECK(cap_words("a b", 10) == "a b");
    }

    TEST_CASE("serper wire format and parsing")
    {
        Rig rig;
        const auto items = rig.search.search(build_query("Dermatology", {}), 9, Recency::Week1);
        REQUIRE(items.size() == 5);
        CHECK(items[0].url == "https://news.example.org/dermatology/1");
        CHECK(items[0].published == kToday - days{2});
        CHECK(items[3].published == sys_days{year{2024} / June / 20});

        net::HttpRequest seen;
        auto spy = std::make_shared<net::FunctionTransport>([&](const net::HttpRequest& r) {
            seen = r;
            return net::HttpResponse{200, {}, R"({"news":[]})"};
        });
        SerperSearch s(spy, "serper-test-key");
        s.search("q", 6, Recency::Month1);
        const auto body = nlohmann::json::parse(seen.body);
        CHECK(seen.method == "POST");
        CHECK(body["num"] == 6);
        CHECK(body["tbs"] == "qdr:m");
        CHECK(net::header_value(seen.headers, "x-api-key") == "serper-test-key");
        s.search("q", 6, Recency::AnyTime);
        CHECK_FALSE(nlohmann::json::parse(seen.body).contains("tbs"));

        SerperSearch keyless(spy, "");
        CHECK(error_code_of([&] { keyless.search("q", 3, Recency::AnyTime); }) == ErrorCode::UpstreamUnavailable);
        auto bad = std::make_shared<net::FunctionTransport>([](const net::HttpRequest&) {
            return net::HttpResponse{200, {}, R"({"news":"nope"})"};
        });
        CHECK(error_code_of([&] { SerperSearch(bad, "k").search("q", 3, Recency::AnyTime); }) ==
              ErrorCode::MalformedResponse);
    }

    TEST_CASE("full allocation without warnings")
    {
        Rig rig;
        const auto r = rig.run({"Dermatology", "Cardiology"}, 6, Recency::AnyTime);
        CHECK(produced(r, "Dermatology") == 3);
        CHECK(produced(r, "Cardiology") == 3);
        CHECK(r.warnings.empty());
        REQUIRE(r.skipped.size() == 1);
        CHECK(r.skipped[0].url == "https://news.example.org/cardiology/1");
        CHECK(r.topics[0].summaries[0].title == "Dermatology advance 1 | Example News");
        CHECK(r.topics[1].summaries[0].url == "https://news.example.org/cardiology/2");
        for (const auto& t : r.topics)
            for (const auto& s : t.summaries) {
                std::istringstream words(s.summary);
                CHECK(std::distance(std::istream_iterator<std::string>(words), {}) <= 120);
            }
    }

    TEST_CASE("short topic warns by name after all results")
    {
        Rig rig;
        const std::vector<std::string> topics{"Dermatology", "Cardiology", "Rheumatology"};
        const auto r = rig.run(topics, 7, Recency::AnyTime);
        CHECK(produced(r, "Rheumatology") == 1);
        REQUIRE(r.warnings.size() == 1);
        CHECK(r.warnings[0].topic == "Rheumatology");
        CHECK(r.warnings[0].allocated == 3);
        CHECK(r.warnings[0].produced == 1);
        check_warning_completeness(r, topics, 7);

        const auto text = render_blocks(r);
        CHECK(text.rfind("Dermatology Results:\n\nTITLE: ", 0) == 0);
        CHECK(text.find("\n\nLINK: https://news.example.org/dermatology/1\n\nSUMMARY: ") != std::string::npos);
        const auto warning_at = text.find("WARNING: ");
        REQUIRE(warning_at != std::string::npos);
        CHECK(warning_at > text.rfind("SUMMARY: "));
        CHECK(text.find("Rheumatology", warning_at) != std::string::npos);
        CHECK(text.find("Cardiology Results:") < text.find("Rheumatology Results:"));

        const auto j = to_json(r);
        CHECK(j["summaries"].size() == 3);
        CHECK(j["warnings"][0]["topic"] == "Rheumatology");
    }

    TEST_CASE("recency monotonicity on fixtures")
    {
        Rig rig;
        const std::vector<std::string> topics{"Dermatology", "Cardiology"};
        int previous = -1;
        for (auto rec : {Recency::Week1, Recency::Week2, Recency::Month1, Recency::AnyTime}) {
            const auto r = rig.run(topics, 10, rec);
            const int n = produced(r, "Dermatology") + produced(r, "Cardiology");
            CHECK(n >= previous);
            previous = n;
            check_warning_completeness(r, topics, 10);
            for (const auto& t : r.topics)
                for (const auto& s : t.summaries)
                    CHECK(s.topic == t.topic);
        }
        CHECK(previous == 10); // every readable item once the window is open
    }

    TEST_CASE("failed searches")
    {
        Rig rig;
        const std::vector<std::string> topics{"Immunology", "Dermatology", "Neurology"};
        const auto r = rig.run(topics, 6, Recency::AnyTime, false);
        CHECK(produced(r, "Dermatology") == 2);
        CHECK(produced(r, "Immunology") == 0);
        check_warning_completeness(r, topics, 6);
        CHECK(r.warnings.size() == 2);
        CHECK(r.topics[0].topic == "Immunology");

        CHECK(error_code_of([&] { rig.run({"Immunology"}, 3, Recency::AnyTime); }) == ErrorCode::UpstreamUnavailable);
    }

    TEST_CASE("parallel and sequential agree")
    {
        Rig a, b;
        const std::vector<std::string> topics{"Rheumatology", "Cardiology", "Dermatology", "Immunology"};
        const auto p = a.run(topics, 9, Recency::Month1, true);
        const auto s = b.run(topics, 9, Recency::Month1, false);
        CHECK(to_json(p) == to_json(s));
    }

    TEST_CASE("summarizer gateway errors propagate")
    {
        Rig rig;
        rig.mock->set_failure(ErrorCode::AuthFailure);
        CHECK(error_code_of([&] { rig.run({"Dermatology"}, 3, Recency::AnyTime); }) == ErrorCode::AuthFailure);
    }
}
