#include "meditools/pubmed/types.hpp"

#include "meditools/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace meditools::pubmed {

namespace {

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

int to_int(std::string_view s)
{
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        return -1;
    return value;
}

constexpr std::string_view kPmcBase = "https://pmc.ncbi.nlm.nih.gov/articles/";

} // namespace

bool is_pmid(std::string_view text)
{
    return all_digits(text) && text.size() <= 10 && text.front() != '0';
}

bool is_pmcid(std::string_view text)
{
    return text.size() > 3 && text.substr(0, 3) == "PMC" && is_pmid(text.substr(3));
}

void require_pmid(std::string_view text)
{
    if (!is_pmid(text))
        throw Error(ErrorCode::InvalidRequest, "pmid must be a string of digits");
}

void require_pmcid(std::string_view text)
{
    if (!is_pmcid(text))
        throw Error(ErrorCode::InvalidRequest, "pmcid must be \"PMC\" followed by digits");
}

std::chrono::year_month_day parse_date(std::string_view text)
{
    const auto bad = [&] {
        return Error(ErrorCode::InvalidRequest, "dates use YYYY/MM/DD", {{"value", std::string(text)}});
    };
    if (text.size() != 10 || (text[4] != '/' && text[4] != '-') || text[7] != text[4])
        throw bad();
    const auto y = text.substr(0, 4), m = text.substr(5, 2), d = text.substr(8, 2);
    if (!all_digits(y) || !all_digits(m) || !all_digits(d))
        throw bad();
    const std::chrono::year_month_day date{std::chrono::year{to_int(y)},
                                           std::chrono::month{static_cast<unsigned>(to_int(m))},
                                           std::chrono::day{static_cast<unsigned>(to_int(d))}};
    if (!date.ok())
        throw bad();
    return date;
}

std::string format_date(std::chrono::year_month_day date)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d/%02u/%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

void SearchParams::validate() const
{
    if (term.find_first_not_of(" \t\r\n") == std::string::npos)
        throw Error(ErrorCode::InvalidRequest, "search term is empty", {{"field", "term"}});
    if (retmax < 1 || retmax > kMaxRetmax)
        throw Error(ErrorCode::InvalidRequest, "retmax must be between 1 and " + std::to_string(kMaxRetmax),
                    {{"field", "retmax"}});
    if (!mindate.ok() || !maxdate.ok())
        throw Error(ErrorCode::InvalidRequest, "invalid date", {{"field", "mindate"}});
    if (maxdate < mindate)
        throw Error(ErrorCode::InvalidRequest, "mindate is after maxdate", {{"field", "mindate"}});
}

nlohmann::json to_json(const ArticleMetadata& a)
{
    nlohmann::json j{{"pmid", a.pmid},       {"title", a.title},     {"authors", a.authors},
                     {"year", a.year},       {"journal", a.journal}, {"abstract", a.abstract},
                     {"pmcid", nullptr},     {"doi", nullptr},       {"pubmed_url", a.pubmed_url},
                     {"pmc_eligible", a.pmc_eligible()}};
    if (a.pmcid) {
        j["pmcid"] = *a.pmcid;
        j["pmc_url"] = pmc_full_text_url(*a.pmcid);
    }
    if (a.doi)
        j["doi"] = *a.doi;
    return j;
}

std::string pubmed_url(std::string_view pmid)
{
    return "https://pubmed.ncbi.nlm.nih.gov/" + std::string(pmid) + "/";
}

std::string pmc_full_text_url(std::string_view pmcid)
{
    return std::string(kPmcBase) + std::string(pmcid) + "/";
}

std::string pmc_pdf_url(std::string_view pmcid)
{
    return pmc_full_text_url(pmcid) + "pdf/";
}

std::optional<std::string> pmcid_from_url(std::string_view url)
{
    for (std::string_view prefix : {kPmcBase, std::string_view("https://www.ncbi.nlm.nih.gov/pmc/articles/")}) {
        if (url.substr(0, prefix.size()) != prefix)
            continue;
        auto rest = url.substr(prefix.size());
        const auto slash = rest.find('/');
        const auto id = rest.substr(0, slash);
        if (is_pmcid(id))
            return std::string(id);
    }
    return std::nullopt;
}

} // namespace meditools::pubmed
