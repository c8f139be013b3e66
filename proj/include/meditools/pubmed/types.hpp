#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meditools::pubmed {

bool is_pmid(std::string_view text);
bool is_pmcid(std::string_view text);

/// Throws InvalidRequest unless the text is a PMID / PMCID.
void require_pmid(std::string_view text);
void require_pmcid(std::string_view text);

/// Accepts "YYYY/MM/DD" or "YYYY-MM-DD". Throws InvalidRequest.
std::chrono::year_month_day parse_date(std::string_view text);
/// "YYYY/MM/DD", the form E-utilities expects.
std::string format_date(std::chrono::year_month_day date);

struct SearchParams {
    static constexpr int kMaxRetmax = 10000;

    std::string term;
    int retmax = 10;
    std::chrono::year_month_day mindate{std::chrono::year{2015}, std::chrono::January, std::chrono::day{1}};
    std::chrono::year_month_day maxdate{std::chrono::year{2022}, std::chrono::July, std::chrono::day{6}};

    /// Throws InvalidRequest naming the offending field.
    void validate() const;
};

struct ArticleMetadata {
    std::string pmid;
    std::string title;
    std::vector<std::string> authors; // "Family Given"
    int year = 0;                     // 0 when the record carries no date
    std::string journal;
    std::string abstract;
    std::optional<std::string> pmcid;
    std::optional<std::string> doi;
    std::string pubmed_url;

    bool pmc_eligible() const { return pmcid.has_value(); }
    bool operator==(const ArticleMetadata&) const = default;
};

nlohmann::json to_json(const ArticleMetadata& article);

struct FullText {
    std::string pmcid;
    std::string title;
    std::string text;
    std::string source_url;
};

std::string pubmed_url(std::string_view pmid);

/// https://pmc.ncbi.nlm.nih.gov/articles/<pmcid>/
std::string pmc_full_text_url(std::string_view pmcid);
/// PMC's standard PDF path for the article; best-effort, PMC may redirect.
std::string pmc_pdf_url(std::string_view pmcid);
/// Inverse of pmc_full_text_url (also accepts the older www.ncbi.nlm.nih.gov/pmc form).
std::optional<std::string> pmcid_from_url(std::string_view url);

} // namespace meditools::pubmed
