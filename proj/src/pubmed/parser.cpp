#include "meditools/pubmed/parser.hpp"

#include "meditools/error.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cctype>
#include <sstream>

namespace meditools::pubmed {

namespace pt = boost::property_tree;

namespace {

constexpr const char* kText = "<xmltext>";
constexpr const char* kAttr = "<xmlattr>";

std::string collapse(const std::string& s)
{
    std::string out;
    bool space = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            space = !out.empty();
            continue;
        }
        if (space)
            out.push_back(' ');
        space = false;
        out.push_back(static_cast<char>(c));
    }
    return out;
}

// Mixed content arrives as <xmltext> children interleaved with elements.
void gather_text(const pt::ptree& node, std::string& out)
{
    out += node.data();
    for (const auto& [name, child] : node) {
        if (name == kAttr)
            continue;
        if (name == kText)
            out += child.data();
        else
            gather_text(child, out);
    }
}

std::string text_of(const pt::ptree& node)
{
    std::string out;
    gather_text(node, out);
    return collapse(out);
}

std::string text_at(const pt::ptree& node, const std::string& path)
{
    const auto child = node.get_child_optional(pt::ptree::path_type(path, '/'));
    return child ? text_of(*child) : std::string{};
}

const pt::ptree* child_at(const pt::ptree& node, const std::string& path)
{
    const auto child = node.get_child_optional(pt::ptree::path_type(path, '/'));
    return child ? &*child : nullptr;
}

std::string attr(const pt::ptree& node, const std::string& name)
{
    return node.get<std::string>(pt::ptree::path_type(std::string(kAttr) + "/" + name, '/'), "");
}

int leading_year(const std::string& s)
{
    for (std::size_t i = 0; i + 4 <= s.size(); ++i) {
        bool digits = true;
        for (std::size_t k = 0; k < 4; ++k)
            digits = digits && std::isdigit(static_cast<unsigned char>(s[i + k]));
        if (digits)
            return std::stoi(s.substr(i, 4));
    }
    return 0;
}

std::vector<std::string> parse_authors(const pt::ptree* list)
{
    std::vector<std::string> authors;
    if (!list)
        return authors;
    for (const auto& [name, author] : *list) {
        if (name != "Author")
            continue;
        std::string last = text_at(author, "LastName");
        std::string given = text_at(author, "ForeName");
        if (given.empty())
            given = text_at(author, "Initials");
        std::string full = last;
        if (!given.empty())
            full += (full.empty() ? "" : " ") + given;
        if (full.empty())
            full = text_at(author, "CollectiveName");
        if (!full.empty())
            authors.push_back(full);
    }
    return authors;
}

std::string parse_abstract(const pt::ptree* abstract)
{
    std::string out;
    if (!abstract)
        return out;
    for (const auto& [name, section] : *abstract) {
        if (name != "AbstractText")
            continue;
        std::string text = text_of(section);
        const std::string label = attr(section, "Label");
        if (!label.empty())
            text = label + ": " + text;
        if (text.empty())
            continue;
        if (!out.empty())
            out += "\n";
        out += text;
    }
    return out;
}

int parse_year(const pt::ptree& article)
{
    if (const auto* date = child_at(article, "Journal/JournalIssue/PubDate")) {
        if (int y = leading_year(text_at(*date, "Year")))
            return y;
        if (int y = leading_year(text_at(*date, "MedlineDate")))
            return y;
    }
    if (const auto* date = child_at(article, "ArticleDate"))
        return leading_year(text_at(*date, "Year"));
    return 0;
}

ArticleMetadata parse_one(const pt::ptree& record)
{
    const auto* citation = child_at(record, "MedlineCitation");
    if (!citation)
        throw Error(ErrorCode::MalformedXml, "PubmedArticle without MedlineCitation");
    ArticleMetadata a;
    a.pmid = text_at(*citation, "PMID");
    if (!is_pmid(a.pmid))
        throw Error(ErrorCode::MalformedXml, "PubmedArticle without a valid PMID", {{"pmid", a.pmid}});
    a.pubmed_url = pubmed_url(a.pmid);

    if (const auto* article = child_at(*citation, "Article")) {
        a.title = text_at(*article, "ArticleTitle");
        a.journal = text_at(*article, "Journal/Title");
        a.authors = parse_authors(child_at(*article, "AuthorList"));
        a.abstract = parse_abstract(child_at(*article, "Abstract"));
        a.year = parse_year(*article);
    }

    if (const auto* ids = child_at(record, "PubmedData/ArticleIdList")) {
        for (const auto& [name, id] : *ids) {
            if (name != "ArticleId")
                continue;
            const std::string type = attr(id, "IdType");
            const std::string value = text_of(id);
            if (type == "pmc" && is_pmcid(value))
                a.pmcid = value;
            else if (type == "doi" && !value.empty())
                a.doi = value;
        }
    }
    return a;
}

} // namespace

std::vector<ArticleMetadata> parse_articles(std::string_view xml)
{
    pt::ptree doc;
    std::istringstream in{std::string(xml)};
    try {
        pt::read_xml(in, doc, pt::xml_parser::no_concat_text);
    } catch (const pt::xml_parser_error& e) {
        throw Error(ErrorCode::MalformedXml, "EFetch response is not well-formed XML: " + e.message(),
                    {{"line", e.line()}});
    }

    const auto* set = child_at(doc, "PubmedArticleSet");
    if (!set)
        throw Error(ErrorCode::MalformedXml, "document has no PubmedArticleSet root", {{"line", 1}});
    std::vector<ArticleMetadata> articles;
    for (const auto& [name, record] : *set)
        if (name == "PubmedArticle")
            articles.push_back(parse_one(record));
    return articles;
}

} // namespace meditools::pubmed
