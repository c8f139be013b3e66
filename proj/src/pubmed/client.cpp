#include "meditools/pubmed/client.hpp"

#include "meditools/error.hpp"
#include "meditools/pubmed/parser.hpp"

#include <nlohmann/json.hpp>

#include <mutex>

namespace meditools::pubmed {

double etiquette_rate(const std::string& api_key)
{
    return api_key.empty() ? 3.0 : 10.0;
}

PubMedClient::PubMedClient(std::shared_ptr<net::HttpTransport> transport, ClientOptions options,
                           std::shared_ptr<net::RateLimiter> limiter)
    : transport_(std::move(transport)), options_(std::move(options)), limiter_(std::move(limiter))
{
    if (!limiter_)
        limiter_ = std::make_shared<net::RateLimiter>(etiquette_rate(options_.api_key));
}

net::HttpResponse PubMedClient::get(const std::string& endpoint,
                                    std::vector<std::pair<std::string, std::string>> query)
{
    if (!options_.tool.empty())
        query.emplace_back("tool", options_.tool);
    if (!options_.api_key.empty())
        query.emplace_back("api_key", options_.api_key);
    net::HttpRequest request;
    request.url = options_.base_url + "/" + endpoint + "?" + net::build_query(query);

    limiter_->acquire();
    net::HttpResponse response;
    try {
        response = transport_->send(request);
    } catch (const net::TransportError&) {
        throw Error(ErrorCode::UpstreamUnavailable, "E-utilities unreachable", {{"endpoint", endpoint}});
    }
    if (!response.ok())
        throw Error(ErrorCode::UpstreamUnavailable, "E-utilities returned HTTP " + std::to_string(response.status),
                    {{"endpoint", endpoint}, {"status", response.status}});
    return response;
}

std::vector<std::string> PubMedClient::search_pmids(const SearchParams& params)
{
    params.validate();
    const auto response = get("esearch.fcgi", {{"db", "pubmed"},
                                               {"term", params.term},
                                               {"retmax", std::to_string(params.retmax)},
                                               {"retmode", "json"},
                                               {"datetype", "pdat"},
                                               {"mindate", format_date(params.mindate)},
                                               {"maxdate", format_date(params.maxdate)}});

    const auto doc = nlohmann::json::parse(response.body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("esearchresult"))
        throw Error(ErrorCode::MalformedResponse, "ESearch response is not the expected JSON");
    const auto& result = doc["esearchresult"];
    if (result.contains("ERROR"))
        throw Error(ErrorCode::UpstreamUnavailable, "ESearch reported an error",
                    {{"message", result["ERROR"].is_string() ? result["ERROR"].get<std::string>() : ""}});
    const auto list = result.find("idlist");
    if (list == result.end() || !list->is_array())
        throw Error(ErrorCode::MalformedResponse, "ESearch response has no idlist");

    std::vector<std::string> ids;
    for (const auto& id : *list) {
        if (!id.is_string() || !is_pmid(id.get<std::string>()))
            throw Error(ErrorCode::MalformedResponse, "ESearch idlist holds a non-PMID entry");
        if (ids.size() < static_cast<std::size_t>(params.retmax))
            ids.push_back(id.get<std::string>());
    }
    return ids;
}

std::string PubMedClient::fetch_article_xml(const std::vector<std::string>& pmids)
{
    if (pmids.empty())
        throw Error(ErrorCode::InvalidRequest, "no PMIDs to fetch");
    std::string key;
    for (const auto& id : pmids) {
        require_pmid(id);
        key += (key.empty() ? "" : ",") + id;
    }
    {
        std::shared_lock lock(cache_mutex_);
        if (const auto it = cache_.find(key); it != cache_.end())
            return it->second;
    }

    auto response = get("efetch.fcgi", {{"db", "pubmed"}, {"id", key}, {"retmode", "xml"}});

    std::unique_lock lock(cache_mutex_);
    const auto [it, inserted] = cache_.emplace(key, std::move(response.body));
    if (inserted) {
        cache_order_.push_back(key);
        while (cache_order_.size() > options_.cache_capacity) {
            cache_.erase(cache_order_.front());
            cache_order_.pop_front();
        }
    }
    return it->second;
}

std::vector<ArticleMetadata> PubMedClient::search(const SearchParams& params)
{
    const auto ids = search_pmids(params);
    if (ids.empty())
        return {};
    auto parsed = parse_articles(fetch_article_xml(ids));

    std::vector<ArticleMetadata> ordered;
    for (const auto& id : ids)
        for (auto& article : parsed)
            if (article.pmid == id) {
                ordered.push_back(std::move(article));
                break;
            }
    return ordered;
}

std::size_t PubMedClient::cache_size() const
{
    std::shared_lock lock(cache_mutex_);
    return cache_.size();
}

FullText fetch_full_text(const std::string& pmcid, net::ContentExtractor& extractor)
{
    require_pmcid(pmcid);
    FullText full;
    full.pmcid = pmcid;
    full.source_url = pmc_full_text_url(pmcid);
    net::PageText page;
    try {
        page = extractor.extract(full.source_url);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::FetchFailed)
            throw Error(ErrorCode::UpstreamUnavailable, "could not retrieve the PMC article page",
                        {{"pmcid", pmcid}});
        throw;
    }
    if (page.text.find_first_not_of(" \t\r\n") == std::string::npos)
        throw Error(ErrorCode::ExtractionFailed, "no text could be extracted from the PMC article",
                    {{"pmcid", pmcid}});
    full.title = std::move(page.title);
    full.text = std::move(page.text);
    return full;
}

} // namespace meditools::pubmed
