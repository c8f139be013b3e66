#pragma once

#include "meditools/net/content_extractor.hpp"
#include "meditools/net/http.hpp"
#include "meditools/net/rate_limiter.hpp"
#include "meditools/pubmed/types.hpp"

#include <deque>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

namespace meditools::pubmed {

struct ClientOptions {
    std::string base_url = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils";
    std::string api_key; // MEDITOOLS_NCBI_KEY; optional
    std::string tool = "meditools";
    std::size_t cache_capacity = 256;
};

/// E-utilities rate for the given key: 3/s anonymous, 10/s with a key.
double etiquette_rate(const std::string& api_key);

/// ESearch/EFetch client. Stateless apart from the EFetch cache; share one
/// instance (and one RateLimiter) across sessions so throttling is global.
class PubMedClient {
public:
    PubMedClient(std::shared_ptr<net::HttpTransport> transport, ClientOptions options = {},
                 std::shared_ptr<net::RateLimiter> limiter = nullptr);

    /// Relevance-ordered ids, at most params.retmax.
    /// Throws UpstreamUnavailable or MalformedResponse.
    std::vector<std::string> search_pmids(const SearchParams& params);

    /// Raw EFetch XML for the ids, cached per id list.
    /// Throws InvalidRequest for an empty list, UpstreamUnavailable.
    std::string fetch_article_xml(const std::vector<std::string>& pmids);

    /// search_pmids, then fetch and parse; records keep the search order.
    std::vector<ArticleMetadata> search(const SearchParams& params);

    std::size_t cache_size() const;

private:
    net::HttpResponse get(const std::string& endpoint, std::vector<std::pair<std::string, std::string>> query);

    std::shared_ptr<net::HttpTransport> transport_;
    ClientOptions options_;
    std::shared_ptr<net::RateLimiter> limiter_;
    mutable std::shared_mutex cache_mutex_;
    std::map<std::string, std::string> cache_;
    std::deque<std::string> cache_order_;
};

/// Retrieves the article's PMC page through the extractor.
/// Throws ExtractionFailed for empty text, UpstreamUnavailable when the page
/// cannot be fetched.
FullText fetch_full_text(const std::string& pmcid, net::ContentExtractor& extractor);

} // namespace meditools::pubmed
