#pragma once

#include "meditools/pubmed/types.hpp"

#include <string_view>
#include <vector>

namespace meditools::pubmed {

/// Parses an EFetch PubmedArticleSet document.
///
/// One record per PubmedArticle, in document order. Reads the title, author
/// list, publication year, journal title, abstract (labelled sections joined
/// by newlines), and the record's own pmc/doi article ids. Inline markup in
/// titles and abstracts is flattened to text. Throws Error(MalformedXml) with
/// a line number in the detail.
std::vector<ArticleMetadata> parse_articles(std::string_view xml);

} // namespace meditools::pubmed
