#pragma once

#include <string>
#include <string_view>

namespace meditools::net {

struct PageText {
    std::string title;
    std::string text;
};

/// Reduces an HTML page to readable text.
///
/// Scripts, styles, navigation chrome and forms are dropped. When the page
/// has an <article> (or failing that a <main>) element, only its content is
/// kept. Block-level elements become line breaks, entities are decoded and
/// runs of whitespace collapse to single spaces.
PageText html_to_text(std::string_view html);

/// Decodes named and numeric character references.
std::string decode_entities(std::string_view text);

} // namespace meditools::net
