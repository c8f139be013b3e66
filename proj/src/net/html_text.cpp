#include "meditools/net/html_text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

namespace meditools::net {

namespace {

struct Token {
    enum class Kind { Text, Open, Close } kind;
    std::string value; // text, or lower-cased tag name
};

const std::set<std::string>& skipped_elements()
{
    static const std::set<std::string> names{"script", "style", "noscript", "template", "svg",
                                             "head", "nav", "footer", "aside",
                                             "form", "button", "select", "iframe", "canvas"};
    return names;
}

const std::set<std::string>& block_elements()
{
    static const std::set<std::string> names{
        "p", "div", "br", "li", "ul", "ol", "dl", "dt", "dd", "h1", "h2", "h3", "h4", "h5", "h6",
        "tr", "table", "thead", "tbody", "section", "article", "main", "blockquote", "pre", "hr",
        "figure", "figcaption", "caption", "address"};
    return names;
}

const std::set<std::string>& void_elements()
{
    static const std::set<std::string> names{"area", "base", "br", "col", "embed", "hr", "img",
                                             "input", "link", "meta", "source", "track", "wbr"};
    return names;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

void append_utf8(std::string& out, std::uint32_t cp)
{
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
        cp = 0xFFFD;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Splits markup into text runs and open/close tags. Comments, doctypes and
// processing instructions vanish; raw-text elements keep their body as one
// text token so a '<' inside a script cannot open a tag.
std::vector<Token> tokenize(std::string_view html)
{
    std::vector<Token> tokens;
    std::size_t pos = 0;
    std::string text;

    auto flush_text = [&] {
        if (!text.empty()) {
            tokens.push_back({Token::Kind::Text, std::move(text)});
            text.clear();
        }
    };

    while (pos < html.size()) {
        if (html[pos] != '<') {
            text.push_back(html[pos++]);
            continue;
        }
        if (html.substr(pos, 4) == "<!--") {
            const auto end = html.find("-->", pos + 4);
            pos = end == std::string_view::npos ? html.size() : end + 3;
            continue;
        }
        if (pos + 1 < html.size() && (html[pos + 1] == '!' || html[pos + 1] == '?')) {
            const auto end = html.find('>', pos);
            pos = end == std::string_view::npos ? html.size() : end + 1;
            continue;
        }

        const bool closing = pos + 1 < html.size() && html[pos + 1] == '/';
        std::size_t name_start = pos + (closing ? 2 : 1);
        std::size_t name_end = name_start;
        while (name_end < html.size() &&
               (std::isalnum(static_cast<unsigned char>(html[name_end])) || html[name_end] == '-'))
            ++name_end;
        if (name_end == name_start) {
            text.push_back(html[pos++]);
            continue;
        }

        // Find the end of the tag, respecting quoted attribute values.
        std::size_t end = name_end;
        char quote = 0;
        while (end < html.size()) {
            const char c = html[end];
            if (quote) {
                if (c == quote)
                    quote = 0;
            } else if (c == '"' || c == '\'') {
                quote = c;
            } else if (c == '>') {
                break;
            }
            ++end;
        }
        const std::string name = lower(html.substr(name_start, name_end - name_start));
        const bool self_closing = end > 0 && end < html.size() && html[end - 1] == '/';
        pos = end == html.size() ? end : end + 1;

        flush_text();
        if (closing) {
            tokens.push_back({Token::Kind::Close, name});
            continue;
        }
        tokens.push_back({Token::Kind::Open, name});
        if (self_closing || void_elements().count(name)) {
            tokens.push_back({Token::Kind::Close, name});
            continue;
        }
        if (name == "script" || name == "style" || name == "textarea" || name == "title") {
            const std::string close = "</" + name;
            std::size_t body_end = pos;
            while (true) {
                body_end = html.find('<', body_end);
                if (body_end == std::string_view::npos ||
                    lower(html.substr(body_end, close.size())) == close)
                    break;
                ++body_end;
            }
            if (body_end == std::string_view::npos)
                body_end = html.size();
            tokens.push_back({Token::Kind::Text, std::string(html.substr(pos, body_end - pos))});
            const auto gt = html.find('>', body_end);
            pos = gt == std::string_view::npos ? html.size() : gt + 1;
            tokens.push_back({Token::Kind::Close, name});
        }
    }
    flush_text();
    return tokens;
}

// Index range [first, last) of the content of the first `name` element.
bool element_range(const std::vector<Token>& tokens, const std::string& name, std::size_t& first,
                   std::size_t& last)
{
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].kind != Token::Kind::Open || tokens[i].value != name)
            continue;
        int depth = 1;
        for (std::size_t j = i + 1; j < tokens.size(); ++j) {
            if (tokens[j].value != name || tokens[j].kind == Token::Kind::Text)
                continue;
            depth += tokens[j].kind == Token::Kind::Open ? 1 : -1;
            if (depth == 0) {
                first = i + 1;
                last = j;
                return true;
            }
        }
        first = i + 1;
        last = tokens.size();
        return true;
    }
    return false;
}

std::string collapse_whitespace(std::string_view text)
{
    std::string out;
    std::string line;
    bool pending_blank = false;
    auto flush_line = [&] {
        while (!line.empty() && line.back() == ' ')
            line.pop_back();
        if (line.empty()) {
            pending_blank = !out.empty();
            return;
        }
        if (!out.empty())
            out += pending_blank ? "\n\n" : "\n";
        out += line;
        line.clear();
        pending_blank = false;
    };
    for (char c : text) {
        if (c == '\n') {
            flush_line();
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (!line.empty() && line.back() != ' ')
                line.push_back(' ');
        } else {
            line.push_back(c);
        }
    }
    flush_line();
    return out;
}

} // namespace

std::string decode_entities(std::string_view text)
{
    static const std::unordered_map<std::string, std::uint32_t> named{
        {"amp", '&'},       {"lt", '<'},        {"gt", '>'},        {"quot", '"'},
        {"apos", '\''},     {"nbsp", 0xA0},     {"ndash", 0x2013},  {"mdash", 0x2014},
        {"hellip", 0x2026}, {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},
        {"rdquo", 0x201D},  {"copy", 0xA9},     {"reg", 0xAE},      {"trade", 0x2122},
        {"deg", 0xB0},      {"times", 0xD7},    {"micro", 0xB5},    {"plusmn", 0xB1},
        {"middot", 0xB7},   {"bull", 0x2022},   {"alpha", 0x3B1},   {"beta", 0x3B2},
        {"gamma", 0x3B3},   {"kappa", 0x3BA},   {"mu", 0x3BC},      {"le", 0x2264},
        {"ge", 0x2265},     {"thinsp", 0x2009}, {"ensp", 0x2002},   {"emsp", 0x2003}};

    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != '&') {
            out.push_back(text[pos++]);
            continue;
        }
        const auto semi = text.find(';', pos);
        if (semi == std::string_view::npos || semi - pos > 12) {
            out.push_back(text[pos++]);
            continue;
        }
        const auto ref = text.substr(pos + 1, semi - pos - 1);
        bool decoded = false;
        if (!ref.empty() && ref[0] == '#') {
            std::uint32_t cp = 0;
            const bool hex = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X');
            const auto digits = ref.substr(hex ? 2 : 1);
            bool valid = !digits.empty();
            for (char c : digits) {
                const auto u = static_cast<unsigned char>(c);
                if (hex ? !std::isxdigit(u) : !std::isdigit(u)) {
                    valid = false;
                    break;
                }
                cp = cp * (hex ? 16 : 10) +
                     static_cast<std::uint32_t>(std::isdigit(u) ? c - '0' : std::tolower(u) - 'a' + 10);
                if (cp > 0x10FFFF) {
                    valid = false;
                    break;
                }
            }
            if (valid) {
                append_utf8(out, cp);
                decoded = true;
            }
        } else if (auto it = named.find(std::string(ref)); it != named.end()) {
            append_utf8(out, it->second);
            decoded = true;
        }
        if (decoded) {
            pos = semi + 1;
        } else {
            out.push_back(text[pos++]);
        }
    }
    return out;
}

PageText html_to_text(std::string_view html)
{
    const std::vector<Token> tokens = tokenize(html);
    PageText page;

    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i].kind == Token::Kind::Open && tokens[i].value == "title" &&
            tokens[i + 1].kind == Token::Kind::Text) {
            page.title = collapse_whitespace(decode_entities(tokens[i + 1].value));
            break;
        }
    }

    std::size_t first = 0;
    std::size_t last = tokens.size();
    if (!element_range(tokens, "article", first, last) && !element_range(tokens, "main", first, last)) {
        first = 0;
        last = tokens.size();
    }

    std::string raw;
    int skip_depth = 0;
    for (std::size_t i = first; i < last; ++i) {
        const Token& t = tokens[i];
        switch (t.kind) {
        case Token::Kind::Open:
            if (skipped_elements().count(t.value) || t.value == "title")
                ++skip_depth;
            else if (!skip_depth && block_elements().count(t.value))
                raw.push_back('\n');
            else if (!skip_depth && (t.value == "td" || t.value == "th"))
                raw.push_back(' ');
            break;
        case Token::Kind::Close:
            if (skipped_elements().count(t.value) || t.value == "title")
                skip_depth = std::max(0, skip_depth - 1);
            else if (!skip_depth && t.value != "li" && block_elements().count(t.value))
                raw.push_back('\n'); // list items stay on adjacent lines
            break;
        case Token::Kind::Text:
            if (!skip_depth)
                raw += decode_entities(t.value);
            break;
        }
    }
    page.text = collapse_whitespace(raw);
    if (page.title.empty()) {
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
            if (tokens[i].kind == Token::Kind::Open && tokens[i].value == "h1" &&
                tokens[i + 1].kind == Token::Kind::Text) {
                page.title = collapse_whitespace(decode_entities(tokens[i + 1].value));
                break;
            }
        }
    }
    return page;
}

} // namespace meditools::net
