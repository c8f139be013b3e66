#include "meditools/net/http.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace meditools::net {

namespace {

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

int hex_value(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

} // namespace

UrlParts split_url(std::string_view url)
{
    UrlParts parts;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos)
        throw TransportError("URL has no scheme: " + std::string(url));
    parts.scheme = std::string(url.substr(0, scheme_end));
    std::transform(parts.scheme.begin(), parts.scheme.end(), parts.scheme.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (parts.scheme != "http" && parts.scheme != "https")
        throw TransportError("unsupported URL scheme: " + parts.scheme);

    auto rest = url.substr(scheme_end + 3);
    const auto path_start = rest.find_first_of("/?");
    auto authority = rest.substr(0, path_start);
    parts.path = path_start == std::string_view::npos ? "/" : std::string(rest.substr(path_start));
    if (!parts.path.empty() && parts.path.front() == '?')
        parts.path.insert(parts.path.begin(), '/');

    parts.port = parts.scheme == "https" ? 443 : 80;
    const auto colon = authority.rfind(':');
    if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
        const auto port_text = authority.substr(colon + 1);
        int port = 0;
        auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
        if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port <= 0 || port > 65535)
            throw TransportError("invalid port in URL: " + std::string(url));
        parts.port = port;
        authority = authority.substr(0, colon);
    }
    if (authority.empty())
        throw TransportError("URL has no host: " + std::string(url));
    parts.host = std::string(authority);
    return parts;
}

std::string percent_encode(std::string_view text)
{
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size() * 3);
    for (unsigned char c : text) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 0xF]);
        }
    }
    return out;
}

std::string percent_decode(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%' && i + 2 < text.size()) {
            const int hi = hex_value(text[i + 1]);
            const int lo = hex_value(text[i + 2]);
            if (hi >= 0 && lo >= 0) {
                out.push_back(static_cast<char>(hi * 16 + lo));
                i += 2;
                continue;
            }
        }
        out.push_back(text[i] == '+' ? ' ' : text[i]);
    }
    return out;
}

std::string build_query(const std::vector<std::pair<std::string, std::string>>& params)
{
    std::string out;
    for (const auto& [key, value] : params) {
        if (!out.empty())
            out.push_back('&');
        out += percent_encode(key);
        out.push_back('=');
        out += percent_encode(value);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> parse_query(std::string_view url_or_query)
{
    std::vector<std::pair<std::string, std::string>> out;
    const auto qmark = url_or_query.find('?');
    auto query = qmark == std::string_view::npos
                     ? (url_or_query.find("://") == std::string_view::npos ? url_or_query
                                                                            : std::string_view{})
                     : url_or_query.substr(qmark + 1);
    if (const auto hash = query.find('#'); hash != std::string_view::npos)
        query = query.substr(0, hash);
    while (!query.empty()) {
        const auto amp = query.find('&');
        const auto pair = query.substr(0, amp);
        if (!pair.empty()) {
            const auto eq = pair.find('=');
            if (eq == std::string_view::npos)
                out.emplace_back(percent_decode(pair), "");
            else
                out.emplace_back(percent_decode(pair.substr(0, eq)), percent_decode(pair.substr(eq + 1)));
        }
        if (amp == std::string_view::npos)
            break;
        query = query.substr(amp + 1);
    }
    return out;
}

std::string header_value(const Headers& headers, std::string_view name)
{
    for (const auto& [key, value] : headers)
        if (iequals(key, name))
            return value;
    return {};
}

} // namespace meditools::net
