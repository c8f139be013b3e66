#include "fuzzy_oracle.hpp"

#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <iterator>
#include <set>
#include <vector>

namespace oracle {

namespace {

std::set<std::u32string> tokens(const std::string& text)
{
    const icu::UnicodeString us = icu::UnicodeString::fromUTF8(text);
    std::set<std::u32string> out;
    std::u32string current;
    for (int32_t i = 0; i < us.length(); i = us.moveIndex32(i, 1)) {
        const UChar32 c = us.char32At(i);
        if (u_isalnum(c)) {
            current.push_back(static_cast<char32_t>(u_foldCase(c, U_FOLD_CASE_DEFAULT)));
        } else if (!current.empty()) {
            out.insert(current);
            current.clear();
        }
    }
    if (!current.empty())
        out.insert(current);
    return out;
}

std::u32string join(const std::set<std::u32string>& parts)
{
    std::u32string out;
    for (const auto& p : parts) {
        if (!out.empty())
            out.push_back(U' ');
        out += p;
    }
    return out;
}

std::u32string join2(const std::u32string& a, const std::u32string& b)
{
    if (a.empty())
        return b;
    if (b.empty())
        return a;
    return a + U' ' + b;
}

} // namespace

std::size_t indel_distance(const std::u32string& a, const std::u32string& b)
{
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i)
        d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j)
        d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j) {
            d[i][j] = std::min(d[i - 1][j], d[i][j - 1]) + 1;
            if (a[i - 1] == b[j - 1])
                d[i][j] = std::min(d[i][j], d[i - 1][j - 1]);
        }
    return d[a.size()][b.size()];
}

double similarity(const std::u32string& a, const std::u32string& b)
{
    const double total = static_cast<double>(a.size() + b.size());
    if (total == 0)
        return 1.0;
    return 1.0 - static_cast<double>(indel_distance(a, b)) / total;
}

double token_set_ratio(const std::string& a, const std::string& b)
{
    const auto ta = tokens(a), tb = tokens(b);
    if (ta.empty() && tb.empty())
        return 1.0;
    if (ta.empty() || tb.empty())
        return 0.0;
    std::set<std::u32string> common, only_a, only_b;
    std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::inserter(common, common.end()));
    std::set_difference(ta.begin(), ta.end(), tb.begin(), tb.end(), std::inserter(only_a, only_a.end()));
    std::set_difference(tb.begin(), tb.end(), ta.begin(), ta.end(), std::inserter(only_b, only_b.end()));
    const auto i = join(common);
    const auto x = join2(i, join(only_a));
    const auto y = join2(i, join(only_b));
    return std::max({similarity(i, x), similarity(i, y), similarity(x, y)});
}

} // namespace oracle
