#include "meditools/fuzzy/match.hpp"

#include "meditools/error.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>

namespace meditools::fuzzy {

namespace {

// Per-character occurrence bitmasks of a pattern, one 64-bit word per block.
class PatternMasks {
public:
    explicit PatternMasks(std::u32string_view pattern)
        : words_((pattern.size() + 63) / 64)
    {
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            auto& mask = masks_[pattern[i]];
            if (mask.empty())
                mask.assign(words_, 0);
            mask[i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }

    std::size_t words() const { return words_; }

    const std::vector<std::uint64_t>* find(char32_t c) const
    {
        auto it = masks_.find(c);
        return it == masks_.end() ? nullptr : &it->second;
    }

private:
    std::size_t words_;
    std::unordered_map<char32_t, std::vector<std::uint64_t>> masks_;
};

std::u32string join_tokens(const std::vector<std::u32string>& tokens)
{
    std::u32string out;
    for (const auto& t : tokens) {
        if (!out.empty())
            out.push_back(U' ');
        out += t;
    }
    return out;
}

std::u32string join_parts(const std::u32string& left, const std::u32string& right)
{
    if (left.empty())
        return right;
    if (right.empty())
        return left;
    std::u32string out = left;
    out.push_back(U' ');
    out += right;
    return out;
}

} // namespace

std::u32string decode_utf8(std::string_view text)
{
    std::u32string out;
    out.reserve(text.size());
    const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
    const auto length = static_cast<std::int32_t>(text.size());
    std::int32_t i = 0;
    while (i < length) {
        UChar32 c = 0;
        U8_NEXT(s, i, length, c);
        out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
    }
    return out;
}

std::string encode_utf8(std::u32string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        std::uint8_t buf[U8_MAX_LENGTH];
        std::int32_t n = 0;
        UBool error = false;
        U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
        if (error) {
            out += "\xEF\xBF\xBD";
            continue;
        }
        out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
    }
    return out;
}

std::u32string normalize(std::string_view text)
{
    std::u32string out = decode_utf8(text);
    for (auto& c : out) {
        const auto cp = static_cast<UChar32>(c);
        c = u_isalnum(cp) ? static_cast<char32_t>(u_foldCase(cp, U_FOLD_CASE_DEFAULT)) : U' ';
    }
    return out;
}

std::vector<std::u32string> token_set(std::string_view text)
{
    const std::u32string norm = normalize(text);
    std::vector<std::u32string> tokens;
    std::size_t pos = 0;
    while (pos < norm.size()) {
        while (pos < norm.size() && norm[pos] == U' ')
            ++pos;
        std::size_t end = pos;
        while (end < norm.size() && norm[end] != U' ')
            ++end;
        if (end > pos)
            tokens.emplace_back(norm.substr(pos, end - pos));
        pos = end;
    }
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

std::size_t lcs_length(std::u32string_view a, std::u32string_view b)
{
    if (a.empty() || b.empty())
        return 0;
    if (a.size() < b.size())
        std::swap(a, b);

    // Hyyrö's bit-vector LCS: bit i of V is cleared when position i of the
    // pattern belongs to the current common subsequence.
    const PatternMasks masks(b);
    const std::size_t words = masks.words();
    std::vector<std::uint64_t> v(words, ~std::uint64_t{0});

    for (char32_t c : a) {
        const auto* match = masks.find(c);
        if (!match)
            continue;
        std::uint64_t carry = 0;
        for (std::size_t w = 0; w < words; ++w) {
            const std::uint64_t u = v[w] & (*match)[w];
            const std::uint64_t sum1 = v[w] + u;
            const std::uint64_t carry1 = sum1 < v[w] ? 1 : 0;
            const std::uint64_t sum = sum1 + carry;
            const std::uint64_t carry2 = sum < sum1 ? 1 : 0;
            carry = carry1 | carry2;
            v[w] = sum | (v[w] - u);
        }
    }

    std::size_t zeros = 0;
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t word = ~v[w];
        if (w + 1 == words && b.size() % 64 != 0)
            word &= (std::uint64_t{1} << (b.size() % 64)) - 1;
        zeros += static_cast<std::size_t>(std::popcount(word));
    }
    return zeros;
}

std::size_t indel_distance(std::u32string_view a, std::u32string_view b)
{
    return a.size() + b.size() - 2 * lcs_length(a, b);
}

std::size_t indel_distance(std::string_view a, std::string_view b)
{
    return indel_distance(decode_utf8(a), decode_utf8(b));
}

double similarity(std::u32string_view a, std::u32string_view b)
{
    const std::size_t total = a.size() + b.size();
    if (total == 0)
        return 1.0;
    return static_cast<double>(total - indel_distance(a, b)) / static_cast<double>(total);
}

double similarity(std::string_view a, std::string_view b)
{
    return similarity(decode_utf8(a), decode_utf8(b));
}

double token_set_ratio(std::string_view a, std::string_view b)
{
    const auto tokens_a = token_set(a);
    const auto tokens_b = token_set(b);
    if (tokens_a.empty() != tokens_b.empty())
        return 0.0;

    std::vector<std::u32string> shared;
    std::vector<std::u32string> only_a;
    std::vector<std::u32string> only_b;
    std::set_intersection(tokens_a.begin(), tokens_a.end(), tokens_b.begin(), tokens_b.end(),
                          std::back_inserter(shared));
    std::set_difference(tokens_a.begin(), tokens_a.end(), tokens_b.begin(), tokens_b.end(),
                        std::back_inserter(only_a));
    std::set_difference(tokens_b.begin(), tokens_b.end(), tokens_a.begin(), tokens_a.end(),
                        std::back_inserter(only_b));

    const std::u32string common = join_tokens(shared);
    const std::u32string full_a = join_parts(common, join_tokens(only_a));
    const std::u32string full_b = join_parts(common, join_tokens(only_b));

    return std::max({similarity(common, full_a), similarity(common, full_b),
                     similarity(full_a, full_b)});
}

MatchOutcome is_match(std::string_view guess, std::string_view truth, double cutoff)
{
    if (!(cutoff >= 0.0 && cutoff <= 1.0))
        throw Error(ErrorCode::InvalidRequest, "match cutoff must lie in [0, 1]");
    MatchOutcome outcome;
    outcome.cutoff = cutoff;
    outcome.ratio = token_set_ratio(guess, truth);
    outcome.matched = outcome.ratio >= cutoff;
    return outcome;
}

} // namespace meditools::fuzzy
