#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Approximate matching of free-text diagnosis guesses against the true
// condition name. All ratios live on [0, 1].
//
// Distances are indel distances (insertions and deletions only, a
// substitution costs two), computed over Unicode code points. Text inputs
// are UTF-8.

namespace meditools::fuzzy {

inline constexpr double kDefaultCutoff = 0.7;

struct MatchOutcome {
    double ratio = 0.0;
    bool matched = false;
    double cutoff = kDefaultCutoff;
};

std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

/// Case-folds and replaces every non-alphanumeric code point with a space.
std::u32string normalize(std::string_view text);

/// Sorted, de-duplicated tokens of normalize(text).
std::vector<std::u32string> token_set(std::string_view text);

/// Length of the longest common subsequence (bit-parallel).
std::size_t lcs_length(std::u32string_view a, std::u32string_view b);

std::size_t indel_distance(std::u32string_view a, std::u32string_view b);
std::size_t indel_distance(std::string_view a, std::string_view b);

/// 1 - indel/(|a|+|b|); two empty strings are identical (1.0).
double similarity(std::u32string_view a, std::u32string_view b);
double similarity(std::string_view a, std::string_view b);

/// Word-order-insensitive ratio: the best similarity among the shared tokens
/// and each side's full sorted token list. A side whose tokens are a subset
/// of the other's scores 1.0. An empty token set against a nonempty one
/// scores 0.
double token_set_ratio(std::string_view a, std::string_view b);

/// matched iff token_set_ratio(guess, truth) >= cutoff. Throws
/// Error(InvalidRequest) when cutoff is outside [0, 1].
MatchOutcome is_match(std::string_view guess, std::string_view truth,
                      double cutoff = kDefaultCutoff);

} // namespace meditools::fuzzy
