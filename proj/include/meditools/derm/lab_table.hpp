#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace meditools::derm {

struct LabRow {
    std::string section; // panel heading the row sits under, may be empty
    std::string test;
    std::string result;
    std::string reference_range;

    bool operator==(const LabRow&) const = default;
};

inline constexpr std::string_view kLabHeader = "Test | Result | Reference Range";

/// Parses a '|'-delimited lab table as produced by the lab chain.
///
/// Rows need at least three cells (extra cells are joined into the
/// reference range). The header row, markdown rule rows and leading/trailing
/// pipes are tolerated; a line without pipes that is followed by rows is
/// taken as a section heading. Returns an empty vector when nothing parses.
std::vector<LabRow> parse_lab_table(std::string_view text);

/// Canonical text: header row, then rows with section headings on their own
/// line whenever the section changes.
std::string format_lab_table(const std::vector<LabRow>& rows);

} // namespace meditools::derm
