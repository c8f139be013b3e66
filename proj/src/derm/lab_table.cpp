#include "meditools/derm/lab_table.hpp"

#include <algorithm>
#include <cctype>

namespace meditools::derm {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r*`");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r*`");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_cells(std::string_view line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto bar = line.find('|', start);
        cells.push_back(trim(line.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start)));
        if (bar == std::string_view::npos)
            break;
        start = bar + 1;
    }
    // Leading and trailing pipes produce empty edge cells.
    if (!cells.empty() && cells.front().empty())
        cells.erase(cells.begin());
    if (!cells.empty() && cells.back().empty())
        cells.pop_back();
    return cells;
}

bool is_rule(const std::vector<std::string>& cells)
{
    return std::all_of(cells.begin(), cells.end(), [](const std::string& c) {
        return !c.empty() && c.find_first_not_of("-: ") == std::string::npos;
    });
}

bool is_header(const std::vector<std::string>& cells)
{
    std::string first = cells.front();
    std::transform(first.begin(), first.end(), first.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return first == "test" || first == "test name" || first == "analyte";
}

} // namespace

std::vector<LabRow> parse_lab_table(std::string_view text)
{
    std::vector<LabRow> rows;
    std::string section;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        if (line.find('|') == std::string_view::npos) {
            std::string heading = trim(line);
            while (!heading.empty() && heading.front() == '#')
                heading.erase(heading.begin());
            heading = trim(heading);
            if (!heading.empty() && heading.find(':') == std::string::npos && heading.back() != '.' &&
                heading.size() < 80)
                section = heading;
            continue;
        }
        auto cells = split_cells(line);
        if (cells.size() < 3 || is_rule(cells) || is_header(cells))
            continue;
        if (cells[0].empty() || cells[1].empty())
            continue;
        LabRow row;
        row.section = section;
        row.test = cells[0];
        row.result = cells[1];
        row.reference_range = cells[2];
        for (std::size_t i = 3; i < cells.size(); ++i)
            if (!cells[i].empty())
                row.reference_range += " " + cells[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_lab_table(const std::vector<LabRow>& rows)
{
    std::string out(kLabHeader);
    std::string section;
    for (const auto& row : rows) {
        if (row.section != section) {
            section = row.section;
            if (!section.empty())
                out += "\n" + section;
        }
        out += "\n" + row.test + " | " + row.result + " | " + row.reference_range;
    }
    return out;
}

} // namespace meditools::derm
