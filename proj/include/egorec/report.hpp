#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace egorec {

enum class ReportFormat { records, table };

// A rectangular report: comma-separated records with a header row, or an
// aligned table for terminals. Cells are preformatted strings.
struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
};

// Writes the report; when with_timestamp is set, a '#'-prefixed generation
// line precedes the data (suppress it for byte-reproducible output).
void write_report(std::ostream& out, const Report& report, ReportFormat format,
                  bool with_timestamp);

std::string format_count(std::size_t value);
std::string format_real(double value);

}  // namespace egorec
