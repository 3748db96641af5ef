#include "egorec/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>

namespace egorec {

namespace {

std::string timestamp_line() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return std::string("# generated ") + buf;
}

}  // namespace

std::string format_count(std::size_t value) { return std::to_string(value); }

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

void write_report(std::ostream& out, const Report& report, ReportFormat format,
                  bool with_timestamp) {
    if (with_timestamp) out << timestamp_line() << '\n';

    if (format == ReportFormat::records) {
        for (std::size_t c = 0; c < report.columns.size(); ++c) {
            if (c) out << ',';
            out << report.columns[c];
        }
        out << '\n';
        for (const auto& row : report.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << ',';
                out << row[c];
            }
            out << '\n';
        }
        return;
    }

    std::vector<std::size_t> width(report.columns.size(), 0);
    for (std::size_t c = 0; c < report.columns.size(); ++c)
        width[c] = report.columns[c].size();
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    }
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c) out << "  ";
            out << cells[c];
            if (c + 1 < cells.size())
                out << std::string(width[c] - cells[c].size(), ' ');
        }
        out << '\n';
    };
    emit(report.columns);
    for (const auto& row : report.rows) emit(row);
}

}  // namespace egorec
