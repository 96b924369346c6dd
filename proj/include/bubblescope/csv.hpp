#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bubblescope/common.hpp"
#include "bubblescope/month.hpp"
#include "bubblescope/series.hpp"

namespace bubblescope {

// Ordered collection of named monthly series sharing one date grid.
struct SeriesTable {
    std::vector<std::pair<std::string, PriceSeries>> columns;

    const PriceSeries& get(const std::string& label) const {
        for (const auto& [name, s] : columns) {
            if (name == label) return s;
        }
        throw std::invalid_argument("no column named '" + label + "'");
    }

    bool has(const std::string& label) const {
        for (const auto& [name, s] : columns) {
            if (name == label) return true;
        }
        return false;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline double parse_number(const std::string& s, std::size_t line_no,
                           const std::string& column) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw io_error("line " + std::to_string(line_no) + ": bad number '" + s +
                       "' in column '" + column + "'");
    }
}

}  // namespace detail

// Reads a monthly CSV: header row names the columns, first column holds dates
// (YYYYMM or YYYY-MM), remaining columns are strictly positive prices. Rows
// must form a gapless ascending monthly grid.
inline SeriesTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw io_error("'" + path + "' is empty");
    const auto header = detail::split_csv_line(line);
    if (header.size() < 2) {
        throw io_error("'" + path + "' needs a date column and at least one value column");
    }

    std::vector<MonthStamp> stamps;
    std::vector<std::vector<double>> cols(header.size() - 1);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw io_error("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
        }
        MonthStamp stamp{2000, 1};
        try {
            stamp = parse_month(fields[0]);
        } catch (const std::exception& e) {
            throw io_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!stamps.empty()) {
            const int step = month_diff(stamp, stamps.back());
            if (step == 0) throw io_error("duplicate month " + stamp.str());
            if (step < 0) {
                throw io_error("months out of order at " + stamp.str());
            }
            if (step > 1) {
                throw io_error("gap at " + stamps.back().plus_months(1).str());
            }
        }
        stamps.push_back(stamp);
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const double v = detail::parse_number(fields[c], line_no, header[c]);
            if (!(v > 0.0)) {
                throw io_error("line " + std::to_string(line_no) +
                               ": non-positive value in column '" + header[c] + "'");
            }
            cols[c - 1].push_back(v);
        }
    }
    if (stamps.size() < 2) {
        throw io_error("'" + path + "' needs at least 2 data rows");
    }

    SeriesTable table;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        table.columns.emplace_back(header[c + 1], PriceSeries(stamps.front(), cols[c]));
    }
    return table;
}

// Writes one or more aligned series back out in the same layout load_csv reads.
inline void save_csv(const std::string& path,
                     const std::vector<std::pair<std::string, PriceSeries>>& columns) {
    if (columns.empty()) throw std::invalid_argument("nothing to write");
    const MonthStamp start = columns.front().second.start();
    const std::size_t n = columns.front().second.size();
    for (const auto& [name, s] : columns) {
        if (s.start() != start || s.size() != n) {
            throw std::invalid_argument("column '" + name + "' not aligned with first column");
        }
    }
    std::ofstream out(path);
    if (!out) throw io_error("cannot write '" + path + "'");
    out << "date";
    for (const auto& [name, s] : columns) out << ',' << name;
    out << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < n; ++i) {
        out << start.plus_months(static_cast<int>(i)).str();
        for (const auto& [name, s] : columns) out << ',' << s[i];
        out << '\n';
    }
    if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace bubblescope
