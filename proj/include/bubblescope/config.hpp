#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include "bubblescope/common.hpp"
#include "bubblescope/csv.hpp"
#include "bubblescope/month.hpp"

namespace bubblescope {

// Flat `key = value` run configuration. `#` starts a comment, blank lines are
// ignored; keys may not repeat. Interpretation of keys is the caller's job.
inline std::map<std::string, std::string> load_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string text = detail::trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        }
        const std::string key = detail::trim(text.substr(0, eq));
        const std::string value = detail::trim(text.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": empty key");
        }
        if (!out.emplace(key, value).second) {
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": duplicate key '" + key + "'");
        }
    }
    return out;
}

namespace detail {

inline double config_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing text");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
    }
}

inline long config_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long x = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing text");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad integer '" + value + "'");
    }
}

inline std::uint64_t config_seed(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing text");
        return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad seed '" + value + "'");
    }
}

inline MonthStamp config_month(const std::string& key, const std::string& value) {
    try {
        return parse_month(value);
    } catch (const std::exception& e) {
        throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
}

}  // namespace detail

}  // namespace bubblescope
