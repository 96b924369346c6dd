#pragma once

#include <compare>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bubblescope {

// One calendar month. All model math runs on a month index with epoch
// 2000-01 = 0, so fitted parameters are directly comparable across series.
struct MonthStamp {
    int year = 2000;
    int month = 1;  // 1..12

    auto operator<=>(const MonthStamp&) const = default;

    // Months since 2000-01.
    constexpr int index() const { return (year - 2000) * 12 + (month - 1); }

    static constexpr MonthStamp from_index(int idx) {
        int y = 2000, m = idx;
        // keep month in 0..11 before shifting back to 1..12
        if (m < 0) {
            int borrow = (-m + 11) / 12;
            y -= borrow;
            m += borrow * 12;
        }
        return MonthStamp{y + m / 12, m % 12 + 1};
    }

    MonthStamp plus_months(int k) const { return from_index(index() + k); }

    std::string str() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d%02d", year, month);
        return buf;
    }
};

// Signed month count from b to a.
inline int month_diff(MonthStamp a, MonthStamp b) { return a.index() - b.index(); }

// Parses the compact form YYYYMM ("200801") and the dashed form YYYY-MM.
inline MonthStamp parse_month(std::string_view text) {
    std::string digits;
    if (text.size() == 7 && text[4] == '-') {
        digits = std::string(text.substr(0, 4)) + std::string(text.substr(5, 2));
    } else {
        digits = std::string(text);
    }
    if (digits.size() != 6) {
        throw std::invalid_argument("malformed month '" + std::string(text) +
                                    "': expected YYYYMM or YYYY-MM");
    }
    for (char c : digits) {
        if (c < '0' || c > '9') {
            throw std::invalid_argument("malformed month '" + std::string(text) + "'");
        }
    }
    const int year = std::stoi(digits.substr(0, 4));
    const int month = std::stoi(digits.substr(4, 2));
    if (month < 1 || month > 12) {
        throw std::invalid_argument("month out of range in '" + std::string(text) + "'");
    }
    return MonthStamp{year, month};
}

}  // namespace bubblescope
