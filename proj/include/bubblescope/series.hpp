#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bubblescope/month.hpp"

namespace bubblescope {

// Fit windows [t1, t2], both ends inclusive. A calibration window needs
// enough observations for the 7-parameter model to be identified.
inline constexpr int kMinWindowObservations = 24;

struct Window {
    MonthStamp t1;
    MonthStamp t2;

    Window(MonthStamp start, MonthStamp end) : t1(start), t2(end) {
        if (!(t1 < t2)) {
            throw std::invalid_argument("window start " + t1.str() +
                                        " must precede end " + t2.str());
        }
        if (n_months() < kMinWindowObservations) {
            throw std::invalid_argument("window " + t1.str() + ".." + t2.str() +
                                        " shorter than " +
                                        std::to_string(kMinWindowObservations) +
                                        " observations");
        }
    }

    int dt_months() const { return month_diff(t2, t1); }
    int n_months() const { return dt_months() + 1; }
};

// Monthly price observations on a gapless grid, values strictly positive so
// the log-price always exists.
class PriceSeries {
public:
    PriceSeries(MonthStamp start, std::vector<double> values)
        : start_(start), values_(std::move(values)) {
        if (values_.size() < 2) {
            throw std::invalid_argument("price series needs at least 2 observations");
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
                throw std::invalid_argument("non-positive price at " +
                                            stamp_at(i).str());
            }
        }
    }

    MonthStamp start() const { return start_; }
    MonthStamp end() const { return start_.plus_months(static_cast<int>(values_.size()) - 1); }
    std::size_t size() const { return values_.size(); }

    MonthStamp stamp_at(std::size_t i) const {
        return start_.plus_months(static_cast<int>(i));
    }

    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    double value_at(MonthStamp t) const { return values_[offset_of(t)]; }

    bool covers(const Window& w) const {
        return month_diff(w.t1, start()) >= 0 && month_diff(end(), w.t2) >= 0;
    }

    std::vector<double> log_values() const {
        std::vector<double> out(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) out[i] = std::log(values_[i]);
        return out;
    }

    // Month indices (epoch 2000-01 = 0) aligned with values().
    std::vector<double> month_grid() const {
        std::vector<double> out(values_.size());
        const int base = start_.index();
        for (std::size_t i = 0; i < values_.size(); ++i) {
            out[i] = static_cast<double>(base + static_cast<int>(i));
        }
        return out;
    }

private:
    std::size_t offset_of(MonthStamp t) const {
        const int off = month_diff(t, start());
        if (off < 0 || off >= static_cast<int>(values_.size())) {
            throw std::out_of_range("month " + t.str() + " outside series span " +
                                    start().str() + ".." + end().str());
        }
        return static_cast<std::size_t>(off);
    }

    MonthStamp start_;
    std::vector<double> values_;
};

// Contiguous sub-series covering [w.t1, w.t2] inclusive.
inline PriceSeries slice(const PriceSeries& series, const Window& w) {
    if (!series.covers(w)) {
        throw std::out_of_range("window " + w.t1.str() + ".." + w.t2.str() +
                                " outside series span " + series.start().str() +
                                ".." + series.end().str());
    }
    const int off = month_diff(w.t1, series.start());
    const auto first = series.values().begin() + off;
    return PriceSeries(w.t1, std::vector<double>(first, first + w.n_months()));
}

}  // namespace bubblescope
