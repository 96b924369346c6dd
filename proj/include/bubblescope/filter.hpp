#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bubblescope/calibrate.hpp"
#include "bubblescope/csv.hpp"
#include "bubblescope/lppls.hpp"
#include "bubblescope/month.hpp"
#include "bubblescope/series.hpp"

namespace bubblescope {

// Qualification thresholds for a fitted window. Each condition can be
// switched off; the shipped presets differ only in the oscillation-count
// condition, which the published indicator columns contradict (several
// flagged windows count fewer than 2.5 oscillations by direct arithmetic).
struct FilterThresholds {
    double m_lo = 0.01;
    double m_hi = 0.99;
    double omega_lo = 2.0;
    double omega_hi = 25.0;
    double tc_frac_lo = -0.05;  // of window length, relative to t2
    double tc_frac_hi = 0.10;
    double oscillation_min = 2.5;
    double damping_min = 1.0;
    bool enable_m = true;
    bool enable_omega = true;
    bool enable_tc = true;
    bool enable_oscillation = true;
    bool enable_damping = true;

    void validate() const {
        if (!(m_lo < m_hi) || !(omega_lo < omega_hi) || !(tc_frac_lo < tc_frac_hi)) {
            throw std::invalid_argument("filter thresholds: intervals must be non-empty");
        }
    }

    static FilterThresholds strict() { return {}; }

    // All conditions except the oscillation count, which reproduces the
    // published indicator columns exactly.
    static FilterThresholds paper_consistent() {
        FilterThresholds th;
        th.enable_oscillation = false;
        return th;
    }

    static FilterThresholds preset(const std::string& name) {
        if (name == "strict") return strict();
        if (name == "paper-consistent") return paper_consistent();
        throw std::invalid_argument("unknown preset '" + name +
                                    "' (expected paper-consistent or strict)");
    }
};

struct QualificationReport {
    bool c_m = false;
    bool c_omega = false;
    bool c_tc = false;
    bool c_osc = false;
    bool c_damp = false;
    double oscillation_count = 0.0;
    double damping = 0.0;
    int indicator = 0;
};

// Number of log-periodic oscillations visible inside the window:
// (omega/2pi) * ln[(t_c - t1)/(t_c - t2)]. Degenerate placements: t_c = t2
// counts infinitely many (the singularity sits on the window edge) and passes;
// t_c inside the window leaves the count undefined (NaN) and fails.
inline double oscillation_count(double t1, double t2, double t_c, double omega) {
    if (!(t_c > t1)) {
        throw std::invalid_argument("oscillation_count: t_c must exceed the window start");
    }
    if (t_c < t2) return std::numeric_limits<double>::quiet_NaN();
    if (t_c == t2) return std::numeric_limits<double>::infinity();
    return omega / (2.0 * std::numbers::pi) * std::log((t_c - t1) / (t_c - t2));
}

// Ratio of power-law to oscillatory slope, |m*B / (omega*C)|. A vanishing
// oscillation amplitude is maximally damped (+inf) unless the power term
// vanishes too, in which case there is nothing to damp (0).
inline double damping(double m, double B, double omega, double C) {
    const double num = std::abs(m * B);
    const double den = std::abs(omega * C);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

// Evaluates the five filter conditions. damping_override substitutes a
// precomputed slope ratio (fixture replay: the published tables round B and C
// to three decimals, which destroys the ratio, but publish it separately).
inline QualificationReport qualify(const LPPLSParams& p, const Window& w,
                                   const FilterThresholds& th,
                                   std::optional<double> damping_override = {}) {
    th.validate();
    const double t1 = static_cast<double>(w.t1.index());
    const double t2 = static_cast<double>(w.t2.index());
    const double dt = t2 - t1;

    QualificationReport q;
    q.c_m = p.m >= th.m_lo && p.m <= th.m_hi;
    q.c_omega = p.omega >= th.omega_lo && p.omega <= th.omega_hi;
    q.c_tc = p.t_c >= t2 + th.tc_frac_lo * dt && p.t_c <= t2 + th.tc_frac_hi * dt;
    q.oscillation_count = oscillation_count(t1, t2, p.t_c, p.omega);
    q.c_osc = q.oscillation_count >= th.oscillation_min;  // NaN fails
    q.damping = damping_override ? *damping_override : damping(p.m, p.B, p.omega, p.C);
    q.c_damp = q.damping >= th.damping_min;

    const bool pass = (!th.enable_m || q.c_m) && (!th.enable_omega || q.c_omega) &&
                      (!th.enable_tc || q.c_tc) && (!th.enable_oscillation || q.c_osc) &&
                      (!th.enable_damping || q.c_damp);
    q.indicator = pass ? 1 : 0;
    return q;
}

struct ScanEntry {
    MonthStamp t1;
    LPPLSFit fit;
    QualificationReport report;
    std::string note;  // nonempty when the window's fit failed outright
};

struct ScanResult {
    MonthStamp t2;
    std::vector<ScanEntry> entries;

    int positives() const {
        int n = 0;
        for (const auto& e : entries) n += e.report.indicator;
        return n;
    }
    double strength() const {
        return entries.empty() ? 0.0 : static_cast<double>(positives()) / entries.size();
    }
};

// Rolling-window scan: fixed t2, t1 advancing monthly over [t1_start, t1_end].
// A window whose fit throws is recorded as indicator 0 with the failure note;
// the scan always completes.
inline ScanResult scan(const PriceSeries& series, MonthStamp t2, MonthStamp t1_start,
                       MonthStamp t1_end, const FitConfig& cfg,
                       const FilterThresholds& th) {
    if (month_diff(t1_end, t1_start) < 0) {
        throw std::invalid_argument("scan: t1 range is empty");
    }
    // Validate every window up front: construction checks ordering/length,
    // coverage checks the series span.
    for (MonthStamp t1 = t1_start; t1 <= t1_end; t1 = t1.plus_months(1)) {
        const Window w(t1, t2);
        if (!series.covers(w)) {
            throw std::invalid_argument("scan: window " + t1.str() + ".." + t2.str() +
                                        " outside series span");
        }
    }

    ScanResult result;
    result.t2 = t2;
    for (MonthStamp t1 = t1_start; t1 <= t1_end; t1 = t1.plus_months(1)) {
        const Window w(t1, t2);
        ScanEntry entry{t1, LPPLSFit(w), {}, {}};
        try {
            entry.fit = fit_window(series, w, cfg);
            entry.report = qualify(entry.fit.params, w, th);
        } catch (const std::exception& e) {
            entry.report = QualificationReport{};  // indicator 0
            entry.note = e.what();
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

// One row of a calibration-output table: window start, fitted parameters, the
// published slope ratio and the published indicator.
struct FixtureRow {
    MonthStamp t1;
    MonthStamp tc;
    double m = 0.0;
    double w = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double BmCw = 0.0;
    int ind = 0;
};

inline std::vector<FixtureRow> load_fixture_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw io_error("'" + path + "' is empty");
    if (detail::trim(line) != "t1,tc,m,w,A,B,C,BmCw,Ind") {
        throw io_error("'" + path + "' header must be t1,tc,m,w,A,B,C,BmCw,Ind");
    }
    std::vector<FixtureRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 9) {
            throw io_error("line " + std::to_string(line_no) + ": expected 9 fields");
        }
        FixtureRow r;
        try {
            r.t1 = parse_month(f[0]);
            r.tc = parse_month(f[1]);
        } catch (const std::exception& e) {
            throw io_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        r.m = detail::parse_number(f[2], line_no, "m");
        r.w = detail::parse_number(f[3], line_no, "w");
        r.A = detail::parse_number(f[4], line_no, "A");
        r.B = detail::parse_number(f[5], line_no, "B");
        r.C = detail::parse_number(f[6], line_no, "C");
        r.BmCw = detail::parse_number(f[7], line_no, "BmCw");
        const double ind = detail::parse_number(f[8], line_no, "Ind");
        if (ind != 0.0 && ind != 1.0) {
            throw io_error("line " + std::to_string(line_no) + ": Ind must be 0 or 1");
        }
        r.ind = static_cast<int>(ind);
        rows.push_back(r);
    }
    return rows;
}

// Re-evaluates the filter on previously calibrated rows, consuming the
// published slope-ratio column instead of the rounded B and C.
inline std::vector<QualificationReport> replay_fixture(const std::vector<FixtureRow>& rows,
                                                       MonthStamp t2,
                                                       const FilterThresholds& th) {
    std::vector<QualificationReport> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        LPPLSParams p;
        p.t_c = static_cast<double>(r.tc.index());
        p.m = r.m;
        p.omega = r.w;
        p.A = r.A;
        p.B = r.B;
        p.C = r.C;
        out.push_back(qualify(p, Window(r.t1, t2), th, r.BmCw));
    }
    return out;
}

}  // namespace bubblescope
