#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "bubblescope/engle_granger.hpp"
#include "bubblescope/filter.hpp"
#include "bubblescope/month.hpp"

namespace bubblescope {

// Insertion-ordered JSON so identical runs serialize to identical bytes.
using json = nlohmann::ordered_json;

// Full-precision text form: round-trips the double exactly.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Human table form, three decimals (the rounding that makes the shipped
// fixture tables' slope-ratio column irreproducible; machine consumers
// should read the JSON output instead).
inline std::string format_fixed3(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", x);
    return buf;
}

// Significance markers at the 10/5/1% levels.
inline std::string stars(double p) {
    if (p < 0.01) return "★★★";
    if (p < 0.05) return "★★";
    if (p < 0.10) return "★";
    return "";
}

// Non-finite doubles have no JSON number form; encode them as strings so the
// emitted documents stay valid and deterministic.
inline json json_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

// ---------------------------------------------------------------------------
// LPPLS scan tables
// ---------------------------------------------------------------------------

// Critical time as a calendar month (nearest month on the index grid).
inline MonthStamp tc_month(double t_c) {
    return MonthStamp::from_index(static_cast<int>(std::lround(t_c)));
}

// Appendix-layout CSV: one row per window, three-decimal fit columns.
inline std::string scan_table_csv(const ScanResult& res) {
    std::string out = "t1,tc,m,w,A,B,C,BmCw,Ind\n";
    for (const auto& e : res.entries) {
        const LPPLSParams& p = e.fit.params;
        out += e.t1.str() + ',' + tc_month(p.t_c).str() + ',' + format_fixed3(p.m) + ',' +
               format_fixed3(p.omega) + ',' + format_fixed3(p.A) + ',' + format_fixed3(p.B) +
               ',' + format_fixed3(p.C) + ',' + format_fixed3(e.report.damping) + ',' +
               std::to_string(e.report.indicator) + '\n';
    }
    return out;
}

inline json scan_table_json(const std::string& label, const ScanResult& res) {
    json rows = json::array();
    for (const auto& e : res.entries) {
        const LPPLSParams& p = e.fit.params;
        json row;
        row["t1"] = e.t1.str();
        row["tc_month"] = tc_month(p.t_c).str();
        row["tc"] = json_number(p.t_c);
        row["m"] = json_number(p.m);
        row["w"] = json_number(p.omega);
        row["A"] = json_number(p.A);
        row["B"] = json_number(p.B);
        row["C"] = json_number(p.C);
        row["phi"] = json_number(p.phi);
        row["sse"] = json_number(e.fit.sse);
        row["converged"] = e.fit.converged;
        row["condition_flag"] = e.fit.condition_flag;
        row["BmCw"] = json_number(e.report.damping);
        row["oscillation_count"] = json_number(e.report.oscillation_count);
        row["conditions"] = {{"m", e.report.c_m},
                             {"omega", e.report.c_omega},
                             {"tc", e.report.c_tc},
                             {"oscillation", e.report.c_osc},
                             {"damping", e.report.c_damp}};
        row["Ind"] = e.report.indicator;
        if (!e.note.empty()) row["note"] = e.note;
        rows.push_back(std::move(row));
    }
    json doc;
    doc["series"] = label;
    doc["t2"] = res.t2.str();
    doc["windows"] = res.entries.size();
    doc["positives"] = res.positives();
    doc["strength"] = json_number(res.strength());
    doc["rows"] = std::move(rows);
    return doc;
}

// One scan-summary line per series: positives, strength, Y/N verdict.
struct StrengthSummaryRow {
    std::string label;
    int windows = 0;
    int positives = 0;
    double strength = 0.0;

    bool verdict() const { return positives > 0; }
};

inline std::string strength_summary_csv(const std::vector<StrengthSummaryRow>& rows) {
    std::string out = "series,windows,positives,strength,verdict\n";
    for (const auto& r : rows) {
        char pct[32];
        std::snprintf(pct, sizeof(pct), "%.2f%%", 100.0 * r.strength);
        out += r.label + ',' + std::to_string(r.windows) + ',' + std::to_string(r.positives) +
               ',' + pct + ',' + (r.verdict() ? 'Y' : 'N') + '\n';
    }
    return out;
}

inline json strength_summary_json(const std::vector<StrengthSummaryRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json row;
        row["series"] = r.label;
        row["windows"] = r.windows;
        row["positives"] = r.positives;
        row["strength"] = json_number(r.strength);
        row["verdict"] = r.verdict() ? "Y" : "N";
        arr.push_back(std::move(row));
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Fundamental (cointegration) tables
// ---------------------------------------------------------------------------

struct FundamentalRow {
    std::string label;
    CointegrationResult result;
};

// Grid layout: statistic with the p-value parenthesized beneath-style and
// significance stars; rows excluded by the stationarity pre-check are N/A.
inline std::string fundamental_table_csv(const std::vector<FundamentalRow>& rows) {
    std::string out = "series,eg_statistic,eg_p_value,stars,price_order,fundamental_order,cointegrated_5pct,bubble,note\n";
    for (const auto& r : rows) {
        const CointegrationResult& c = r.result;
        out += r.label + ',';
        if (c.eg_statistic) {
            out += format_fixed3(*c.eg_statistic) + ",(" + format_fixed3(*c.eg_p_value) + ")," +
                   stars(*c.eg_p_value) + ',';
        } else {
            out += "N/A,N/A,,";
        }
        out += (c.y_order ? std::to_string(*c.y_order) : std::string("N/A")) + ',';
        out += (c.x_order ? std::to_string(*c.x_order) : std::string("N/A")) + ',';
        out += (c.eg_statistic ? (c.cointegrated_5pct ? "Y" : "N") : "N/A");
        out += std::string(",") + (c.bubble_flag ? 'Y' : 'N') + ',' + c.note + '\n';
    }
    return out;
}

inline json fundamental_table_json(const std::vector<FundamentalRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        const CointegrationResult& c = r.result;
        json row;
        row["series"] = r.label;
        row["eg_statistic"] = c.eg_statistic ? json_number(*c.eg_statistic) : json(nullptr);
        row["eg_p_value"] = c.eg_p_value ? json_number(*c.eg_p_value) : json(nullptr);
        row["stars"] = c.eg_p_value ? stars(*c.eg_p_value) : "";
        row["price_order"] = c.y_order ? json(*c.y_order) : json(nullptr);
        row["fundamental_order"] = c.x_order ? json(*c.x_order) : json(nullptr);
        row["cointegrated_1pct"] = c.eg_statistic ? json(c.cointegrated_1pct) : json(nullptr);
        row["cointegrated_5pct"] = c.eg_statistic ? json(c.cointegrated_5pct) : json(nullptr);
        row["cointegrated_10pct"] = c.eg_statistic ? json(c.cointegrated_10pct) : json(nullptr);
        row["degenerate"] = c.degenerate;
        row["bubble"] = c.bubble_flag;
        row["note"] = c.note;
        arr.push_back(std::move(row));
    }
    return arr;
}

// ---------------------------------------------------------------------------
// Combined diagnosis summary
// ---------------------------------------------------------------------------

// Per-series verdict pair; overall fires when either diagnostic does.
struct DiagnosisSummary {
    std::string label;
    bool eg_bubble = false;
    bool lppls_bubble = false;
    double strength = 0.0;

    bool overall() const { return eg_bubble || lppls_bubble; }
};

inline std::string summary_csv(const std::vector<DiagnosisSummary>& rows) {
    std::string out = "series,EG,LPPLS,strength,overall\n";
    for (const auto& r : rows) {
        char pct[32];
        std::snprintf(pct, sizeof(pct), "%.2f%%", 100.0 * r.strength);
        out += r.label + ',' + (r.eg_bubble ? 'Y' : 'N') + ',' + (r.lppls_bubble ? 'Y' : 'N') +
               ',' + pct + ',' + (r.overall() ? 'Y' : 'N') + '\n';
    }
    return out;
}

inline json summary_json(const std::vector<DiagnosisSummary>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json row;
        row["series"] = r.label;
        row["EG"] = r.eg_bubble ? "Y" : "N";
        row["LPPLS"] = r.lppls_bubble ? "Y" : "N";
        row["strength"] = json_number(r.strength);
        row["overall"] = r.overall() ? "Y" : "N";
        arr.push_back(std::move(row));
    }
    return arr;
}

}  // namespace bubblescope
