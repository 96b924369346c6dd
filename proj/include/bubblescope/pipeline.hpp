#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bubblescope/calibrate.hpp"
#include "bubblescope/common.hpp"
#include "bubblescope/config.hpp"
#include "bubblescope/csv.hpp"
#include "bubblescope/engle_granger.hpp"
#include "bubblescope/filter.hpp"
#include "bubblescope/report.hpp"
#include "bubblescope/simulate.hpp"

namespace bubblescope {

// One run's worth of settings: inputs, window sweep, fit/filter knobs, and
// output destination. Built from a flat key=value config file with CLI-flag
// overrides applied on top; every key has a documented default.
struct RunConfig {
    std::string input;         // price CSV (required by scan/coint)
    std::string fundamentals;  // fundamentals CSV (required by coint)
    MonthStamp t2{2017, 5};
    MonthStamp t1_start{2008, 1};
    MonthStamp t1_end{2010, 10};
    FitConfig fit;
    std::string preset = "paper-consistent";
    double eg_level = 0.05;
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json

    void validate() const {
        if (!(t1_start <= t1_end)) {
            throw std::invalid_argument("run config: t1_start must not exceed t1_end");
        }
        if (!(t1_end < t2)) {
            throw std::invalid_argument("run config: t1_end must precede t2");
        }
        if (format != "csv" && format != "json") {
            throw std::invalid_argument("run config: format must be csv or json");
        }
        FilterThresholds::preset(preset);  // throws on unknown names
        if (!(eg_level > 0.0 && eg_level < 1.0)) {
            throw std::invalid_argument("run config: eg_level must be in (0,1)");
        }
        fit.validate();
    }

    FilterThresholds thresholds() const { return FilterThresholds::preset(preset); }

    // Applies one key=value setting; throws on unknown keys so typos fail a
    // run loudly instead of silently using a default.
    void apply(const std::string& key, const std::string& value) {
        if (key == "input") input = value;
        else if (key == "fundamentals") fundamentals = value;
        else if (key == "t2") t2 = detail::config_month(key, value);
        else if (key == "t1_start") t1_start = detail::config_month(key, value);
        else if (key == "t1_end") t1_end = detail::config_month(key, value);
        else if (key == "preset") preset = value;
        else if (key == "eg_level") eg_level = detail::config_double(key, value);
        else if (key == "out") out_dir = value;
        else if (key == "format") format = value;
        else if (key == "seed") fit.rng_seed = detail::config_seed(key, value);
        else if (key == "n_starts") fit.n_starts = static_cast<int>(detail::config_int(key, value));
        else if (key == "max_iterations") fit.max_iterations = static_cast<int>(detail::config_int(key, value));
        else if (key == "tc_offset_lo") fit.tc_offset_lo = detail::config_double(key, value);
        else if (key == "tc_offset_hi") fit.tc_offset_hi = detail::config_double(key, value);
        else if (key == "m_lo") fit.m_lo = detail::config_double(key, value);
        else if (key == "m_hi") fit.m_hi = detail::config_double(key, value);
        else if (key == "omega_lo") fit.omega_lo = detail::config_double(key, value);
        else if (key == "omega_hi") fit.omega_hi = detail::config_double(key, value);
        else if (key == "grad_tol") fit.grad_tol = detail::config_double(key, value);
        else if (key == "step_tol") fit.step_tol = detail::config_double(key, value);
        else if (key == "lambda_init") fit.lambda_init = detail::config_double(key, value);
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }

    void apply_file(const std::string& path) {
        for (const auto& [k, v] : load_key_value_file(path)) apply(k, v);
    }
};

namespace detail {

// Tracks files created by one pipeline run so a failure can remove the
// partial outputs instead of leaving a half-written report behind.
class OutputSink {
public:
    explicit OutputSink(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw io_error("cannot create output directory '" + dir + "'");
    }

    std::string write(const std::string& name, const std::string& content) {
        const std::filesystem::path p = dir_ / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw io_error("cannot write '" + p.string() + "'");
        written_.push_back(p);
        out << content;
        if (!out) throw io_error("write failed for '" + p.string() + "'");
        return p.string();
    }

    void discard_all() {
        for (const auto& p : written_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
        written_.clear();
    }

    std::vector<std::string> paths() const {
        std::vector<std::string> out;
        for (const auto& p : written_) out.push_back(p.string());
        return out;
    }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> written_;
};

inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace detail

// ---------------------------------------------------------------------------
// scan: rolling-window LPPLS sweep over every series in the input file
// ---------------------------------------------------------------------------

struct ScanRunResult {
    std::vector<std::pair<std::string, ScanResult>> scans;
    std::vector<StrengthSummaryRow> summary;
    std::vector<std::string> files;
};

inline ScanRunResult run_lppls_scan(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.input.empty()) throw std::invalid_argument("scan: no input file configured");
    const SeriesTable table = load_csv(cfg.input);
    const FilterThresholds th = cfg.thresholds();

    ScanRunResult result;
    for (const auto& [label, series] : table.columns) {
        ScanResult res = scan(series, cfg.t2, cfg.t1_start, cfg.t1_end, cfg.fit, th);
        StrengthSummaryRow row;
        row.label = label;
        row.windows = static_cast<int>(res.entries.size());
        row.positives = res.positives();
        row.strength = res.strength();
        result.summary.push_back(row);
        result.scans.emplace_back(label, std::move(res));
    }

    detail::OutputSink sink(cfg.out_dir);
    try {
        for (const auto& [label, res] : result.scans) {
            if (cfg.format == "csv") {
                sink.write("scan_" + label + ".csv", scan_table_csv(res));
            } else {
                sink.write("scan_" + label + ".json",
                           detail::dump(scan_table_json(label, res)));
            }
        }
        if (cfg.format == "csv") {
            sink.write("scan_summary.csv", strength_summary_csv(result.summary));
        } else {
            sink.write("scan_summary.json",
                       detail::dump(strength_summary_json(result.summary)));
        }
    } catch (...) {
        sink.discard_all();
        throw;
    }
    result.files = sink.paths();
    return result;
}

// ---------------------------------------------------------------------------
// coint: fundamental-misalignment test per series pair
// ---------------------------------------------------------------------------

struct FundamentalRunResult {
    std::vector<FundamentalRow> rows;
    std::vector<std::string> files;
};

inline FundamentalRunResult run_fundamental_test(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.input.empty()) throw std::invalid_argument("coint: no input file configured");
    if (cfg.fundamentals.empty()) {
        throw std::invalid_argument("coint: no fundamentals file configured");
    }
    const SeriesTable prices = load_csv(cfg.input);
    const SeriesTable funds = load_csv(cfg.fundamentals);

    FundamentalRunResult result;
    for (const auto& [label, price] : prices.columns) {
        if (!funds.has(label)) {
            throw std::invalid_argument("coint: fundamentals file has no column '" + label +
                                        "'");
        }
        FundamentalRow row;
        row.label = label;
        row.result = fundamental_bubble_test(price, funds.get(label), cfg.eg_level);
        result.rows.push_back(std::move(row));
    }

    detail::OutputSink sink(cfg.out_dir);
    try {
        if (cfg.format == "csv") {
            sink.write("coint.csv", fundamental_table_csv(result.rows));
        } else {
            sink.write("coint.json", detail::dump(fundamental_table_json(result.rows)));
        }
    } catch (...) {
        sink.discard_all();
        throw;
    }
    result.files = sink.paths();
    return result;
}

// ---------------------------------------------------------------------------
// summary: joins the two pipelines' JSON outputs into the final verdict table
// ---------------------------------------------------------------------------

struct SummaryRunResult {
    std::vector<DiagnosisSummary> rows;
    std::vector<std::string> files;
};

inline SummaryRunResult run_summary(const RunConfig& cfg) {
    cfg.validate();
    const std::filesystem::path dir(cfg.out_dir);
    const auto scan_path = dir / "scan_summary.json";
    const auto coint_path = dir / "coint.json";
    for (const auto& p : {scan_path, coint_path}) {
        if (!std::filesystem::exists(p)) {
            throw io_error("summary: missing pipeline output '" + p.string() +
                           "' (run scan and coint with format=json first)");
        }
    }
    json scan_doc, coint_doc;
    try {
        std::ifstream(scan_path) >> scan_doc;
        std::ifstream(coint_path) >> coint_doc;
    } catch (const std::exception& e) {
        throw io_error(std::string("summary: cannot parse pipeline outputs: ") + e.what());
    }

    std::map<std::string, const json*> coint_by_label;
    for (const auto& row : coint_doc) coint_by_label[row.at("series")] = &row;

    SummaryRunResult result;
    for (const auto& row : scan_doc) {
        DiagnosisSummary s;
        s.label = row.at("series");
        s.lppls_bubble = row.at("verdict") == "Y";
        s.strength = row.at("strength").is_number() ? row.at("strength").get<double>() : 0.0;
        const auto it = coint_by_label.find(s.label);
        if (it == coint_by_label.end()) {
            throw std::invalid_argument("summary: series '" + s.label +
                                        "' has no cointegration row");
        }
        s.eg_bubble = it->second->at("bubble").get<bool>();
        result.rows.push_back(std::move(s));
    }

    detail::OutputSink sink(cfg.out_dir);
    try {
        if (cfg.format == "csv") {
            sink.write("summary.csv", summary_csv(result.rows));
        } else {
            sink.write("summary.json", detail::dump(summary_json(result.rows)));
        }
    } catch (...) {
        sink.discard_all();
        throw;
    }
    result.files = sink.paths();
    return result;
}

// ---------------------------------------------------------------------------
// simulate: synthetic path emission in the standard CSV layout
// ---------------------------------------------------------------------------

struct SimRunConfig {
    SimConfig sim;
    std::string label = "sim";
    std::string out_dir = "out";

    void apply(const std::string& key, const std::string& value) {
        if (key == "alpha") sim.hp.alpha = detail::config_double(key, value);
        else if (key == "beta") sim.hp.beta_osc = detail::config_double(key, value);
        else if (key == "m") sim.hp.m = detail::config_double(key, value);
        else if (key == "omega") sim.hp.omega = detail::config_double(key, value);
        else if (key == "tc") sim.hp.t_c = detail::config_double(key, value);
        else if (key == "phi_prime") sim.hp.phi_prime = detail::config_double(key, value);
        else if (key == "kappa") sim.hp.kappa = detail::config_double(key, value);
        else if (key == "sigma") sim.sigma = detail::config_double(key, value);
        else if (key == "p0") sim.p0 = detail::config_double(key, value);
        else if (key == "horizon") sim.horizon = static_cast<int>(detail::config_int(key, value));
        else if (key == "step") sim.step = detail::config_double(key, value);
        else if (key == "start") sim.start = detail::config_month(key, value);
        else if (key == "seed") sim.rng_seed = detail::config_seed(key, value);
        else if (key == "label") label = value;
        else if (key == "out") out_dir = value;
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }

    void apply_file(const std::string& path) {
        for (const auto& [k, v] : load_key_value_file(path)) apply(k, v);
    }
};

struct SimRunResult {
    SimPath path{PriceSeries(MonthStamp{2000, 1}, {1.0, 1.0}), {}, {}};
    std::vector<std::string> files;
};

inline SimRunResult run_simulate(const SimRunConfig& cfg) {
    SimRunResult result;
    result.path = simulate(cfg.sim);

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw io_error("cannot create output directory '" + cfg.out_dir + "'");
    const auto p = std::filesystem::path(cfg.out_dir) / (cfg.label + ".csv");
    try {
        // standard series layout so simulated data feeds the scan directly
        save_csv(p.string(), {{cfg.label, result.path.prices}});
    } catch (...) {
        std::error_code rm;
        std::filesystem::remove(p, rm);
        throw;
    }
    result.files.push_back(p.string());
    return result;
}

// ---------------------------------------------------------------------------
// qualify-fixtures: replay a previously calibrated table through the filter
// ---------------------------------------------------------------------------

struct FixtureReplayRunResult {
    std::vector<FixtureRow> rows;
    std::vector<QualificationReport> reports;
    int matches = 0;
    std::vector<std::string> files;
};

inline FixtureReplayRunResult run_qualify_fixtures(const std::string& fixture_path,
                                                   const RunConfig& cfg) {
    cfg.validate();
    FixtureReplayRunResult result;
    result.rows = load_fixture_csv(fixture_path);
    result.reports = replay_fixture(result.rows, cfg.t2, cfg.thresholds());
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (result.reports[i].indicator == result.rows[i].ind) ++result.matches;
    }

    detail::OutputSink sink(cfg.out_dir);
    try {
        if (cfg.format == "csv") {
            std::string out = "t1,tc,m,w,A,B,C,BmCw,Ind,Ind_replayed,oscillation_count\n";
            for (std::size_t i = 0; i < result.rows.size(); ++i) {
                const auto& r = result.rows[i];
                const auto& q = result.reports[i];
                out += r.t1.str() + ',' + r.tc.str() + ',' + format_fixed3(r.m) + ',' +
                       format_fixed3(r.w) + ',' + format_fixed3(r.A) + ',' +
                       format_fixed3(r.B) + ',' + format_fixed3(r.C) + ',' +
                       format_fixed3(r.BmCw) + ',' + std::to_string(r.ind) + ',' +
                       std::to_string(q.indicator) + ',' + format_fixed3(q.oscillation_count) +
                       '\n';
            }
            sink.write("replay.csv", out);
        } else {
            json rows = json::array();
            for (std::size_t i = 0; i < result.rows.size(); ++i) {
                const auto& r = result.rows[i];
                const auto& q = result.reports[i];
                json row;
                row["t1"] = r.t1.str();
                row["tc"] = r.tc.str();
                row["m"] = json_number(r.m);
                row["w"] = json_number(r.w);
                row["A"] = json_number(r.A);
                row["B"] = json_number(r.B);
                row["C"] = json_number(r.C);
                row["BmCw"] = json_number(r.BmCw);
                row["Ind"] = r.ind;
                row["Ind_replayed"] = q.indicator;
                row["oscillation_count"] = json_number(q.oscillation_count);
                row["conditions"] = {{"m", q.c_m},
                                     {"omega", q.c_omega},
                                     {"tc", q.c_tc},
                                     {"oscillation", q.c_osc},
                                     {"damping", q.c_damp}};
                rows.push_back(std::move(row));
            }
            json doc;
            doc["fixture"] = fixture_path;
            doc["t2"] = cfg.t2.str();
            doc["preset"] = cfg.preset;
            doc["rows_total"] = result.rows.size();
            doc["rows_matching"] = result.matches;
            doc["rows"] = std::move(rows);
            sink.write("replay.json", detail::dump(doc));
        }
    } catch (...) {
        sink.discard_all();
        throw;
    }
    result.files = sink.paths();
    return result;
}

}  // namespace bubblescope
