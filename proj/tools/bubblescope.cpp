// bubblescope — LPPLS bubble scanner and fundamental-misalignment tester.
//
// Subcommands:
//   scan              rolling-window LPPLS sweep + qualification filter
//   coint             price/fundamental cointegration (bubble) test
//   summary           join scan + coint outputs into the final verdict table
//   simulate          generate a synthetic hazard-driven price path
//   qualify-fixtures  replay a calibrated parameter table through the filter
//
// Settings come from a flat key=value config file (--config), overridden by
// CLI flags; BUBBLESCOPE_SEED in the environment overrides the seed from both.
// Exit codes: 0 success, 1 validation error, 2 I/O error, 3 numeric error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "bubblescope/bubblescope.hpp"

namespace {

using namespace bubblescope;

struct CommonFlags {
    std::optional<std::string> input;
    std::optional<std::string> fundamentals;
    std::optional<std::string> config;
    std::optional<std::string> t2;
    std::optional<std::string> t1_start;
    std::optional<std::string> t1_end;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::string> preset;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--input", f.input, "price series CSV (date column + one column per series)");
    cmd->add_option("--config", f.config, "key=value settings file, applied before flags");
    cmd->add_option("--t2", f.t2, "window end month, YYYYMM or YYYY-MM [default 201705]");
    cmd->add_option("--t1-start", f.t1_start, "first window start month [default 200801]");
    cmd->add_option("--t1-end", f.t1_end, "last window start month [default 201010]");
    cmd->add_option("--seed", f.seed, "multistart RNG seed [default 0]");
    cmd->add_option("--out", f.out, "output directory [default out]");
    cmd->add_option("--format", f.format, "output format: csv or json [default csv]")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--preset", f.preset,
                    "filter preset: paper-consistent or strict [default paper-consistent]")
        ->check(CLI::IsMember({"paper-consistent", "strict"}));
}

// Precedence: built-in defaults < config file < CLI flags < BUBBLESCOPE_SEED.
RunConfig build_run_config(const CommonFlags& f) {
    RunConfig cfg;
    if (f.config) cfg.apply_file(*f.config);
    if (f.input) cfg.input = *f.input;
    if (f.fundamentals) cfg.fundamentals = *f.fundamentals;
    if (f.t2) cfg.t2 = parse_month(*f.t2);
    if (f.t1_start) cfg.t1_start = parse_month(*f.t1_start);
    if (f.t1_end) cfg.t1_end = parse_month(*f.t1_end);
    if (f.seed) cfg.fit.rng_seed = *f.seed;
    if (f.out) cfg.out_dir = *f.out;
    if (f.format) cfg.format = *f.format;
    if (f.preset) cfg.preset = *f.preset;
    if (const char* env = std::getenv("BUBBLESCOPE_SEED")) {
        cfg.fit.rng_seed = detail::config_seed("BUBBLESCOPE_SEED", env);
    }
    cfg.validate();
    return cfg;
}

void list_files(const std::vector<std::string>& files) {
    for (const auto& f : files) std::cout << "wrote " << f << '\n';
}

int cmd_scan(const CommonFlags& f) {
    const RunConfig cfg = build_run_config(f);
    const ScanRunResult res = run_lppls_scan(cfg);
    for (const auto& row : res.summary) {
        std::cout << row.label << ": " << row.positives << '/' << row.windows
                  << " windows positive (" << format_fixed3(100.0 * row.strength) << "%) -> "
                  << (row.verdict() ? 'Y' : 'N') << '\n';
    }
    list_files(res.files);
    return 0;
}

int cmd_coint(const CommonFlags& f) {
    const RunConfig cfg = build_run_config(f);
    const FundamentalRunResult res = run_fundamental_test(cfg);
    for (const auto& row : res.rows) {
        std::cout << row.label << ": bubble " << (row.result.bubble_flag ? 'Y' : 'N');
        if (!row.result.note.empty()) std::cout << " (" << row.result.note << ')';
        std::cout << '\n';
    }
    list_files(res.files);
    return 0;
}

int cmd_summary(const CommonFlags& f) {
    const RunConfig cfg = build_run_config(f);
    const SummaryRunResult res = run_summary(cfg);
    for (const auto& row : res.rows) {
        std::cout << row.label << ": EG " << (row.eg_bubble ? 'Y' : 'N') << ", LPPLS "
                  << (row.lppls_bubble ? 'Y' : 'N') << " -> overall "
                  << (row.overall() ? 'Y' : 'N') << '\n';
    }
    list_files(res.files);
    return 0;
}

int cmd_simulate(const std::optional<std::string>& config_path,
                 const std::vector<std::string>& sets,
                 const std::optional<std::uint64_t>& seed,
                 const std::optional<std::string>& out) {
    SimRunConfig cfg;
    if (config_path) cfg.apply_file(*config_path);
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        }
        cfg.apply(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) cfg.sim.rng_seed = *seed;
    if (out) cfg.out_dir = *out;
    if (const char* env = std::getenv("BUBBLESCOPE_SEED")) {
        cfg.sim.rng_seed = detail::config_seed("BUBBLESCOPE_SEED", env);
    }

    const SimRunResult res = run_simulate(cfg);
    if (res.path.crash_time) {
        std::cout << "crash in month " << res.path.crash_time->str() << '\n';
    } else {
        std::cout << "no crash within the horizon\n";
    }
    list_files(res.files);
    return 0;
}

int cmd_qualify_fixtures(const std::string& fixture, const CommonFlags& f) {
    const RunConfig cfg = build_run_config(f);
    const FixtureReplayRunResult res = run_qualify_fixtures(fixture, cfg);
    std::cout << res.matches << '/' << res.rows.size()
              << " rows reproduce the published indicator\n";
    list_files(res.files);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LPPLS bubble scanner and fundamental-misalignment tester"};
    app.require_subcommand(1);

    CommonFlags scan_flags, coint_flags, summary_flags, qualify_flags;

    auto* scan_cmd = app.add_subcommand("scan", "rolling-window LPPLS sweep");
    add_common_flags(scan_cmd, scan_flags);

    auto* coint_cmd = app.add_subcommand("coint", "price/fundamental cointegration test");
    add_common_flags(coint_cmd, coint_flags);
    coint_cmd->add_option("--fundamentals", coint_flags.fundamentals,
                          "fundamentals CSV with matching series columns");

    auto* summary_cmd = app.add_subcommand("summary", "combine scan and coint outputs");
    add_common_flags(summary_cmd, summary_flags);

    std::optional<std::string> sim_config;
    std::vector<std::string> sim_sets;
    std::optional<std::uint64_t> sim_seed;
    std::optional<std::string> sim_out;
    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic price path");
    sim_cmd->add_option("--config", sim_config, "key=value settings file");
    sim_cmd->add_option("--set", sim_sets,
                        "override one setting, key=value (repeatable); keys: alpha [1], "
                        "beta [0], m [0.5], omega [8], tc [0], phi_prime [0], kappa [0.2], "
                        "sigma [0], p0 [100], horizon [120], step [0.03125], start [200801], "
                        "seed [0], label [sim], out [out]");
    sim_cmd->add_option("--seed", sim_seed, "RNG seed [default 0]");
    sim_cmd->add_option("--out", sim_out, "output directory [default out]");

    std::string fixture_path;
    auto* qualify_cmd =
        app.add_subcommand("qualify-fixtures", "replay a calibrated table through the filter");
    qualify_cmd->add_option("fixture", fixture_path, "fixture CSV (t1,tc,m,w,A,B,C,BmCw,Ind)")
        ->required();
    add_common_flags(qualify_cmd, qualify_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 1;
    }

    try {
        if (scan_cmd->parsed()) return cmd_scan(scan_flags);
        if (coint_cmd->parsed()) return cmd_coint(coint_flags);
        if (summary_cmd->parsed()) return cmd_summary(summary_flags);
        if (sim_cmd->parsed()) return cmd_simulate(sim_config, sim_sets, sim_seed, sim_out);
        if (qualify_cmd->parsed()) return cmd_qualify_fixtures(fixture_path, qualify_flags);
    } catch (const bubblescope::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const bubblescope::numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
