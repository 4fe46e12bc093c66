// Experiment driver: regime classification, runs, rate reports, validation
// suites and viscosity-path export.

#include "piatr/config.hpp"
#include "piatr/corpus.hpp"
#include "piatr/diagnostics.hpp"
#include "piatr/params.hpp"
#include "piatr/solver.hpp"
#include "piatr/tikhonov_path.hpp"
#include "piatr/trace_io.hpp"
#include "piatr/validate.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace piatr;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1; // a check or rate comparison failed
constexpr int kExitInvalid = 2;
constexpr int kExitAbort = 3;

constexpr double kRateTolerance = 0.15;
constexpr const char* kOutDirEnv = "PIATR_OUT_DIR";

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

fs::path output_dir() {
    const char* env = std::getenv(kOutDirEnv);
    return env && *env ? fs::path(env) : fs::current_path();
}

fs::path default_out(const std::string& given, const char* name) {
    if (!given.empty()) return given;
    return output_dir() / name;
}

fs::path sidecar_for(const fs::path& trace) {
    fs::path p = trace;
    return p.replace_extension(".cfg");
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

// Schedule flags shared by regime, rates and path.
struct ScheduleFlags {
    ParamSchedule sched;
    std::vector<std::pair<const char*, CLI::Option*>> opts;

    void attach(CLI::App& app) {
        opts = {{"schedule.alpha", app.add_option("--alpha", sched.alpha, "inertial constant")},
                {"schedule.q", app.add_option("--q", sched.q, "inertial exponent")},
                {"schedule.c", app.add_option("--c", sched.c, "Tikhonov constant")},
                {"schedule.p", app.add_option("--p", sched.p, "Tikhonov exponent")},
                {"schedule.lambda", app.add_option("--lambda", sched.lambda0, "step constant")},
                {"schedule.delta", app.add_option("--delta", sched.delta, "step exponent")}};
    }
    // Applies only the flags given on the command line.
    void overlay(RunConfig& cfg) const {
        for (const auto& [key, opt] : opts)
            if (opt->count() > 0) apply_config_entry(cfg, key, opt->as<std::string>());
    }
};

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        auto key = kv.substr(0, eq);
        key.erase(key.find_last_not_of(' ') + 1);
        apply_config_entry(cfg, key, kv.substr(eq + 1));
    }
}

void print_regime(const ParamSchedule& sched, double s_margin, std::ostream& out) {
    const auto regime = classify_regime(sched);
    out << "regime: " << regime_name(regime.kind) << '\n';
    for (const auto& s : regime.satisfied) out << "  satisfied: " << s << '\n';
    for (const auto& v : regime.violated) out << "  violated:  " << v << '\n';
    if (regime.kind == RegimeKind::OutOfTheory) {
        out << "prediction: none\n";
        return;
    }
    const auto pred = predicted_rates(sched, regime, s_margin);
    out << "prediction:\n"
        << "  fgap exponent:     " << num(pred.fgap_exponent) << (pred.has_log_factor ? " (times ln k)" : "") << '\n'
        << "  velocity exponent: " << num(pred.velocity_exponent) << '\n'
        << "  subgrad exponent:  " << num(pred.subgrad_exponent) << '\n'
        << "  convergence:       " << convergence_mode_name(pred.convergence_mode) << '\n';
    for (const auto& s : pred.sum_estimates) out << "  finite sum:        k^" << num(s.gamma) << " * " << s.series << '\n';
}

// ------------------------------------------------------------------ run

int cmd_run(const std::string& config_path, const std::string& out_arg, const std::vector<std::string>& sets) {
    RunConfig cfg = load_config(config_path);
    apply_overrides(cfg, sets);
    cfg.validate();
    const auto problem = make_problem(cfg.problem);
    const fs::path out = default_out(out_arg, "trace.csv");
    ensure_parent(out);

    const Vector x0 = cfg.initial_point(problem->dim());
    Trace trace;
    int code = kExitOk;
    try {
        trace = run(*problem, cfg.schedule, x0, x0, cfg.run_options());
    } catch (const NonFiniteIterate& e) {
        std::cerr << "error: " << e.what() << "; partial trace written\n";
        trace = e.partial;
        code = kExitAbort;
    }
    trace.config_snapshot = cfg.snapshot();
    write_trace_csv(trace, out);
    write_sidecar(trace.config_snapshot, sidecar_for(out));
    std::cout << "trace:   " << out.string() << " (" << trace.records.size() << " rows)\n"
              << "sidecar: " << sidecar_for(out).string() << '\n';

    if (code == kExitOk && cfg.diagnostics.energy_variant) {
        if (!trace.dense()) throw ConfigError("energy diagnostics need run.dense_iterates = true");
        const auto variant = *cfg.diagnostics.energy_variant;
        const auto ecfg = cfg.energy_config(variant);
        const auto es = variant == EnergyVariant::Weak ? energy_weak(trace, *problem, cfg.schedule, ecfg)
                                                        : energy_strong(trace, *problem, cfg.schedule, ecfg);
        fs::path energy_out = out;
        energy_out.replace_extension(".energy.csv");
        write_energy_csv(es, energy_out);
        std::cout << "energy:  " << energy_out.string() << '\n';
        for (const auto& c : es.coefficients)
            std::cout << "  " << std::left << std::setw(6) << c.name << " nonnegative from k="
                      << (c.sign_index ? std::to_string(*c.sign_index) : "never") << '\n';
        std::cout << "  one-step inequality holds from k="
                  << (es.ledger_index ? std::to_string(*es.ledger_index) : "never") << '\n';
    }
    return code;
}

// ---------------------------------------------------------------- rates

int cmd_rates(const std::string& trace_path, std::optional<double> window, const ScheduleFlags& flags,
              const std::string& csv_out) {
    const auto records = read_trace_csv(trace_path);
    RunConfig cfg;
    const fs::path side = sidecar_for(trace_path);
    if (fs::exists(side)) cfg = load_config(side);
    flags.overlay(cfg);
    const double wf = window.value_or(cfg.diagnostics.window_fraction);
    if (!(wf > 0.0 && wf < 1.0)) throw InvalidInput("window fraction must lie in (0, 1)");

    const auto regime = classify_regime(cfg.schedule);
    if (regime.kind == RegimeKind::OutOfTheory)
        throw InvalidInput("schedule is outside every covered regime; nothing to compare against");
    const auto pred = predicted_rates(cfg.schedule, regime, cfg.diagnostics.s_margin);

    struct Row {
        std::string series;
        double predicted;
        std::string fitted;
        std::string verdict;
        std::string note;
    };
    std::vector<Row> rows;
    bool all_pass = true;
    auto column = [&](auto get, bool squared) {
        Series s;
        for (const auto& r : records) {
            const double v = get(r);
            if (std::isnan(v)) continue;
            s.emplace_back(r.k, squared ? v * v : v);
        }
        return s;
    };
    const std::pair<const char*, double IterateRecord::*> cols[] = {
        {"fgap", &IterateRecord::fgap}, {"vel", &IterateRecord::vel}, {"subgrad", &IterateRecord::subgrad}};
    const double predicted[] = {pred.fgap_exponent, pred.velocity_exponent, pred.subgrad_exponent};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto member = cols[i].second;
        const auto s = column([&](const IterateRecord& r) { return r.*member; }, false);
        Row row{cols[i].first, predicted[i], "-", "SKIP", ""};
        if (s.size() < kMinFitPoints) {
            row.note = "no data";
        } else {
            const auto fit = fit_rate(s, wf);
            if (const auto* f = std::get_if<RateFit>(&fit)) {
                row.fitted = num(f->slope);
                const bool ok = f->slope <= predicted[i] + kRateTolerance;
                row.verdict = ok ? "PASS" : "FAIL";
                all_pass &= ok;
                row.note = "k in [" + std::to_string(f->k_lo) + ", " + std::to_string(f->k_hi) + "]";
            } else {
                const auto& nf = std::get<BelowNoiseFloor>(fit);
                row.verdict = "PASS";
                row.note = "noise floor" + (nf.floor_k ? " from k=" + std::to_string(*nf.floor_k) : std::string());
            }
        }
        rows.push_back(row);
    }

    std::cout << "regime: " << regime_name(regime.kind) << "  window: last " << num(wf) << " of log k\n";
    std::cout << std::left << std::setw(9) << "series" << std::setw(11) << "predicted" << std::setw(11) << "fitted"
              << std::setw(7) << "result" << "note\n";
    for (const auto& r : rows)
        std::cout << std::setw(9) << r.series << std::setw(11) << num(r.predicted) << std::setw(11) << r.fitted
                  << std::setw(7) << r.verdict << r.note << '\n';
    if (pred.has_log_factor) std::cout << "note: predicted fgap bound carries a ln k factor\n";

    if (!pred.sum_estimates.empty()) {
        std::cout << "sums (heuristic: last decade < 5% of total):\n";
        for (const auto& se : pred.sum_estimates) {
            const double IterateRecord::*m = se.series == "fgap"  ? &IterateRecord::fgap
                                             : se.series == "vel2" ? &IterateRecord::vel
                                                                   : &IterateRecord::subgrad;
            const auto s = column([&](const IterateRecord& r) { return r.*m; }, se.series != "fgap");
            if (s.empty()) continue;
            const auto v = sum_estimate(s, se.gamma);
            std::cout << "  " << std::setw(20) << "k^" + num(se.gamma) + " * " + se.series
                      << (v.summable ? "summable-consistent" : "diverging-consistent") << "  last decade "
                      << num(100 * v.fraction) << "%\n";
        }
    }

    if (!csv_out.empty()) {
        std::ofstream csv(csv_out);
        csv << "series,predicted,fitted,result,note\n";
        for (const auto& r : rows)
            csv << r.series << ',' << format_double(r.predicted) << ',' << r.fitted << ',' << r.verdict << ",\""
                << r.note << "\"\n";
    }
    return all_pass ? kExitOk : kExitFail;
}

// ------------------------------------------------------------- validate

int cmd_validate(const std::string& suite) {
    std::vector<Suite> suites;
    if (suite == "all") {
        suites = all_suites();
    } else if (auto s = parse_suite(suite)) {
        suites = {*s};
    } else {
        throw InvalidInput("unknown suite '" + suite + "'");
    }
    bool ok = true;
    for (auto s : suites) {
        const auto rep = run_suite(s);
        print_report(rep, std::cout);
        ok &= rep.passed();
    }
    return ok ? kExitOk : kExitFail;
}

// ----------------------------------------------------------------- path

int cmd_path(const std::string& config_path, const ScheduleFlags& flags, const std::vector<std::string>& sets,
             std::int64_t k_lo, std::int64_t k_hi, const std::string& out_arg) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    flags.overlay(cfg);
    apply_overrides(cfg, sets);
    cfg.validate();
    if (k_lo < 1 || k_hi <= k_lo) throw InvalidInput("need 1 <= k-lo < k-hi");
    const auto problem = make_problem(cfg.problem);
    const auto path = viscosity_path(*problem, cfg.schedule, k_lo, k_hi);
    const fs::path out = default_out(out_arg, "path.csv");
    ensure_parent(out);
    std::optional<Vector> xstar;
    if (const auto& t = problem->ground_truth()) xstar = t->xstar_min_norm;
    write_path_csv(path, xstar, out);
    const auto rep = check_viscosity_inequalities(path);
    std::cout << "path: " << out.string() << " (" << path.size() << " rows)\n"
              << "inequality checks over " << rep.pairs << " pairs: " << rep.violations.size() << " violations\n";
    for (const auto& [name, slack] : rep.min_slack)
        std::cout << "  " << std::left << std::setw(14) << name << " min slack " << num(slack) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inertial proximal iteration with vanishing Tikhonov regularization"};
    app.require_subcommand(1);

    auto* regime = app.add_subcommand("regime", "Classify a schedule and print predicted rates");
    ScheduleFlags regime_flags;
    regime_flags.attach(*regime);
    double s_margin = 0.05;
    regime->add_option("--s-margin", s_margin, "distance of the free exponent below its upper end");

    auto* run_cmd = app.add_subcommand("run", "Run from a config file and write trace CSV plus sidecar");
    std::string config_path, out_path;
    std::vector<std::string> sets;
    run_cmd->add_option("config", config_path, "config file")->required();
    run_cmd->add_option("-o,--out", out_path, std::string("trace CSV path (default $") + kOutDirEnv + "/trace.csv)");
    run_cmd->add_option("--set", sets, "override a config key, key=value");

    auto* rates = app.add_subcommand("rates", "Fit decay exponents of a trace and compare with the prediction");
    std::string trace_path, rates_csv;
    std::optional<double> window;
    ScheduleFlags rates_flags;
    rates->add_option("trace", trace_path, "trace CSV")->required();
    rates->add_option("--window", window, "fraction of the log-k range to fit");
    rates->add_option("--csv", rates_csv, "also write the table as CSV");
    rates_flags.attach(*rates);

    auto* validate = app.add_subcommand("validate", "Run a property suite");
    std::string suite = "all";
    validate->add_option("--suite", suite,
                         "prox, viscosity_path (lemmaA1), pi_sequence (lemmaA2), energy_weak, energy_strong, "
                         "subgrad, or all");

    auto* path_cmd = app.add_subcommand("path", "Export the viscosity path");
    std::string path_config, path_out;
    std::vector<std::string> path_sets;
    std::int64_t k_lo = 1, k_hi = 10000;
    ScheduleFlags path_flags;
    path_cmd->add_option("--config", path_config, "config file for problem and schedule");
    path_cmd->add_option("--set", path_sets, "override a config key, key=value");
    path_cmd->add_option("--k-lo", k_lo, "first index");
    path_cmd->add_option("--k-hi", k_hi, "last index");
    path_cmd->add_option("-o,--out", path_out, std::string("path CSV (default $") + kOutDirEnv + "/path.csv)");
    path_flags.attach(*path_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (regime->parsed()) {
            print_regime(regime_flags.sched, s_margin, std::cout);
            return kExitOk;
        }
        if (run_cmd->parsed()) return cmd_run(config_path, out_path, sets);
        if (rates->parsed()) return cmd_rates(trace_path, window, rates_flags, rates_csv);
        if (validate->parsed()) return cmd_validate(suite);
        if (path_cmd->parsed()) return cmd_path(path_config, path_flags, path_sets, k_lo, k_hi, path_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAbort;
    }
    return kExitInvalid;
}
