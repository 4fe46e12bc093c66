#include "piatr/config.hpp"

#include "piatr/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace piatr {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* want) {
    throw ConfigError(std::string(key) + ": expected " + want + ", got '" + std::string(value) + "'");
}

double to_double(std::string_view key, std::string_view v) {
    if (v == "inf") return kInfinity;
    if (v == "-inf") return -kInfinity;
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "a number");
    return out;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
    Int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
    return out;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad_value(key, v, "true or false");
}

std::string opt_double(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

} // namespace

std::string_view init_kind_name(InitKind k) { return k == InitKind::Zero ? "zero" : "random_unit"; }

void apply_config_entry(RunConfig& cfg, std::string_view key, std::string_view value) {
    value = trim(value);
    auto& pr = cfg.problem;
    auto& sc = cfg.schedule;
    auto& rn = cfg.run;
    auto& dg = cfg.diagnostics;
    if (key == "problem.kind") {
        try {
            pr.kind = parse_problem_kind(value);
        } catch (const std::invalid_argument&) {
            bad_value(key, value, "a problem kind");
        }
    } else if (key == "problem.dim") pr.dim = to_int<Eigen::Index>(key, value);
    else if (key == "problem.seed") pr.seed = to_int<std::uint64_t>(key, value);
    else if (key == "problem.matrix_path") pr.matrix_path = std::string(value);
    else if (key == "problem.b_path") pr.b_path = std::string(value);
    else if (key == "schedule.alpha") sc.alpha = to_double(key, value);
    else if (key == "schedule.q") sc.q = to_double(key, value);
    else if (key == "schedule.c") sc.c = to_double(key, value);
    else if (key == "schedule.p") sc.p = to_double(key, value);
    else if (key == "schedule.lambda") sc.lambda0 = to_double(key, value);
    else if (key == "schedule.delta") sc.delta = to_double(key, value);
    else if (key == "run.iters") rn.iters = to_int<std::int64_t>(key, value);
    else if (key == "run.record_every") rn.record_every = to_int<std::int64_t>(key, value);
    else if (key == "run.dense_iterates") rn.dense_iterates = to_bool(key, value);
    else if (key == "run.x_init") {
        if (value == "zero") rn.x_init = InitKind::Zero;
        else if (value == "random_unit") rn.x_init = InitKind::RandomUnit;
        else bad_value(key, value, "zero or random_unit");
    } else if (key == "diagnostics.energy_variant") {
        if (value.empty()) dg.energy_variant.reset();
        else if (value == "weak") dg.energy_variant = EnergyVariant::Weak;
        else if (value == "strong") dg.energy_variant = EnergyVariant::Strong;
        else bad_value(key, value, "weak or strong");
    } else if (key == "diagnostics.r") dg.r = value.empty() ? std::nullopt : std::optional(to_double(key, value));
    else if (key == "diagnostics.a") dg.a = value.empty() ? std::nullopt : std::optional(to_double(key, value));
    else if (key == "diagnostics.s") dg.s = value.empty() ? std::nullopt : std::optional(to_double(key, value));
    else if (key == "diagnostics.window_fraction") dg.window_fraction = to_double(key, value);
    else if (key == "diagnostics.s_margin") dg.s_margin = to_double(key, value);
    else throw ConfigError("unknown key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        try {
            apply_config_entry(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    auto resolve = [&](std::filesystem::path& p) {
        if (!p.empty() && p.is_relative() && !base_dir.empty()) p = base_dir / p;
    };
    resolve(cfg.problem.matrix_path);
    resolve(cfg.problem.b_path);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

RunConfig config_from_snapshot(const ConfigSnapshot& snapshot) {
    RunConfig cfg;
    for (const auto& [k, v] : snapshot) apply_config_entry(cfg, k, v);
    return cfg;
}

void RunConfig::validate() const {
    try {
        schedule.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (run.iters < 2) throw ConfigError("run.iters must be at least 2");
    if (run.record_every < 0) throw ConfigError("run.record_every must be nonnegative");
    if (problem.dim < 1) throw ConfigError("problem.dim must be positive");
    if (!(diagnostics.window_fraction > 0.0 && diagnostics.window_fraction < 1.0))
        throw ConfigError("diagnostics.window_fraction must lie in (0, 1)");
    if (!(diagnostics.s_margin > 0.0)) throw ConfigError("diagnostics.s_margin must be positive");
    if (run.dense_iterates && (run.iters > kDenseMaxIters || problem.dim > kDenseMaxDim))
        throw ConfigError("dense iterates are limited to 1e5 iterations and dimension 100");
    if (problem.kind == ProblemKind::CustomCsv) {
        for (const auto* p : {&problem.matrix_path, &problem.b_path}) {
            if (p->empty()) throw ConfigError("custom_csv needs problem.matrix_path and problem.b_path");
            if (!std::filesystem::exists(*p)) throw ConfigError("missing file " + p->string());
        }
    }
}

RunOptions RunConfig::run_options() const {
    RunOptions o;
    o.iters = run.iters;
    o.record_every = run.record_every;
    o.dense_iterates = run.dense_iterates;
    o.seed = problem.seed;
    return o;
}

Vector RunConfig::initial_point(Eigen::Index dim) const {
    if (run.x_init == InitKind::Zero) return Vector::Zero(dim);
    return random_unit_vector(dim, problem.seed);
}

ConfigSnapshot RunConfig::snapshot() const {
    const auto& d = diagnostics;
    return {
        {"problem.kind", std::string(problem_kind_name(problem.kind))},
        {"problem.dim", std::to_string(problem.dim)},
        {"problem.seed", std::to_string(problem.seed)},
        {"problem.matrix_path", problem.matrix_path.string()},
        {"problem.b_path", problem.b_path.string()},
        {"schedule.alpha", format_double(schedule.alpha)},
        {"schedule.q", format_double(schedule.q)},
        {"schedule.c", format_double(schedule.c)},
        {"schedule.p", format_double(schedule.p)},
        {"schedule.lambda", format_double(schedule.lambda0)},
        {"schedule.delta", format_double(schedule.delta)},
        {"run.iters", std::to_string(run.iters)},
        {"run.record_every", std::to_string(run.record_every)},
        {"run.dense_iterates", run.dense_iterates ? "true" : "false"},
        {"run.x_init", std::string(init_kind_name(run.x_init))},
        {"diagnostics.energy_variant", d.energy_variant ? std::string(energy_variant_name(*d.energy_variant)) : ""},
        {"diagnostics.r", opt_double(d.r)},
        {"diagnostics.a", opt_double(d.a)},
        {"diagnostics.s", opt_double(d.s)},
        {"diagnostics.window_fraction", format_double(d.window_fraction)},
        {"diagnostics.s_margin", format_double(d.s_margin)},
    };
}

EnergyConfig RunConfig::energy_config(EnergyVariant variant) const {
    auto cfg = default_energy_config(variant, schedule, diagnostics.r);
    if (diagnostics.a) cfg.a = *diagnostics.a;
    if (diagnostics.s) cfg.s = *diagnostics.s;
    return cfg;
}

} // namespace piatr
