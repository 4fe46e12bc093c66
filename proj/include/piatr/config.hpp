#pragma once

#include "piatr/corpus.hpp"
#include "piatr/diagnostics.hpp"
#include "piatr/params.hpp"
#include "piatr/solver.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace piatr {

enum class InitKind { Zero, RandomUnit };

std::string_view init_kind_name(InitKind k);

struct RunSection {
    std::int64_t iters = 1000;
    std::int64_t record_every = 0; // 0: default cadence
    bool dense_iterates = false;
    InitKind x_init = InitKind::RandomUnit;
};

struct DiagnosticsSection {
    std::optional<EnergyVariant> energy_variant;
    std::optional<double> r;
    std::optional<double> a;
    std::optional<double> s;
    double window_fraction = 0.5;
    double s_margin = 0.05;
};

// Flat text, one `section.key = value` per line; '#' starts a comment.
// problem.*   kind, dim, seed, matrix_path, b_path
// schedule.*  alpha, q, c, p, lambda, delta
// run.*       iters, record_every, dense_iterates, x_init
// diagnostics.* energy_variant, r, a, s, window_fraction, s_margin
struct RunConfig {
    ProblemSpec problem;
    ParamSchedule schedule;
    RunSection run;
    DiagnosticsSection diagnostics;

    // Throws ConfigError. Checks the schedule, iters >= 2, window bounds and
    // that referenced files exist.
    void validate() const;

    RunOptions run_options() const;
    // x_0 = x_1 per run.x_init, seeded by problem.seed.
    Vector initial_point(Eigen::Index dim) const;
    // Every key with its current value, in a fixed order.
    ConfigSnapshot snapshot() const;
    // Energy config for the requested variant with any overrides applied.
    EnergyConfig energy_config(EnergyVariant variant) const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Applies one key. Throws ConfigError for unknown keys or malformed values.
void apply_config_entry(RunConfig& cfg, std::string_view key, std::string_view value);

// Parses text on top of the defaults; `base_dir` resolves relative paths.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_snapshot(const ConfigSnapshot& snapshot);

} // namespace piatr
