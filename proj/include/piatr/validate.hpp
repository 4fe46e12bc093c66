#pragma once

#include "piatr/diagnostics.hpp"
#include "piatr/params.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace piatr {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0; // the measured quantity
    double bound = 0.0; // what it was compared against
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const;
    void add(std::string name, bool ok, double value, double bound, std::string detail = {});
};

// One section per check: PASS/FAIL, name, value, bound, detail.
void print_report(const SuiteReport& report, std::ostream& out);

enum class Suite { Prox, ViscosityPath, PiSequence, EnergyWeak, EnergyStrong, Subgrad };

std::string_view suite_name(Suite s);
// Accepts the suite names plus lemmaA1 (viscosity path) and lemmaA2 (pi sequence).
std::optional<Suite> parse_suite(std::string_view name);
std::vector<Suite> all_suites();

// Minimum-norm solution of the normal equations by a particular solution
// from full-pivot LU followed by projection off the kernel. No SVD.
Vector min_norm_by_lu_projection(const Matrix& A, const Vector& b);

struct ProxSuiteOptions {
    std::uint64_t seed = 1;
    int triples = 1000;         // (s, x, y) per catalog entry
    int probes = 20;            // subgradient probes per triple
    int min_norm_instances = 20;
    double expansion_tol = 1e-10;
    double optimality_tol = 1e-9;
    double min_norm_tol = 1e-8;
};
SuiteReport validate_prox(const ProxSuiteOptions& opts = {});

struct PathSuiteOptions {
    std::uint64_t seed = 1;
    std::int64_t k_max = 10000;
    double tol = kPathTolerance;
};
SuiteReport validate_viscosity_path(const PathSuiteOptions& opts = {});

struct PiSuiteOptions {
    std::uint64_t seed = 1;
    std::int64_t n_max = 1000000;
    int telescoping_sequences = 100;
    std::int64_t telescoping_length = 5000;
};
SuiteReport validate_pi_sequence(const PiSuiteOptions& opts = {});

struct EnergySuiteOptions {
    std::int64_t iters = 100000;
    std::uint64_t seed = 1;
    std::optional<double> r; // defaults to (q+1)/2
};
// Full-rank 5x5 quadratic under (alpha 2, q 0.5, c 1, p 1.8, lambda 1, delta 0).
SuiteReport validate_energy_weak(const EnergySuiteOptions& opts = {});
// Rank-deficient 3x5 quadratic under (alpha 2, q 0.5, c 1, p 1.2, lambda 1, delta 0).
SuiteReport validate_energy_strong(const EnergySuiteOptions& opts = {});

struct SubgradSuiteOptions {
    std::uint64_t seed = 1;
    std::int64_t iters = 10000;
    int sampled_k = 1000;
    int probes = 100;
    double tol = 1e-9;
};
SuiteReport validate_subgradients(const SubgradSuiteOptions& opts = {});

SuiteReport run_suite(Suite s);

// Schedules the energy suites run under.
inline constexpr ParamSchedule kWeakSuiteSchedule{2.0, 0.5, 1.0, 1.8, 1.0, 0.0};
inline constexpr ParamSchedule kStrongSuiteSchedule{2.0, 0.5, 1.0, 1.2, 1.0, 0.0};

} // namespace piatr
