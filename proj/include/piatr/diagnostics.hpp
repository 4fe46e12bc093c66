#pragma once

#include "piatr/params.hpp"
#include "piatr/prox.hpp"
#include "piatr/solver.hpp"
#include "piatr/tikhonov_path.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace piatr {

// ---------------------------------------------------------------- energies

enum class EnergyVariant { Weak, Strong };

std::string_view energy_variant_name(EnergyVariant v);

// Weights a_k = a * k^(r-1), b_k = k^r. `s` scales the Young-inequality
// weight s/(k-1)^(p-q) of the strong variant and is ignored otherwise.
struct EnergyConfig {
    EnergyVariant variant = EnergyVariant::Weak;
    double r = 0.75;
    double a = 2.0;
    double s = 0.25;

    // Throws std::invalid_argument when the configuration falls outside the
    // range the energy is built for.
    void validate(const ParamSchedule& sched) const;
};

// Weak: r = (q+1)/2, a = 2r + delta + 0.5 (midpoint of (2r + delta, alpha - 1)
// when q = 1 leaves less room). Strong: r = (q+1)/2, a = q + 1.5,
// s = 0.5 c / alpha.
// A given `r` replaces (q+1)/2 before a is derived from it.
EnergyConfig default_energy_config(EnergyVariant variant, const ParamSchedule& sched,
                                   std::optional<double> r = std::nullopt);

// Per-k coefficient sequences in closed form.
class EnergyWeights {
public:
    EnergyWeights(const ParamSchedule& sched, const EnergyConfig& cfg);

    double a(std::int64_t k) const; // a_k
    double b(std::int64_t k) const; // b_k, with b_0 = 0

    // Weak variant.
    double weak_mu(std::int64_t k) const;
    double weak_nu(std::int64_t k) const;
    double weak_sigma(std::int64_t k) const;
    double weak_m(std::int64_t k) const;
    double weak_n(std::int64_t k) const;
    double weak_eta(std::int64_t k) const;
    double weak_s(std::int64_t k) const;

    // Strong variant.
    double strong_mu(std::int64_t k) const;
    double strong_nu(std::int64_t k) const;
    double strong_sigma(std::int64_t k) const;
    double strong_xi(std::int64_t k) const;
    double strong_m(std::int64_t k) const;
    double strong_n(std::int64_t k) const;
    double strong_eta(std::int64_t k) const;
    double strong_t(std::int64_t k) const;
    double young_weight(std::int64_t k) const; // s / k^(p-q)

    const ParamSchedule& schedule() const { return sched_; }
    const EnergyConfig& config() const { return cfg_; }

private:
    double al(std::int64_t k) const { return sched_.alpha_k(k); }
    double ck(std::int64_t k) const { return sched_.c_k(k); }
    double lk(std::int64_t k) const { return sched_.lambda_k(k); }
    double ab(std::int64_t k) const { return a(k) * b(k); }

    ParamSchedule sched_;
    EnergyConfig cfg_;
};

struct NamedSeries {
    std::string name;
    std::vector<double> values; // aligned with EnergySeries::ks
    std::optional<std::int64_t> sign_index; // first k after which values >= 0
};

// E_k and the one-step inequality
//   E_{k+1} - E_k + (dissipation terms) <= rhs_k
// evaluated along a dense trace. The inequality is an algebraic consequence
// of the subgradient inequalities once k >= ledger_valid_from.
struct EnergySeries {
    EnergyVariant variant = EnergyVariant::Weak;
    EnergyConfig config;
    std::vector<std::int64_t> ks;
    std::vector<double> energy;
    std::vector<NamedSeries> coefficients;
    std::vector<double> ledger_lhs;
    std::vector<double> ledger_rhs;
    std::vector<double> ledger_scale; // magnitude of the summed terms
    std::int64_t ledger_valid_from = 0;
    std::optional<std::int64_t> ledger_index; // detected tail index
    std::optional<std::int64_t> nonneg_index; // max of the coefficient sign indices
    double tolerance = 0.0;                   // relative, applied to ledger_scale
    double worst_ledger_excess = 0.0;         // max (lhs - rhs)/scale for k >= ledger_valid_from
    double c2 = 0.0;                          // strong only: max R_k / k^(2r-1-p)

    bool ledger_holds_from(std::int64_t k0) const;
    const NamedSeries* coefficient(std::string_view name) const;
};

inline constexpr double kLedgerTolerance = 1e-9;

// Requires a dense trace and ground truth (x*) on the problem.
EnergySeries energy_weak(const Trace& trace, const ProxProblem& problem, const ParamSchedule& sched,
                         const EnergyConfig& cfg);

// `path` must contain every k from 1 to the trace's final index.
EnergySeries energy_strong(const Trace& trace, const ProxProblem& problem, const ParamSchedule& sched,
                           const EnergyConfig& cfg, const std::vector<PathPoint>& path);
// Builds the path itself.
EnergySeries energy_strong(const Trace& trace, const ProxProblem& problem, const ParamSchedule& sched,
                           const EnergyConfig& cfg);

// Columns: k,E,<coefficients...>,ledger_lhs,ledger_rhs
void write_energy_csv(const EnergySeries& series, const std::filesystem::path& path);

// --------------------------------------------------------------- rate fits

using Series = std::vector<std::pair<std::int64_t, double>>;

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::int64_t k_lo = 0;
    std::int64_t k_hi = 0;
    double max_abs_residual = 0.0;
    std::size_t points = 0;
    std::optional<std::int64_t> floor_k; // first k where the series hit the floor
};

struct BelowNoiseFloor {
    std::optional<std::int64_t> floor_k;
    std::string reason;
};

using FitResult = std::variant<RateFit, BelowNoiseFloor>;

inline constexpr std::size_t kMinFitPoints = 20;

// Least squares of log(value) on log(k) over the last `window_fraction` of
// the log-k range. Leading values below `floor` are skipped, then the series
// is truncated at the next value below it. Points are log-spaced subsamples. Throws std::invalid_argument
// for a bad fraction or a series too short to fit at all.
FitResult fit_rate(const Series& series, double window_fraction, double floor = kFgapFloor);

// ---------------------------------------------------------- sum estimates

struct SumVerdict {
    double total = 0.0;
    double last_decade = 0.0; // mass over k in (k_max/10, k_max]
    double fraction = 0.0;
    bool summable = false; // heuristic label: fraction < 5%
};

inline constexpr double kSummableFraction = 0.05;

// Partial sums of k^gamma * value, each record weighted by the number of
// integers it stands for on a decimated grid. Throws on an empty series.
SumVerdict sum_estimate(const Series& series, double gamma);

// ----------------------------------------------------------- pi sequence

// pi_n = 1 / prod_{i=K0}^{n} (1 - H / i^beta), stored as log pi_n.
struct PiSequence {
    double H = 1.0;
    double beta = 1.0;
    std::int64_t K0 = 2;
    std::vector<double> log_pi; // log_pi[n - K0]

    std::int64_t n_max() const { return K0 + static_cast<std::int64_t>(log_pi.size()) - 1; }
    double log_at(std::int64_t n) const { return log_pi.at(static_cast<std::size_t>(n - K0)); }
    // pi_{n-1} / pi_n
    double step_ratio(std::int64_t n) const;
};

PiSequence pi_sequence(double H, double beta, std::int64_t K0, std::int64_t n_max);

struct WeightedSumReport {
    double gamma = 0.0;
    std::vector<std::pair<std::int64_t, double>> ratios; // log grid of n
    double limit = 0.0;              // ratio at n_max
    double last_decade_variation = 0.0; // (max - min) / limit over the last decade
    bool converges = false;          // variation < 10% and limit finite positive
};

// sum_{k=K0}^{n} k^gamma pi_k / (n^(gamma+beta) pi_n), accumulated without
// forming pi itself. Requires beta < 1.
WeightedSumReport pi_weighted_sum_check(const PiSequence& seq, double gamma);

// min over n of a_n - sum_{k=K0+1}^{n} (pi_k/pi_n)(a_k - a_{k-1});
// `a` holds a_{K0}, a_{K0+1}, ... and must not extend past n_max.
double pi_telescoping_slack(const PiSequence& seq, const std::vector<double>& a);

} // namespace piatr
