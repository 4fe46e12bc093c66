#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace piatr {

// Power-law schedules driving the iteration:
//   inertia  alpha_k  = 1 - alpha / k^q
//   pull     c_k      = c / k^p
//   step     lambda_k = lambda0 * k^delta
// alpha_k is applied verbatim, including the negative values it takes for
// small k when alpha > 1.
struct ParamSchedule {
    double alpha = 2.0;
    double q = 0.5;
    double c = 1.0;
    double p = 1.8;
    double lambda0 = 1.0;
    double delta = 0.0;

    // Throws std::invalid_argument naming every violated field constraint.
    void validate() const;

    double alpha_k(std::int64_t k) const;
    double c_k(std::int64_t k) const;
    double lambda_k(std::int64_t k) const;
};

enum class RegimeKind { WeakFast, Critical, StrongViscosity, ClassicalNoTikhonov, OutOfTheory };

std::string_view regime_name(RegimeKind kind);

struct Regime {
    RegimeKind kind = RegimeKind::OutOfTheory;
    std::vector<std::string> satisfied;
    std::vector<std::string> violated; // non-empty only for OutOfTheory
};

enum class ConvergenceMode { WeakToMinimizer, StrongToMinNorm, LiminfToMinNorm, NoneClaimed };

std::string_view convergence_mode_name(ConvergenceMode mode);

// Weight gamma such that sum_k k^gamma * series_k is claimed finite.
// Series names: "fgap", "vel2" (squared velocity), "subgrad2" (squared ||u_k||).
struct SumEstimate {
    std::string series;
    double gamma = 0.0;
};

// Exponents refer to the quantity itself: fgap, ||x_k - x_{k-1}||, ||u_k||.
struct RatePrediction {
    double fgap_exponent = 0.0;
    double velocity_exponent = 0.0;
    double subgrad_exponent = 0.0;
    bool has_log_factor = false;
    std::vector<SumEstimate> sum_estimates;
    ConvergenceMode convergence_mode = ConvergenceMode::NoneClaimed;
};

// Relative tolerance used to decide p == q + 1.
inline constexpr double kCriticalTolerance = 1e-12;

bool is_critical_exponent(const ParamSchedule& sched);

// Total over valid schedules; validates first and throws on invalid input.
Regime classify_regime(const ParamSchedule& sched);

// s_margin places the free exponent s of the critical and sub-critical
// branches at (upper end) - s_margin. Throws std::invalid_argument for
// OutOfTheory or a margin that leaves the admissible interval.
RatePrediction predicted_rates(const ParamSchedule& sched, const Regime& regime, double s_margin = 0.05);

} // namespace piatr
