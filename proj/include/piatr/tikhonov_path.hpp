#pragma once

#include "piatr/params.hpp"
#include "piatr/prox.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace piatr {

// A point of the viscosity path: the minimizer of f + (eps/2)||.||^2.
struct PathPoint {
    std::int64_t k = 0;
    double eps = 0.0;
    Vector center;
    double center_norm = 0.0;
};

// prox_{f/eps}(0).
Vector tikhonov_center(const ProxProblem& problem, double eps);

// ||grad f(center) + eps * center||, or nullopt for nonsmooth problems.
std::optional<double> center_residual(const ProxProblem& problem, double eps, const Vector& center);

// Path at eps_k = c / k^p for every k in [k_lo, k_hi]. Requires c > 0.
std::vector<PathPoint> viscosity_path(const ProxProblem& problem, const ParamSchedule& sched, std::int64_t k_lo,
                                      std::int64_t k_hi);
// Same, at an explicit increasing list of indices.
std::vector<PathPoint> viscosity_path(const ProxProblem& problem, const ParamSchedule& sched,
                                      const std::vector<std::int64_t>& ks);

struct PathViolation {
    std::int64_t k = 0; // first index of the offending pair
    std::string check;
    double slack = 0.0; // negative: amount by which the inequality fails
};

// Checks per consecutive pair (k, k+1), each as "slack >= -tol":
//   norm_growth    ||c'||^2 - ||c||^2 - (e+e')/(e-e') ||d||^2
//   inner_lower    <c',c> - ||c||^2 - e'/(e-e') ||d||^2
//   inner_upper    ||c'||^2 - e/(e-e') ||d||^2 - <c',c>
//   step_bound     min((e-e')/e' ||c||, (e-e')/e ||c'||) - ||d||
//   inner_nonneg   <c',c>
//   norm_monotone  ||c'|| - ||c||
// with c, c' the centers at eps e > e' and d = c' - c.
struct ViscosityReport {
    std::size_t pairs = 0;
    double tolerance = 0.0;
    std::vector<PathViolation> violations;
    std::vector<std::pair<std::string, double>> min_slack; // per check, over all pairs

    bool ok() const { return violations.empty(); }
};

inline constexpr double kPathTolerance = 1e-9;

// Throws std::invalid_argument for fewer than two points or eps not
// strictly decreasing.
ViscosityReport check_viscosity_inequalities(const std::vector<PathPoint>& path, double tol = kPathTolerance);

// First index after which ||c_{k+1} - c_k|| <= (ratio / k) ||c_k|| holds for
// the rest of the path (consecutive integer k only).
std::optional<std::int64_t> step_ratio_index(const std::vector<PathPoint>& path, double ratio);

// f_eps(x) - f_eps(center) with f_eps = f + (eps/2)||.||^2. Throws
// std::logic_error when the result falls below (eps/2)||x - center||^2 - 1e-10.
double strong_convexity_gap(const ProxProblem& problem, double eps, const Vector& x, const Vector& center);

// Slack of f(x) - f(y) <= [f_eps(x) - f_eps(center)] + (eps/2)||y||^2.
double gap_bound_slack(const ProxProblem& problem, double eps, const Vector& x, const Vector& center, const Vector& y);

inline constexpr const char* kPathHeader = "k,eps,center_norm,dist_xstar";

void write_path_csv(const std::vector<PathPoint>& path, const std::optional<Vector>& xstar,
                    const std::filesystem::path& out);

} // namespace piatr
