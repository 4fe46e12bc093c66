#include "piatr/tikhonov_path.hpp"

#include "piatr/kernels.hpp"
#include "piatr/tail_index.hpp"
#include "piatr/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace piatr {

Vector tikhonov_center(const ProxProblem& problem, double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive and finite");
    return problem.prox(1.0 / eps, Vector::Zero(problem.dim()));
}

std::optional<double> center_residual(const ProxProblem& problem, double eps, const Vector& center) {
    const auto g = problem.gradient(center);
    if (!g) return std::nullopt;
    return (*g + eps * center).norm();
}

std::vector<PathPoint> viscosity_path(const ProxProblem& problem, const ParamSchedule& sched,
                                      const std::vector<std::int64_t>& ks) {
    sched.validate();
    if (sched.c <= 0.0) throw std::invalid_argument("viscosity path needs c > 0");
    std::vector<PathPoint> out;
    out.reserve(ks.size());
    auto session = problem.open_session();
    const Vector origin = Vector::Zero(problem.dim());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < 1 || (i > 0 && ks[i] <= ks[i - 1])) {
            throw std::invalid_argument("path indices must be positive and strictly increasing");
        }
        PathPoint pt;
        pt.k = ks[i];
        pt.eps = sched.c_k(ks[i]);
        session->prox(1.0 / pt.eps, origin, pt.center);
        pt.center_norm = std::sqrt(kernels::squared_norm(view(pt.center)));
        out.push_back(std::move(pt));
    }
    return out;
}

std::vector<PathPoint> viscosity_path(const ProxProblem& problem, const ParamSchedule& sched, std::int64_t k_lo,
                                      std::int64_t k_hi) {
    if (k_lo < 1 || k_hi < k_lo) throw std::invalid_argument("bad path range");
    std::vector<std::int64_t> ks(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = k_lo + static_cast<std::int64_t>(i);
    return viscosity_path(problem, sched, ks);
}

ViscosityReport check_viscosity_inequalities(const std::vector<PathPoint>& path, double tol) {
    if (path.size() < 2) throw std::invalid_argument("path needs at least two points");
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (!(path[i].eps < path[i - 1].eps)) throw std::invalid_argument("path eps must be strictly decreasing");
    }
    static const char* names[] = {"norm_growth", "inner_lower", "inner_upper",
                                  "step_bound",  "inner_nonneg", "norm_monotone"};
    constexpr std::size_t kChecks = 6;
    ViscosityReport rep;
    rep.tolerance = tol;
    std::vector<double> worst(kChecks, std::numeric_limits<double>::infinity());

    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const PathPoint& a = path[i];
        const PathPoint& b = path[i + 1];
        const double e = a.eps;
        const double e1 = b.eps;
        const double de = e - e1;
        const double n0 = kernels::squared_norm(view(a.center));
        const double n1 = kernels::squared_norm(view(b.center));
        const double inner = kernels::dot(view(b.center), view(a.center));
        const double d2 = kernels::squared_distance(view(b.center), view(a.center));
        const double slack[kChecks] = {
            n1 - n0 - (e + e1) / de * d2,
            inner - n0 - e1 / de * d2,
            n1 - e / de * d2 - inner,
            std::min(de / e1 * std::sqrt(n0), de / e * std::sqrt(n1)) - std::sqrt(d2),
            inner,
            std::sqrt(n1) - std::sqrt(n0),
        };
        for (std::size_t c = 0; c < kChecks; ++c) {
            worst[c] = std::min(worst[c], slack[c]);
            if (slack[c] < -tol) rep.violations.push_back({a.k, names[c], slack[c]});
        }
        ++rep.pairs;
    }
    for (std::size_t c = 0; c < kChecks; ++c) rep.min_slack.emplace_back(names[c], worst[c]);
    return rep;
}

std::optional<std::int64_t> step_ratio_index(const std::vector<PathPoint>& path, double ratio) {
    std::vector<std::int64_t> ks;
    std::vector<bool> holds;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (path[i + 1].k != path[i].k + 1) continue;
        const double step = std::sqrt(kernels::squared_distance(view(path[i + 1].center), view(path[i].center)));
        ks.push_back(path[i].k);
        holds.push_back(step <= ratio / static_cast<double>(path[i].k) * path[i].center_norm);
    }
    return tail_index(ks, holds);
}

namespace {

double regularized_difference(const ProxProblem& problem, double eps, const Vector& x, const Vector& center) {
    const Vector diff = x - center;
    const Vector sum = x + center;
    return problem.value_difference(x, center) + 0.5 * eps * kernels::dot(view(diff), view(sum));
}

} // namespace

double strong_convexity_gap(const ProxProblem& problem, double eps, const Vector& x, const Vector& center) {
    const double g = regularized_difference(problem, eps, x, center);
    const double floor = 0.5 * eps * kernels::squared_distance(view(x), view(center));
    if (!(g >= floor - 1e-10)) {
        throw std::logic_error("regularized gap " + format_double(g) + " below its strong-convexity floor " +
                               format_double(floor));
    }
    return std::max(g, 0.0);
}

double gap_bound_slack(const ProxProblem& problem, double eps, const Vector& x, const Vector& center,
                       const Vector& y) {
    const double lhs = problem.value_difference(x, y);
    const double rhs = regularized_difference(problem, eps, x, center) + 0.5 * eps * kernels::squared_norm(view(y));
    return rhs - lhs;
}

void write_path_csv(const std::vector<PathPoint>& path, const std::optional<Vector>& xstar,
                    const std::filesystem::path& out_path) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path.string());
    out << kPathHeader << '\n';
    for (const auto& pt : path) {
        const double dist = xstar ? std::sqrt(kernels::squared_distance(view(pt.center), view(*xstar)))
                                  : std::numeric_limits<double>::quiet_NaN();
        out << pt.k << ',' << format_double(pt.eps) << ',' << format_double(pt.center_norm) << ','
            << format_double(dist) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + out_path.string());
}

} // namespace piatr
