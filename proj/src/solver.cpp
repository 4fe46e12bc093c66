#include "piatr/solver.hpp"

#include "piatr/kernels.hpp"
#include "piatr/trace_io.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace piatr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGapClip = 1e-12;

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
    if (a.size() != b.size()) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

ConfigSnapshot snapshot_of(const ParamSchedule& s, const RunOptions& o) {
    return {
        {"schedule.alpha", format_double(s.alpha)},     {"schedule.q", format_double(s.q)},
        {"schedule.c", format_double(s.c)},             {"schedule.p", format_double(s.p)},
        {"schedule.lambda", format_double(s.lambda0)},  {"schedule.delta", format_double(s.delta)},
        {"run.iters", std::to_string(o.iters)}, {"run.record_every", std::to_string(o.record_every)},
        {"run.dense_iterates", o.dense_iterates ? "true" : "false"},
    };
}

IterateRecord make_record(const ProxProblem& problem, std::int64_t k, const Vector& x, const Vector& xm1,
                          const Vector* xm2, const ParamSchedule& sched) {
    IterateRecord r;
    r.k = k;
    r.vel = std::sqrt(kernels::squared_distance(view(x), view(xm1)));
    r.xnorm = std::sqrt(kernels::squared_norm(view(x)));
    r.subgrad = xm2 ? recover_subgradient(x, xm1, *xm2, sched, k).norm() : kNaN;
    const auto& truth = problem.ground_truth();
    if (truth) {
        double g = problem.gap(x);
        if (g < 0.0 && g >= -kGapClip) g = 0.0;
        r.fgap = g;
        r.dist_xstar = std::sqrt(kernels::squared_distance(view(x), view(truth->xstar_min_norm)));
    } else {
        r.fgap = kNaN;
        r.dist_xstar = kNaN;
    }
    return r;
}

} // namespace

void step_in_place(SolverState& state, ProxSession& session, Vector& scratch) {
    require_same_dim(state.x_curr, state.x_prev, "solver state");
    const std::int64_t k = state.k;
    const ParamSchedule& s = state.schedule;
    scratch.resize(state.x_curr.size());
    kernels::extrapolate(view(state.x_curr), view(state.x_prev), s.alpha_k(k), s.c_k(k), view(scratch));
    // The old x_prev buffer is recycled for x_{k+1}.
    session.prox(s.lambda_k(k), scratch, state.x_prev);
    state.x_prev.swap(state.x_curr);
    state.k = k + 1;
}

SolverState step(const SolverState& state, const ProxProblem& problem) {
    if (state.x_curr.size() != problem.dim()) throw std::invalid_argument("solver state: dimension mismatch");
    SolverState next = state;
    auto session = problem.open_session();
    Vector scratch;
    step_in_place(next, *session, scratch);
    return next;
}

Vector recover_subgradient(const Vector& x_k, const Vector& x_km1, const Vector& x_km2, const ParamSchedule& sched,
                           std::int64_t k) {
    if (k < 2) throw std::invalid_argument("recover_subgradient needs k >= 2");
    require_same_dim(x_k, x_km1, "recover_subgradient");
    require_same_dim(x_k, x_km2, "recover_subgradient");
    // Rebuild the prox input exactly as the step did, then read off
    // (input - output) / step.
    Vector input(x_k.size());
    kernels::extrapolate(view(x_km1), view(x_km2), sched.alpha_k(k - 1), sched.c_k(k - 1), view(input));
    Vector u(x_k.size());
    kernels::scaled_difference(view(input), view(x_k), 1.0 / sched.lambda_k(k - 1), view(u));
    return u;
}

NonFiniteIterate::NonFiniteIterate(std::int64_t last_valid, Trace partial_trace)
    : std::runtime_error("non-finite iterate after k = " + std::to_string(last_valid)),
      last_valid_k(last_valid),
      partial(std::move(partial_trace)) {}

bool is_recorded(std::int64_t k, std::int64_t final_k, std::int64_t record_every) {
    if (k == 1 || k == final_k) return true;
    if (record_every <= 0) return k <= 1000 || k % 10 == 0;
    return (k - 1) % record_every == 0;
}

Trace run(const ProxProblem& problem, const ParamSchedule& sched, const Vector& x0, const Vector& x1,
          const RunOptions& opts) {
    sched.validate();
    if (opts.iters < 2) throw std::invalid_argument("iters must be >= 2");
    if (opts.record_every < 0) throw std::invalid_argument("record_every must be >= 1 (or 0 for the default)");
    if (x0.size() != problem.dim() || x1.size() != problem.dim()) {
        throw std::invalid_argument("initial points do not match the problem dimension");
    }
    if (opts.dense_iterates && (opts.iters > kDenseMaxIters || problem.dim() > kDenseMaxDim)) {
        throw std::invalid_argument("dense iterates are limited to iters <= 100000 and dim <= 100");
    }

    Trace trace;
    trace.config_snapshot = snapshot_of(sched, opts);
    trace.problem_id = problem.id();
    trace.seed = opts.seed;
    if (opts.dense_iterates) {
        trace.iterates.reserve(static_cast<std::size_t>(opts.iters) + 1);
        trace.iterates.push_back(x0);
        trace.iterates.push_back(x1);
    }

    SolverState state{1, x1, x0, sched};
    Vector older = x0; // x_{k-2} once k >= 2
    Vector scratch;
    auto session = problem.open_session();

    trace.records.push_back(make_record(problem, 1, x1, x0, nullptr, sched));
    while (state.k < opts.iters) {
        older = state.x_prev;
        step_in_place(state, *session, scratch);
        if (!state.x_curr.allFinite()) {
            throw NonFiniteIterate(state.k - 1, std::move(trace));
        }
        if (opts.dense_iterates) trace.iterates.push_back(state.x_curr);
        if (is_recorded(state.k, opts.iters, opts.record_every)) {
            trace.records.push_back(make_record(problem, state.k, state.x_curr, state.x_prev, &older, sched));
        }
    }
    return trace;
}

Vector random_unit_vector(Eigen::Index dim, std::uint64_t seed) {
    if (dim <= 0) throw std::invalid_argument("dimension must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Vector v(dim);
    do {
        for (Eigen::Index i = 0; i < dim; ++i) v[i] = nd(rng);
    } while (v.norm() == 0.0);
    return v / v.norm();
}

} // namespace piatr
