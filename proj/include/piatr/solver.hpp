#pragma once

#include "piatr/params.hpp"
#include "piatr/prox.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace piatr {

struct SolverState {
    std::int64_t k = 1;
    Vector x_curr; // x_k
    Vector x_prev; // x_{k-1}
    ParamSchedule schedule;
};

// One iteration: x_{k+1} = prox_{lambda_k f}(x_k + alpha_k (x_k - x_{k-1}) - c_k x_k).
SolverState step(const SolverState& state, const ProxProblem& problem);

// In-place variant for drivers that own a prox session. `scratch` receives
// the prox input and is reused across calls.
void step_in_place(SolverState& state, ProxSession& session, Vector& scratch);

// The u_k in df(x_k) selected by the implicit step that produced x_k (k >= 2).
Vector recover_subgradient(const Vector& x_k, const Vector& x_km1, const Vector& x_km2, const ParamSchedule& sched,
                           std::int64_t k);

// Unknown quantities are NaN.
struct IterateRecord {
    std::int64_t k = 0;
    double fgap = 0.0;
    double vel = 0.0;
    double subgrad = 0.0;
    double xnorm = 0.0;
    double dist_xstar = 0.0;
};

using ConfigSnapshot = std::vector<std::pair<std::string, std::string>>;

inline constexpr double kFgapFloor = 1e-15;
inline constexpr std::int64_t kDenseMaxIters = 100000;
inline constexpr Eigen::Index kDenseMaxDim = 100;

struct Trace {
    std::vector<IterateRecord> records; // strictly increasing k
    ConfigSnapshot config_snapshot;
    std::string problem_id;
    std::uint64_t seed = 0;
    double fgap_floor = kFgapFloor;
    // Dense mode only: iterates[k] = x_k for k = 0..final k.
    std::vector<Vector> iterates;

    bool dense() const { return !iterates.empty(); }
};

struct RunOptions {
    std::int64_t iters = 1000; // final index k; must be >= 2
    // 0 selects the default cadence: every k up to 1000, then every 10th.
    std::int64_t record_every = 0;
    bool dense_iterates = false;
    std::uint64_t seed = 0; // recorded in the trace only
};

// Raised when an iterate stops being finite. Carries everything recorded
// up to the last finite iterate.
struct NonFiniteIterate : std::runtime_error {
    NonFiniteIterate(std::int64_t last_valid, Trace partial_trace);
    std::int64_t last_valid_k;
    Trace partial;
};

bool is_recorded(std::int64_t k, std::int64_t final_k, std::int64_t record_every);

Trace run(const ProxProblem& problem, const ParamSchedule& sched, const Vector& x0, const Vector& x1,
          const RunOptions& opts);

// Unit vector with Gaussian direction drawn from `seed`.
Vector random_unit_vector(Eigen::Index dim, std::uint64_t seed);

} // namespace piatr
