#include "piatr/validate.hpp"

#include "piatr/corpus.hpp"
#include "piatr/solver.hpp"
#include "piatr/tikhonov_path.hpp"
#include "piatr/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace piatr {

namespace {

Vector gaussian(std::mt19937_64& rng, Eigen::Index n, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

// A point where f is finite, spread around `around` when given.
Vector probe(const ProxProblem& p, std::mt19937_64& rng, const Vector* around = nullptr) {
    if (const auto* box = dynamic_cast<const BoxProblem*>(&p)) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Vector z(box->dim());
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = box->lo()[i] + u(rng) * (box->hi()[i] - box->lo()[i]);
        return z;
    }
    if (!around) return gaussian(rng, p.dim(), 2.0);
    std::uniform_real_distribution<double> log_scale(-3.0, 1.0);
    return *around + gaussian(rng, p.dim(), std::pow(10.0, log_scale(rng)));
}

std::vector<std::shared_ptr<const ProxProblem>> prox_catalog(std::uint64_t seed) {
    std::vector<std::shared_ptr<const ProxProblem>> out;
    for (auto kind : {ProblemKind::Quadratic, ProblemKind::QuadraticRankDeficient, ProblemKind::QuadraticIllConditioned,
                      ProblemKind::L1, ProblemKind::Box, ProblemKind::L2Norm})
        out.push_back(make_problem({kind, 5, seed, {}, {}}));
    out.push_back(std::make_shared<ZeroProblem>(5));
    return out;
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

std::string index_text(const std::optional<std::int64_t>& k) { return k ? std::to_string(*k) : "never"; }

Trace dense_run(const ProxProblem& problem, const ParamSchedule& sched, std::int64_t iters, std::uint64_t seed) {
    RunOptions opts;
    opts.iters = iters;
    opts.dense_iterates = true;
    opts.seed = seed;
    const Vector x0 = random_unit_vector(problem.dim(), seed);
    return run(problem, sched, x0, x0, opts);
}

// Largest normalized excess of the one-step inequality over k >= k0.
double worst_excess_from(const EnergySeries& es, std::int64_t k0) {
    double worst = -kInfinity;
    for (std::size_t i = 0; i < es.ks.size(); ++i)
        if (es.ks[i] >= k0)
            worst = std::max(worst, (es.ledger_lhs[i] - es.ledger_rhs[i]) / std::max(es.ledger_scale[i], 1e-300));
    return worst;
}

} // namespace

bool SuiteReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void SuiteReport::add(std::string name, bool ok, double value, double bound, std::string detail) {
    checks.push_back({std::move(name), ok, value, bound, std::move(detail)});
}

void print_report(const SuiteReport& report, std::ostream& out) {
    std::size_t width = 0;
    for (const auto& c : report.checks) width = std::max(width, c.name.size());
    out << "[" << report.suite << "]\n";
    for (const auto& c : report.checks) {
        out << (c.passed ? "  PASS  " : "  FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name
            << "  value=" << std::setw(13) << fmt(c.value) << " bound=" << std::setw(13) << fmt(c.bound);
        if (!c.detail.empty()) out << ' ' << c.detail;
        out << '\n';
    }
    out << "  " << (report.passed() ? "suite PASS" : "suite FAIL") << " (" << report.checks.size() << " checks)\n";
}

std::string_view suite_name(Suite s) {
    switch (s) {
    case Suite::Prox: return "prox";
    case Suite::ViscosityPath: return "viscosity_path";
    case Suite::PiSequence: return "pi_sequence";
    case Suite::EnergyWeak: return "energy_weak";
    case Suite::EnergyStrong: return "energy_strong";
    case Suite::Subgrad: return "subgrad";
    }
    return "?";
}

std::optional<Suite> parse_suite(std::string_view name) {
    if (name == "lemmaA1") return Suite::ViscosityPath;
    if (name == "lemmaA2") return Suite::PiSequence;
    for (auto s : all_suites())
        if (suite_name(s) == name) return s;
    return std::nullopt;
}

std::vector<Suite> all_suites() {
    return {Suite::Prox, Suite::ViscosityPath, Suite::PiSequence, Suite::EnergyWeak, Suite::EnergyStrong,
            Suite::Subgrad};
}

Vector min_norm_by_lu_projection(const Matrix& A, const Vector& b) {
    if (A.rows() != b.size()) throw std::invalid_argument("min_norm_by_lu_projection: dimension mismatch");
    const Matrix M = A.transpose() * A;
    Eigen::FullPivLU<Matrix> lu(M);
    lu.setThreshold(1e-10);
    const Vector xp = lu.solve(A.transpose() * b);
    if (lu.rank() == M.cols()) return xp;
    if (lu.rank() == 0) return Vector::Zero(A.cols());
    const Matrix N = lu.kernel();
    return xp - N * (N.transpose() * N).ldlt().solve(N.transpose() * xp);
}

// ------------------------------------------------------------------- prox

SuiteReport validate_prox(const ProxSuiteOptions& opts) {
    SuiteReport rep{"prox", {}};
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> log_s(-2.0, 1.0);
    for (const auto& p : prox_catalog(opts.seed)) {
        double expansion = -kInfinity, violation = -kInfinity;
        for (int t = 0; t < opts.triples; ++t) {
            const double s = std::pow(10.0, log_s(rng));
            const Vector x = gaussian(rng, p->dim(), 2.0);
            const Vector y = gaussian(rng, p->dim(), 2.0);
            const Vector px = p->prox(s, x);
            const Vector py = p->prox(s, y);
            expansion = std::max(expansion, (px - py).norm() - (x - y).norm());
            // (x - prox(x))/s is a subgradient at prox(x).
            const Vector g = (x - px) / s;
            for (int j = 0; j < opts.probes; ++j) {
                const Vector z = probe(*p, rng);
                const double df = p->value_difference(z, px);
                if (std::isfinite(df)) violation = std::max(violation, g.dot(z - px) - df);
            }
        }
        rep.add(p->id() + "/nonexpansive", expansion <= opts.expansion_tol, expansion, opts.expansion_tol,
                "max ||Px-Py|| - ||x-y||");
        rep.add(p->id() + "/optimality", violation <= opts.optimality_tol, violation, opts.optimality_tol,
                "max f(P)+<(x-P)/s,z-P>-f(z)");
    }

    std::uniform_int_distribution<int> rows_d(2, 6);
    double worst = 0.0;
    for (int i = 0; i < opts.min_norm_instances; ++i) {
        const int rows = rows_d(rng);
        const int cols = rows + std::uniform_int_distribution<int>(1, 4)(rng);
        const int rank = std::uniform_int_distribution<int>(1, rows - 1)(rng);
        const Matrix A = gaussian(rng, rows * rank, 1.0).reshaped(rows, rank) *
                         gaussian(rng, rank * cols, 1.0).reshaped(rank, cols);
        const Vector b = gaussian(rng, rows, 1.0);
        const Vector svd = min_norm_minimizer(A, b);
        const Vector lu = min_norm_by_lu_projection(A, b);
        worst = std::max(worst, (svd - lu).norm() / std::max(1.0, lu.norm()));
    }
    rep.add("min_norm/svd_vs_lu", worst <= opts.min_norm_tol, worst, opts.min_norm_tol,
            std::to_string(opts.min_norm_instances) + " rank-deficient instances");
    return rep;
}

// --------------------------------------------------------- viscosity path

SuiteReport validate_viscosity_path(const PathSuiteOptions& opts) {
    SuiteReport rep{"viscosity_path", {}};
    std::mt19937_64 rng(opts.seed);
    std::vector<std::shared_ptr<const ProxProblem>> problems;
    problems.push_back(
        std::make_shared<QuadraticProblem>(Matrix::Identity(5, 5), gaussian(rng, 5, 1.0), "shifted_quadratic"));
    for (auto kind : {ProblemKind::QuadraticRankDeficient, ProblemKind::L1, ProblemKind::Box})
        problems.push_back(make_problem({kind, 5, opts.seed, {}, {}}));

    for (const auto& p : problems) {
        for (double pw : {1.2, 1.8}) {
            ParamSchedule sched;
            sched.p = pw;
            const auto path = viscosity_path(*p, sched, 1, opts.k_max);
            const auto r = check_viscosity_inequalities(path, opts.tol);
            const std::string tag = p->id() + "/p=" + fmt(pw) + "/";
            for (const auto& [check, slack] : r.min_slack) {
                std::size_t count = 0;
                for (const auto& v : r.violations) count += v.check == check;
                rep.add(tag + check, slack >= -opts.tol, slack, -opts.tol,
                        "min slack, " + std::to_string(count) + " violations over " + std::to_string(r.pairs) +
                            " pairs");
            }
        }
    }
    return rep;
}

// ------------------------------------------------------------ pi sequence

SuiteReport validate_pi_sequence(const PiSuiteOptions& opts) {
    SuiteReport rep{"pi_sequence", {}};
    const auto n = opts.n_max;
    const double nd = static_cast<double>(n);

    const auto harmonic = pi_sequence(2.0, 1.0, 3, n);
    const auto root = pi_sequence(1.0, 0.5, 2, n);
    for (const auto* seq : {&harmonic, &root}) {
        bool increasing = true;
        for (std::size_t i = 1; i < seq->log_pi.size(); ++i) increasing &= seq->log_pi[i] > seq->log_pi[i - 1];
        rep.add("monotone/H=" + fmt(seq->H) + ",beta=" + fmt(seq->beta), increasing, increasing ? 1.0 : 0.0, 1.0,
                "log pi strictly increasing");
    }

    const double e1 = harmonic.log_at(n) / std::log(nd);
    rep.add("exponent/H=2,beta=1", std::abs(e1 - 2.0) <= 0.04, e1, 2.0, "log pi_n / log n at n=" + std::to_string(n));
    const double e2 = root.log_at(n) / std::sqrt(nd);
    rep.add("exponent/H=1,beta=0.5", std::abs(e2 - 2.0) <= 0.1, e2, 2.0,
            "log pi_n / n^0.5 at n=" + std::to_string(n));

    const auto root2 = pi_sequence(2.0, 0.5, 5, n);
    for (const auto* seq : {&root, &root2}) {
        for (double gamma : {0.0, -0.5, 1.0}) {
            const auto w = pi_weighted_sum_check(*seq, gamma);
            const double target = 1.0 / seq->H;
            const bool ok = w.converges && std::abs(w.limit - target) <= 0.1 * target;
            rep.add("weighted_sum/H=" + fmt(seq->H) + ",gamma=" + fmt(gamma), ok, w.limit, target,
                    "last-decade variation " + fmt(w.last_decade_variation));
        }
    }

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (const auto* seq : {&harmonic, &root}) {
        double worst = kInfinity;
        const auto len = std::min<std::int64_t>(opts.telescoping_length, seq->n_max() - seq->K0 + 1);
        for (int t = 0; t < opts.telescoping_sequences; ++t) {
            std::vector<double> a(static_cast<std::size_t>(len));
            double peak = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                // Even trials: monotone walks. Odd trials: oscillating.
                a[i] = t % 2 == 0 ? (i ? a[i - 1] : 0.0) + U(rng)
                                  : 1.0 + std::sin(0.1 * static_cast<double>(i) * (1 + t % 7)) + 0.1 * U(rng);
                peak = std::max(peak, a[i]);
            }
            worst = std::min(worst, pi_telescoping_slack(*seq, a) / std::max(peak, 1.0));
        }
        rep.add("telescoping/H=" + fmt(seq->H) + ",beta=" + fmt(seq->beta), worst >= -1e-9, worst, -1e-9,
                std::to_string(opts.telescoping_sequences) + " nonnegative sequences, min relative slack");
    }
    return rep;
}

// ---------------------------------------------------------------- energies

SuiteReport validate_energy_weak(const EnergySuiteOptions& opts) {
    SuiteReport rep{"energy_weak", {}};
    const auto& sched = kWeakSuiteSchedule;
    const auto problem = make_problem({ProblemKind::Quadratic, 5, opts.seed, {}, {}});
    const auto trace = dense_run(*problem, sched, opts.iters, opts.seed);
    const auto es = energy_weak(trace, *problem, sched, default_energy_config(EnergyVariant::Weak, sched, opts.r));

    for (const auto& c : es.coefficients)
        rep.add("sign_index/" + c.name, c.sign_index.has_value(), c.sign_index ? double(*c.sign_index) : -1.0,
                double(es.ks.back()), "nonnegative from k=" + index_text(c.sign_index));
    const std::int64_t k0 = std::max(es.nonneg_index.value_or(es.ks.back()), es.ledger_valid_from);
    const double worst = worst_excess_from(es, k0);
    rep.add("descent", es.nonneg_index && worst <= es.tolerance, worst, es.tolerance,
            "max (lhs-rhs)/scale for k>=" + std::to_string(k0) + ", detected index " + index_text(es.ledger_index));
    double min_e = kInfinity;
    for (std::size_t i = 0; i < es.ks.size(); ++i)
        if (es.ks[i] >= k0) min_e = std::min(min_e, es.energy[i]);
    rep.add("energy_nonnegative", min_e >= 0.0, min_e, 0.0, "min E_k for k>=" + std::to_string(k0));
    return rep;
}

SuiteReport validate_energy_strong(const EnergySuiteOptions& opts) {
    SuiteReport rep{"energy_strong", {}};
    const auto& sched = kStrongSuiteSchedule;
    const auto problem = make_problem({ProblemKind::QuadraticRankDeficient, 5, opts.seed, {}, {}});
    const auto trace = dense_run(*problem, sched, opts.iters, opts.seed);
    const auto N = static_cast<std::int64_t>(trace.iterates.size()) - 1;
    const auto path = viscosity_path(*problem, sched, 1, N);
    const auto es =
        energy_strong(trace, *problem, sched, default_energy_config(EnergyVariant::Strong, sched, opts.r), path);

    const double worst = worst_excess_from(es, es.ledger_valid_from);
    rep.add("ledger", es.ledger_index.has_value() && worst <= es.tolerance, worst, es.tolerance,
            "max (lhs-rhs)/scale for k>=" + std::to_string(es.ledger_valid_from) + ", detected index " +
                index_text(es.ledger_index));
    rep.add("ledger_constant", std::isfinite(es.c2), es.c2, kInfinity, "max R_k / k^(2r-1-p)");
    for (const char* name : {"xi", "m", "n", "eta", "t"}) {
        const auto* c = es.coefficient(name);
        rep.add(std::string("sign_index/") + name, c->sign_index.has_value(),
                c->sign_index ? double(*c->sign_index) : -1.0, double(es.ks.back()),
                "nonnegative from k=" + index_text(c->sign_index));
    }

    // ||x_k - center_k||^2 <= (2/c_k)(f_k(x_k) - f_k(center_k)).
    double worst_gap = -kInfinity;
    for (std::int64_t k = 1; k <= N; ++k) {
        const Vector& x = trace.iterates[static_cast<std::size_t>(k)];
        const Vector& c = path[static_cast<std::size_t>(k - 1)].center;
        const double eps = sched.c_k(k);
        const double G = problem->value_difference(x, c) + 0.5 * eps * (x - c).dot(x + c);
        const double lhs = (x - c).squaredNorm();
        const double rhs = 2.0 * G / eps;
        worst_gap = std::max(worst_gap, (lhs - rhs) / std::max(lhs + std::abs(rhs), 1e-300));
    }
    rep.add("gap_bound", worst_gap <= 1e-9, worst_gap, 1e-9, "max relative excess over every iterate");
    return rep;
}

// ------------------------------------------------------------ subgradients

SuiteReport validate_subgradients(const SubgradSuiteOptions& opts) {
    SuiteReport rep{"subgrad", {}};
    const auto& sched = kWeakSuiteSchedule;
    std::mt19937_64 rng(opts.seed);
    for (auto kind : {ProblemKind::Quadratic, ProblemKind::L1, ProblemKind::Box, ProblemKind::L2Norm}) {
        const auto problem = make_problem({kind, 5, opts.seed, {}, {}});
        const auto trace = dense_run(*problem, sched, opts.iters, opts.seed);
        std::uniform_int_distribution<std::int64_t> pick(2, opts.iters);
        double worst = -kInfinity, grad_err = 0.0;
        for (int i = 0; i < opts.sampled_k; ++i) {
            const auto k = pick(rng);
            const auto& X = trace.iterates;
            const Vector& x = X[static_cast<std::size_t>(k)];
            const Vector u = recover_subgradient(x, X[static_cast<std::size_t>(k - 1)],
                                                 X[static_cast<std::size_t>(k - 2)], sched, k);
            for (int j = 0; j < opts.probes; ++j) {
                const Vector z = probe(*problem, rng, &x);
                const double df = problem->value_difference(z, x);
                if (std::isfinite(df)) worst = std::max(worst, u.dot(z - x) - df);
            }
            if (const auto g = problem->gradient(x)) grad_err = std::max(grad_err, (*g - u).norm());
        }
        rep.add(problem->id() + "/inequality", worst <= opts.tol, worst, opts.tol,
                "max <u,z-x>-(f(z)-f(x)) over " + std::to_string(opts.sampled_k) + " k x " +
                    std::to_string(opts.probes) + " probes");
        if (problem->gradient(trace.iterates.back()))
            rep.add(problem->id() + "/gradient", grad_err <= opts.tol, grad_err, opts.tol, "max ||u - grad f||");
    }
    return rep;
}

SuiteReport run_suite(Suite s) {
    switch (s) {
    case Suite::Prox: return validate_prox();
    case Suite::ViscosityPath: return validate_viscosity_path();
    case Suite::PiSequence: return validate_pi_sequence();
    case Suite::EnergyWeak: return validate_energy_weak();
    case Suite::EnergyStrong: return validate_energy_strong();
    case Suite::Subgrad: return validate_subgradients();
    }
    throw std::invalid_argument("unknown suite");
}

} // namespace piatr
