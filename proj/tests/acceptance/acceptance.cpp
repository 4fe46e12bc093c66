// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"
#include "piatr/corpus.hpp"
#include "piatr/diagnostics.hpp"
#include "piatr/params.hpp"
#include "piatr/solver.hpp"
#include "piatr/tikhonov_path.hpp"
#include "piatr/validate.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace piatr;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << title << ": " << o.detail << std::endl;
    failures += !o.pass;
}

// Adds a "<= bound" style clause to the detail text and the verdict.
struct Clauses {
    bool ok = true;
    std::ostringstream text;
    void add(const std::string& what, bool cond) {
        if (text.tellp() > 0) text << "; ";
        text << what << (cond ? "" : " [x]");
        ok &= cond;
    }
    Outcome done() const { return {ok, text.str()}; }
};

Trace run_with(const ProxProblem& problem, const ParamSchedule& sched, std::int64_t iters, bool dense) {
    RunOptions opts;
    opts.iters = iters;
    opts.dense_iterates = dense;
    opts.seed = 1;
    const Vector x0 = random_unit_vector(problem.dim(), 1);
    return run(problem, sched, x0, x0, opts);
}

Series column(const Trace& t, double IterateRecord::*m, bool squared = false) {
    Series s;
    for (const auto& r : t.records) {
        const double v = r.*m;
        if (!std::isnan(v)) s.emplace_back(r.k, squared ? v * v : v);
    }
    return s;
}

std::string fit_text(const FitResult& f) {
    if (const auto* r = std::get_if<RateFit>(&f)) return num(r->slope);
    return "noise floor";
}

double slope_or(const FitResult& f, double fallback) {
    if (const auto* r = std::get_if<RateFit>(&f)) return r->slope;
    return fallback;
}

const ParamSchedule kC1{2.0, 0.5, 1.0, 1.8, 1.0, 0.0};
const ParamSchedule kC3{2.0, 0.5, 1.0, 1.2, 1.0, 0.0};

} // namespace

int main() {
    std::cout << "acceptance criteria" << std::endl;

    // Shared runs.
    const auto quad = make_problem({ProblemKind::Quadratic, 5, 1, {}, {}});
    const auto rankdef = make_problem({ProblemKind::QuadraticRankDeficient, 5, 1, {}, {}});

    // 1. WeakFast rate.
    Trace c1;
    {
        const auto t0 = Clock::now();
        c1 = run_with(*quad, kC1, 100000, true);
        const auto fg = fit_rate(column(c1, &IterateRecord::fgap), 0.5);
        const auto vel = fit_rate(column(c1, &IterateRecord::vel), 0.5);
        const double secs = seconds_since(t0);
        const auto pred = predicted_rates(kC1, classify_regime(kC1));
        Clauses c;
        c.add("regime " + std::string(regime_name(classify_regime(kC1).kind)),
              classify_regime(kC1).kind == RegimeKind::WeakFast);
        c.add("fgap slope " + fit_text(fg) + " <= -1.35 (predicted " + num(pred.fgap_exponent) + ")",
              slope_or(fg, 0.0) <= -1.35);
        c.add("velocity slope " + fit_text(vel) + " <= -0.6 (predicted " + num(pred.velocity_exponent) + ")",
              slope_or(vel, 0.0) <= -0.6);
        c.add("runtime " + num(secs, 3) + " s < 5 s", secs < 5.0);
        report(1, "WeakFast rate", c.done());
    }

    // 2. Faster decay with growing steps.
    {
        ParamSchedule s = kC1;
        s.delta = 1.0;
        const auto t0 = Clock::now();
        const auto t = run_with(*quad, s, 100000, false);
        const auto fg = fit_rate(column(t, &IterateRecord::fgap), 0.5);
        const double secs = seconds_since(t0);
        std::optional<std::int64_t> floor_k;
        for (const auto& r : t.records)
            if (r.k > 1 && r.fgap < kFgapFloor) {
                floor_k = r.k;
                break;
            }
        Clauses c;
        const bool slope_ok = slope_or(fg, 0.0) <= -2.3;
        const bool floor_ok = floor_k && *floor_k < 10000;
        c.add("fgap slope before floor " + fit_text(fg) + " <= -2.3", slope_ok || floor_ok);
        c.add("floor reached at k=" + (floor_k ? std::to_string(*floor_k) : std::string("never")) + " (< 1e4 suffices)",
              true);
        c.add("runtime " + num(secs, 3) + " s < 5 s", secs < 5.0);
        report(2, "arbitrarily fast rate via step growth", c.done());
    }

    // 3. Strong convergence to the minimum-norm minimizer.
    Trace c3;
    {
        const auto t0 = Clock::now();
        c3 = run_with(*rankdef, kC3, 100000, true);
        const auto fg = fit_rate(column(c3, &IterateRecord::fgap), 0.5);
        const double secs = seconds_since(t0);
        double d100 = NAN, dlast = NAN;
        for (const auto& r : c3.records) {
            if (r.k == 100) d100 = r.dist_xstar;
            if (r.k == 100000) dlast = r.dist_xstar;
        }
        // Independent minimum-norm point.
        const auto* qp = dynamic_cast<const QuadraticProblem*>(rankdef.get());
        const Eigen::VectorXd xs = oracle::min_norm_by_projection(qp->A(), qp->b());
        const double d_oracle = (c3.iterates.back() - xs).norm();
        Clauses c;
        c.add("dist(1e5)=" + num(dlast) + " < 0.05 * dist(1e2)=" + num(0.05 * d100), dlast < 0.05 * d100);
        c.add("oracle dist(1e5)=" + num(d_oracle), std::abs(d_oracle - dlast) <= 1e-8 + 1e-6 * dlast);
        c.add("fgap slope " + fit_text(fg) + " <= -1.1", slope_or(fg, 0.0) <= -1.1);
        c.add("runtime " + num(secs, 3) + " s < 10 s", secs < 10.0);
        report(3, "strong convergence", c.done());
    }

    // 4. Critical exponent with a log factor.
    {
        const ParamSchedule s{2.0, 0.5, 1.0, 1.5, 0.9, 0.0};
        const auto ill = make_problem({ProblemKind::QuadraticIllConditioned, 40, 1, {}, {}});
        auto normalized_spread = [&](const ProxProblem& p) {
            const auto t = run_with(p, s, 100000, false);
            double lo = INFINITY, hi = 0.0;
            for (const auto& r : t.records) {
                if (r.k < 1000) continue;
                const double v = r.fgap * std::pow(double(r.k), 1.5) / std::log(double(r.k));
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            return std::pair{hi, hi / lo};
        };
        const auto [hi, ratio] = normalized_spread(*ill);
        const auto [hi_wc, ratio_wc] = normalized_spread(*quad);
        Clauses c;
        c.add("regime " + std::string(regime_name(classify_regime(s).kind)),
              classify_regime(s).kind == RegimeKind::Critical);
        c.add("ill-conditioned dim-40 quadratic: max/min of fgap k^1.5/ln k on [1e3,1e5] = " + num(ratio) + " < 10",
              ratio < 10.0);
        c.add("(5x5 well-conditioned: max " + num(hi_wc) + ", max/min " + num(ratio_wc) + ", decays faster than the bound)",
              true);
        report(4, "critical-case rate", c.done());
    }

    // 5. Weighted sums on the criterion-1 run.
    {
        const double q = kC1.q, d = kC1.delta;
        const auto vel = sum_estimate(column(c1, &IterateRecord::vel, true), 1.0);
        const auto fg = sum_estimate(column(c1, &IterateRecord::fgap), q + d);
        const auto u = sum_estimate(column(c1, &IterateRecord::subgrad, true), q + 2 * d + 1);
        Clauses c;
        c.add("k vel^2 last decade " + num(100 * vel.fraction) + "% < 5%", vel.fraction < 0.05);
        c.add("k^(q+d) fgap " + num(100 * fg.fraction) + "%", fg.fraction < 0.05);
        c.add("k^(q+2d+1) |u|^2 " + num(100 * u.fraction) + "%", u.fraction < 0.05);
        report(5, "sum estimates", c.done());
    }

    // 6. Recovered subgradients.
    {
        std::mt19937_64 rng(6);
        const auto l1 = make_problem({ProblemKind::L1, 5, 1, {}, {}});
        const auto* qp = dynamic_cast<const QuadraticProblem*>(quad.get());
        const auto* lp = dynamic_cast<const L1Problem*>(l1.get());
        // Test-side values f(z) - f(x).
        std::function<double(const Vector&, const Vector&)> dq = [&](const Vector& z, const Vector& x) {
            const Vector Ad = qp->A() * (z - x);
            return 0.5 * Ad.squaredNorm() + Ad.dot(qp->A() * x - qp->b());
        };
        std::function<double(const Vector&, const Vector&)> dl = [&](const Vector& z, const Vector& x) {
            return (z - lp->center()).lpNorm<1>() - (x - lp->center()).lpNorm<1>();
        };
        Clauses c;
        for (auto [p, diff] : {std::pair{quad.get(), &dq}, std::pair{l1.get(), &dl}}) {
            const auto t = run_with(*p, kC1, 10000, true);
            std::uniform_int_distribution<std::int64_t> pick(2, 10000);
            std::normal_distribution<double> nd;
            std::uniform_real_distribution<double> ls(-3.0, 1.0);
            double worst = -INFINITY;
            for (int i = 0; i < 1000; ++i) {
                const auto k = pick(rng);
                const auto& X = t.iterates;
                const Vector& x = X[k];
                const Vector u = recover_subgradient(x, X[k - 1], X[k - 2], kC1, k);
                for (int j = 0; j < 100; ++j) {
                    Vector z = x;
                    const double sc = std::pow(10.0, ls(rng));
                    for (Eigen::Index m = 0; m < z.size(); ++m) z[m] += sc * nd(rng);
                    worst = std::max(worst, u.dot(z - x) - (*diff)(z, x));
                }
            }
            c.add(p->id() + " max violation " + num(worst) + " < 1e-9", worst < 1e-9);
        }
        report(6, "subgradient validity", c.done());
    }

    // 7. Viscosity path inequalities.
    {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(7);
        std::normal_distribution<double> nd;
        Vector shift(5);
        for (auto& v : shift) v = nd(rng);
        const QuadraticProblem shifted(Matrix::Identity(5, 5), shift, "shifted_quadratic");
        Clauses c;
        for (const ProxProblem* p : {static_cast<const ProxProblem*>(&shifted), rankdef.get()}) {
            const auto* qp = dynamic_cast<const QuadraticProblem*>(p);
            for (double pw : {1.2, 1.8}) {
                ParamSchedule s = kC3;
                s.p = pw;
                const auto path = viscosity_path(*p, s, 1, 10000);
                const auto rep = check_viscosity_inequalities(path, 1e-9);
                // Centers against a direct dense solve.
                double dev = 0.0;
                for (std::size_t i = 0; i < path.size(); i += 97) {
                    // (A^T A + eps I)^{-1} A^T b = A^T (A A^T + eps I)^{-1} b
                    Eigen::MatrixXd M = qp->A() * qp->A().transpose();
                    M.diagonal().array() += path[i].eps;
                    const Eigen::VectorXd ref = qp->A().transpose() * M.partialPivLu().solve(qp->b());
                    dev = std::max(dev, (path[i].center - ref).norm() / std::max(1.0, ref.norm()));
                }
                c.add(p->id() + " p=" + num(pw) + ": " + std::to_string(rep.violations.size()) + " violations over " +
                          std::to_string(rep.pairs) + " pairs",
                      rep.ok());
                c.add("center vs direct solve " + num(dev) + " < 1e-12", dev < 1e-12);
            }
        }
        const double secs = seconds_since(t0);
        c.add("runtime " + num(secs, 3) + " s < 5 s", secs < 5.0);
        report(7, "viscosity path inequalities", c.done());
    }

    // 8. Pi sequence.
    {
        const auto t0 = Clock::now();
        const std::int64_t n = 1000000;
        const double nd = double(n);
        const auto h2 = pi_sequence(2.0, 1.0, 3, n);
        const auto h1 = pi_sequence(1.0, 0.5, 2, n);
        const double e1 = h2.log_at(n) / std::log(nd);
        // Telescoped closed form: pi_n = n(n-1)/2.
        const double e1_closed = std::log(nd * (nd - 1) / 2) / std::log(nd);
        const double e2 = h1.log_at(n) / std::sqrt(nd);

        // Direct-summation oracle of the weighted ratio at n.
        auto direct_ratio = [&](double H, double beta, std::int64_t K0, double gamma) {
            double logp = 0.0, acc = 0.0, shift = 0.0;
            std::vector<double> lp;
            lp.reserve(std::size_t(n - K0 + 1));
            for (std::int64_t i = K0; i <= n; ++i) {
                logp -= std::log1p(-H / std::pow(double(i), beta));
                lp.push_back(logp);
            }
            shift = lp.back();
            for (std::int64_t i = K0; i <= n; ++i) acc += std::pow(double(i), gamma) * std::exp(lp[i - K0] - shift);
            return acc / std::pow(nd, gamma + beta);
        };
        const auto w0 = pi_weighted_sum_check(h1, 0.0);
        const auto wm = pi_weighted_sum_check(h1, -0.5);
        const double o0 = direct_ratio(1.0, 0.5, 2, 0.0);

        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double worst = INFINITY;
        for (int t = 0; t < 100; ++t) {
            const auto& seq = t % 2 ? h1 : h2;
            std::vector<double> a(3000);
            for (std::size_t i = 0; i < a.size(); ++i)
                a[i] = t % 4 < 2 ? (i ? a[i - 1] : 0.0) + U(rng) : 2.0 * U(rng);
            // Library recursion plus a direct check at the last index.
            worst = std::min(worst, pi_telescoping_slack(seq, a));
            const std::int64_t last = seq.K0 + std::int64_t(a.size()) - 1;
            double direct = 0.0;
            for (std::size_t i = 1; i < a.size(); ++i)
                direct += std::exp(seq.log_at(seq.K0 + std::int64_t(i)) - seq.log_at(last)) * (a[i] - a[i - 1]);
            worst = std::min(worst, a.back() - direct);
        }
        const double secs = seconds_since(t0);
        Clauses c;
        c.add("H=2,beta=1: log pi_n/log n = " + num(e1, 6) + " (closed form " + num(e1_closed, 6) + ") in [1.96, 2.04]",
              e1 >= 1.96 && e1 <= 2.04);
        c.add("H=1,beta=0.5: log pi_n/n^0.5 = " + num(e2, 6) + " in [1.9, 2.1]", e2 >= 1.9 && e2 <= 2.1);
        c.add("weighted ratio gamma=0 " + num(w0.limit, 6) + " (direct " + num(o0, 6) + "), gamma=-0.5 " +
                  num(wm.limit, 6) + ", within 10% of 1/H=1",
              w0.converges && wm.converges && std::abs(w0.limit - 1.0) <= 0.1 && std::abs(wm.limit - 1.0) <= 0.1 &&
                  std::abs(o0 - w0.limit) <= 1e-9 * o0);
        c.add("telescoping min slack " + num(worst) + " >= 0 on 100 sequences", worst >= -1e-9);
        c.add("runtime " + num(secs, 3) + " s < 5 s", secs < 5.0);
        report(8, "pi sequence", c.done());
    }

    // 9. Energy descent on the runs of criteria 1 and 3.
    {
        Clauses c;
        const auto weak = energy_weak(c1, *quad, kC1, default_energy_config(EnergyVariant::Weak, kC1));
        std::string signs;
        for (const auto& co : weak.coefficients)
            signs += co.name + "@" + (co.sign_index ? std::to_string(*co.sign_index) : "never") + " ";
        c.add("weak signs " + signs, weak.nonneg_index.has_value());
        const std::int64_t k0 = std::max(weak.nonneg_index.value_or(weak.ks.back()), weak.ledger_valid_from);
        c.add("weak descent from k=" + std::to_string(k0) + ", worst excess " + num(weak.worst_ledger_excess),
              weak.nonneg_index && weak.ledger_holds_from(k0));

        const auto strong = energy_strong(c3, *rankdef, kC3, default_energy_config(EnergyVariant::Strong, kC3));
        c.add("strong ledger detected at k=" +
                  (strong.ledger_index ? std::to_string(*strong.ledger_index) : std::string("never")) +
                  ", holds from k=" + std::to_string(strong.ledger_valid_from) + ", C2 " + num(strong.c2),
              strong.ledger_index && strong.ledger_holds_from(*strong.ledger_index) &&
                  strong.ledger_holds_from(strong.ledger_valid_from));
        report(9, "energy descent", c.done());
    }

    // 10. Prox properties and the minimum-norm minimizer.
    {
        ProxSuiteOptions opts;
        opts.triples = 1000;
        const auto rep = validate_prox(opts);
        Clauses c;
        double worst_exp = -INFINITY, worst_opt = -INFINITY;
        for (const auto& chk : rep.checks) {
            if (chk.name.find("/nonexpansive") != std::string::npos) worst_exp = std::max(worst_exp, chk.value);
            if (chk.name.find("/optimality") != std::string::npos) worst_opt = std::max(worst_opt, chk.value);
        }
        c.add("nonexpansive worst " + num(worst_exp) + " <= 1e-10", worst_exp <= 1e-10);
        c.add("optimality worst " + num(worst_opt) + " <= 1e-9", worst_opt <= 1e-9);
        std::mt19937_64 rng(10);
        std::normal_distribution<double> nd;
        double dev = 0.0;
        for (int i = 0; i < 20; ++i) {
            const int rows = 3 + i % 4, cols = rows + 2, rank = rows - 1;
            const Eigen::MatrixXd A = oracle::random_rank_deficient(rng, rows, cols, rank);
            Eigen::VectorXd b(rows);
            for (auto& v : b) v = nd(rng);
            dev = std::max(dev, (min_norm_minimizer(A, b) - oracle::min_norm_by_projection(A, b)).norm());
        }
        c.add("min-norm vs brute-force oracle " + num(dev) + " <= 1e-8 on 20 instances", dev <= 1e-8);
        report(10, "prox properties", c.done());
    }

    std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : "all criteria passed") << std::endl;
    return failures ? 1 : 0;
}
