#include "piatr/diagnostics.hpp"

#include "piatr/tail_index.hpp"
#include "piatr/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace piatr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pw(std::int64_t k, double e) { return std::pow(static_cast<double>(k), e); }

void require_dense(const Trace& trace, const ProxProblem& problem) {
    if (!trace.dense()) throw std::invalid_argument("energy diagnostics need a dense trace");
    if (trace.iterates.size() < 5) throw std::invalid_argument("trace too short for an energy series");
    for (const auto& x : trace.iterates)
        if (x.size() != problem.dim()) throw std::invalid_argument("trace dimension does not match the problem");
}

// x_k - x_{k-1} + lambda_{k-1} u_k, written through the update rule.
Vector momentum_residual(const Trace& trace, const ParamSchedule& sched, std::int64_t k) {
    const auto& xm1 = trace.iterates[static_cast<std::size_t>(k - 1)];
    const auto& xm2 = trace.iterates[static_cast<std::size_t>(k - 2)];
    return sched.alpha_k(k - 1) * (xm1 - xm2) - sched.c_k(k - 1) * xm1;
}

void finish_series(EnergySeries& s) {
    std::vector<bool> holds(s.ks.size());
    s.worst_ledger_excess = -kInfinity;
    for (std::size_t i = 0; i < s.ks.size(); ++i) {
        const double excess = (s.ledger_lhs[i] - s.ledger_rhs[i]) / std::max(s.ledger_scale[i], 1e-300);
        holds[i] = excess <= s.tolerance;
        if (s.ks[i] >= s.ledger_valid_from) s.worst_ledger_excess = std::max(s.worst_ledger_excess, excess);
    }
    s.ledger_index = tail_index(s.ks, holds);

    std::optional<std::int64_t> all = std::int64_t{0};
    for (auto& c : s.coefficients) {
        std::vector<bool> nonneg(c.values.size());
        for (std::size_t i = 0; i < c.values.size(); ++i) nonneg[i] = c.values[i] >= 0.0;
        c.sign_index = tail_index(s.ks, nonneg);
        if (!c.sign_index) all.reset();
        else if (all) all = std::max(*all, *c.sign_index);
    }
    s.nonneg_index = all;
}

} // namespace

std::string_view energy_variant_name(EnergyVariant v) {
    return v == EnergyVariant::Weak ? "weak" : "strong";
}

void EnergyConfig::validate(const ParamSchedule& sched) const {
    sched.validate();
    std::ostringstream bad;
    const double r_max = (sched.q + 1.0) / 2.0;
    if (!(r > 0.5 && r <= r_max + 1e-15)) bad << " r must lie in (1/2, (q+1)/2];";
    if (variant == EnergyVariant::Weak) {
        if (!(a > 2.0 * r + sched.delta)) bad << " a must exceed 2r + delta;";
        if (sched.q == 1.0 && !(a < sched.alpha - 1.0)) bad << " a must stay below alpha - 1 when q = 1;";
    } else {
        if (!(a > 1.0 + sched.q)) bad << " a must exceed 1 + q;";
        if (!(s > 0.0) || !std::isfinite(s)) bad << " s must be positive;";
        if (!(sched.c > 0.0)) bad << " the strong energy needs c > 0;";
    }
    if (!std::isfinite(a) || !std::isfinite(r)) bad << " non-finite weights;";
    if (!bad.str().empty()) throw std::invalid_argument("energy config:" + bad.str());
}

EnergyConfig default_energy_config(EnergyVariant variant, const ParamSchedule& sched, std::optional<double> r) {
    EnergyConfig cfg;
    cfg.variant = variant;
    cfg.r = r.value_or((sched.q + 1.0) / 2.0);
    if (variant == EnergyVariant::Weak) {
        cfg.a = 2.0 * cfg.r + sched.delta + 0.5;
        // q = 1 caps a below alpha - 1; take the midpoint when the gap is narrow.
        if (sched.q == 1.0 && cfg.a >= sched.alpha - 1.0) cfg.a = 0.5 * (2.0 * cfg.r + sched.delta + sched.alpha - 1.0);
    } else {
        cfg.a = 1.0 + sched.q + 0.5;
        cfg.s = sched.alpha > 0.0 ? 0.5 * sched.c / sched.alpha : 0.25;
    }
    return cfg;
}

// ----------------------------------------------------------------- weights

EnergyWeights::EnergyWeights(const ParamSchedule& sched, const EnergyConfig& cfg) : sched_(sched), cfg_(cfg) {}

double EnergyWeights::a(std::int64_t k) const { return k <= 0 ? 0.0 : cfg_.a * pw(k, cfg_.r - 1.0); }
double EnergyWeights::b(std::int64_t k) const { return k <= 0 ? 0.0 : pw(k, cfg_.r); }

double EnergyWeights::weak_mu(std::int64_t k) const { return (2.0 * b(k) * b(k) - 2.0 * ab(k)) * lk(k); }
double EnergyWeights::weak_nu(std::int64_t k) const {
    return -al(k + 1) * ab(k + 1) - a(k) * a(k) + ab(k);
}
double EnergyWeights::weak_sigma(std::int64_t k) const { return al(k + 1) * b(k + 1) * b(k + 1) * ck(k + 1); }
double EnergyWeights::weak_m(std::int64_t k) const {
    const double prev = k >= 2 ? 2.0 * b(k - 1) * b(k - 1) * lk(k - 1) : 0.0;
    return prev - 2.0 * b(k) * b(k) * lk(k) + 2.0 * ab(k) * lk(k);
}
double EnergyWeights::weak_n(std::int64_t k) const {
    return -(al(k) * ab(k) - ab(k) * ck(k) - ab(k - 1) - al(k + 1) * ab(k + 1) + ab(k));
}
double EnergyWeights::weak_eta(std::int64_t k) const {
    const double bk2 = b(k) * b(k);
    return -al(k) * al(k) * bk2 - al(k) * ab(k) + al(k) * bk2 * ck(k) + b(k - 1) * b(k - 1) - ab(k - 1);
}
double EnergyWeights::weak_s(std::int64_t k) const {
    const double bk2 = b(k) * b(k);
    const double b1 = b(k + 1) * b(k + 1);
    return -(bk2 * ck(k) * ck(k) + al(k + 1) * b1 * ck(k + 1) - al(k) * bk2 * ck(k) - ab(k) * ck(k));
}

double EnergyWeights::young_weight(std::int64_t k) const { return cfg_.s / pw(k, sched_.p - sched_.q); }

double EnergyWeights::strong_mu(std::int64_t k) const {
    return k >= 2 ? 2.0 * b(k - 1) * b(k - 1) * lk(k - 1) : 0.0;
}
double EnergyWeights::strong_nu(std::int64_t k) const {
    return -a(k) * a(k) - al(k) * ab(k) + ab(k) * ck(k) + ab(k - 1);
}
double EnergyWeights::strong_sigma(std::int64_t k) const {
    const double bk2 = b(k) * b(k);
    const double tail = k >= 2 ? b(k - 1) * b(k - 1) * lk(k - 1) * ck(k) : 0.0;
    return -bk2 * ck(k) * ck(k) + al(k) * bk2 * ck(k) + ab(k) * ck(k) - tail;
}
double EnergyWeights::strong_xi(std::int64_t k) const {
    if (k < 2) return 0.0;
    const double l = lk(k - 1);
    return b(k - 1) * b(k - 1) * l * l;
}
double EnergyWeights::strong_m(std::int64_t k) const {
    const double bb2 = k >= 3 ? 2.0 * b(k - 2) * b(k - 2) * lk(k - 2) : 0.0;
    return 2.0 * ab(k - 1) * lk(k - 1) + bb2 - 2.0 * b(k - 1) * b(k - 1) * lk(k - 1);
}
double EnergyWeights::strong_n(std::int64_t k) const {
    return -al(k - 1) * ab(k - 1) + ab(k - 1) * ck(k - 1) + ab(k - 2) -
           (1.0 + young_weight(k - 1)) * (ab(k - 1) - al(k) * ab(k));
}
double EnergyWeights::strong_eta(std::int64_t k) const {
    const double bk2 = b(k) * b(k);
    return -al(k) * al(k) * bk2 - al(k) * ab(k) + al(k) * bk2 * ck(k) + b(k - 1) * b(k - 1) - 3.0 * ab(k - 1);
}
double EnergyWeights::strong_t(std::int64_t k) const {
    const double b1 = b(k - 1) * b(k - 1);
    const double c1 = ck(k - 1);
    const double b2l = k >= 3 ? b(k - 2) * b(k - 2) * lk(k - 2) : 0.0;
    return -b1 * c1 * c1 + al(k - 1) * b1 * c1 + ab(k - 1) * c1 - b2l * c1 - ab(k - 1) * lk(k - 1) * c1 +
           b1 * lk(k - 1) * c1 - al(k) * b(k) * b(k) * ck(k);
}

// ----------------------------------------------------------------- series

bool EnergySeries::ledger_holds_from(std::int64_t k0) const {
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < k0) continue;
        if ((ledger_lhs[i] - ledger_rhs[i]) / std::max(ledger_scale[i], 1e-300) > tolerance) return false;
    }
    return true;
}

const NamedSeries* EnergySeries::coefficient(std::string_view name) const {
    for (const auto& c : coefficients)
        if (c.name == name) return &c;
    return nullptr;
}

EnergySeries energy_weak(const Trace& trace, const ProxProblem& problem, const ParamSchedule& sched,
                         const EnergyConfig& cfg) {
    if (cfg.variant != EnergyVariant::Weak) throw std::invalid_argument("energy_weak needs a weak config");
    cfg.validate(sched);
    require_dense(trace, problem);
    const auto& truth = problem.ground_truth();
    if (!truth) throw std::invalid_argument("energy_weak needs a known minimizer");
    const Vector& xs = truth->xstar_min_norm;
    const double xs2 = xs.squaredNorm();

    const EnergyWeights w(sched, cfg);
    const auto N = static_cast<std::int64_t>(trace.iterates.size()) - 1;
    auto X = [&](std::int64_t k) -> const Vector& { return trace.iterates[static_cast<std::size_t>(k)]; };

    std::vector<double> gap(static_cast<std::size_t>(N + 1), kNaN);
    for (std::int64_t k = 0; k <= N; ++k) gap[static_cast<std::size_t>(k)] = problem.gap(X(k));

    // E_k for k = 2..N.
    auto energy = [&](std::int64_t k) {
        const std::int64_t j = k - 1;
        const Vector v = w.a(j) * (X(j) - xs) + w.b(j) * momentum_residual(trace, sched, k);
        return w.weak_mu(j) * gap[static_cast<std::size_t>(j)] + v.squaredNorm() +
               w.weak_nu(j) * (X(j) - xs).squaredNorm() + w.weak_sigma(j) * X(j).squaredNorm();
    };

    EnergySeries out;
    out.variant = EnergyVariant::Weak;
    out.config = cfg;
    out.tolerance = kLedgerTolerance;
    out.ledger_valid_from = static_cast<std::int64_t>(std::ceil(cfg.a)) + 1;
    const char* names[] = {"mu", "nu", "sigma", "m", "n", "eta", "s"};
    for (const char* n : names) out.coefficients.push_back({n, {}, std::nullopt});

    double e_next = energy(2);
    for (std::int64_t k = 2; k < N; ++k) {
        const double e_k = e_next;
        e_next = energy(k + 1);
        const double m = w.weak_m(k), n = w.weak_n(k), eta = w.weak_eta(k), s = w.weak_s(k);
        const double lam = sched.lambda_k(k - 1);
        const double bu = w.b(k - 1) * lam;
        const Vector u = recover_subgradient(X(k), X(k - 1), X(k - 2), sched, k);
        const double terms[] = {m * gap[static_cast<std::size_t>(k)], eta * (X(k) - X(k - 1)).squaredNorm(),
                                bu * bu * u.squaredNorm(), n * (X(k) - xs).squaredNorm(), s * X(k).squaredNorm()};
        double lhs = e_next - e_k, scale = std::abs(e_next) + std::abs(e_k);
        for (double t : terms) {
            lhs += t;
            scale += std::abs(t);
        }
        const double rhs = w.a(k) * w.b(k) * sched.c_k(k) * xs2;
        out.ks.push_back(k);
        out.energy.push_back(e_k);
        out.ledger_lhs.push_back(lhs);
        out.ledger_rhs.push_back(rhs);
        out.ledger_scale.push_back(scale + std::abs(rhs));
        const double vals[] = {w.weak_mu(k), w.weak_nu(k), w.weak_sigma(k), m, n, eta, s};
        for (std::size_t j = 0; j < out.coefficients.size(); ++j) out.coefficients[j].values.push_back(vals[j]);
    }
    finish_series(out);
    return out;
}

EnergySeries energy_strong(const Trace& trace, const ProxProblem& problem, const ParamSchedule& sched,
                           const EnergyConfig& cfg, const std::vector<PathPoint>& path) {
    if (cfg.variant != EnergyVariant::Strong) throw std::invalid_argument("energy_strong needs a strong config");
    cfg.validate(sched);
    require_dense(trace, problem);
    const auto N = static_cast<std::int64_t>(trace.iterates.size()) - 1;
    if (path.empty() || path.front().k != 1 || path.back().k < N ||
        static_cast<std::int64_t>(path.size()) != path.back().k)
        throw std::invalid_argument("strong energy needs the path at every k from 1 to the final index");

    const EnergyWeights w(sched, cfg);
    auto X = [&](std::int64_t k) -> const Vector& { return trace.iterates[static_cast<std::size_t>(k)]; };
    auto C = [&](std::int64_t k) -> const Vector& { return path[static_cast<std::size_t>(k - 1)].center; };

    // G_k = f_k(x_k) - f_k(center_k), f_k = f + (c_k/2)||.||^2.
    std::vector<double> G(static_cast<std::size_t>(N + 1), kNaN);
    for (std::int64_t k = 1; k <= N; ++k) {
        const Vector& x = X(k);
        const Vector& c = C(k);
        G[static_cast<std::size_t>(k)] =
            problem.value_difference(x, c) + 0.5 * sched.c_k(k) * (x - c).dot(x + c);
    }

    auto energy = [&](std::int64_t k) {
        const std::int64_t j = k - 1;
        const Vector d = X(j) - C(j);
        const Vector v = w.a(j) * d + w.b(j) * momentum_residual(trace, sched, k);
        return w.strong_mu(j) * G[static_cast<std::size_t>(j)] + v.squaredNorm() +
               w.strong_nu(j) * d.squaredNorm() + w.strong_sigma(j) * X(j).squaredNorm();
    };

    EnergySeries out;
    out.variant = EnergyVariant::Strong;
    out.config = cfg;
    out.tolerance = kLedgerTolerance;
    const char* names[] = {"mu", "nu", "sigma", "xi", "m", "n", "eta", "t"};
    for (const char* n : names) out.coefficients.push_back({n, {}, std::nullopt});

    const double rate_exp = 2.0 * cfg.r - 1.0 - sched.p;
    std::vector<std::int64_t> young_ks;
    std::vector<bool> young_ok;
    std::vector<double> r_scaled;

    double e_next = energy(3);
    for (std::int64_t k = 3; k < N; ++k) {
        const double e_k = e_next;
        e_next = energy(k + 1);
        const double xi = w.strong_xi(k), m = w.strong_m(k), n = w.strong_n(k), eta = w.strong_eta(k),
                     t = w.strong_t(k);
        const Vector u = recover_subgradient(X(k), X(k - 1), X(k - 2), sched, k);
        const double terms[] = {eta * (X(k) - X(k - 1)).squaredNorm(), xi * u.squaredNorm(),
                                m * G[static_cast<std::size_t>(k - 1)], n * (X(k - 1) - C(k - 1)).squaredNorm(),
                                t * X(k - 1).squaredNorm()};
        double lhs = e_next - e_k, scale = std::abs(e_next) + std::abs(e_k);
        for (double v : terms) {
            lhs += v;
            scale += std::abs(v);
        }

        const double b1 = w.b(k - 1) * w.b(k - 1), l1 = sched.lambda_k(k - 1);
        const double c1 = sched.c_k(k - 1), c0 = sched.c_k(k);
        const double ab1 = w.a(k - 1) * w.b(k - 1), ab0 = w.a(k) * w.b(k);
        const double drop = ab1 - sched.alpha_k(k) * ab0;
        const double sy = w.young_weight(k - 1);
        const double dc2 = (C(k) - C(k - 1)).squaredNorm();
        const double r_parts[] = {(b1 * l1 * (c1 - c0) + ab0 * c0) * C(k).squaredNorm(),
                                  -ab1 * l1 * c1 * C(k - 1).squaredNorm(), -b1 * l1 * c1 * dc2};
        double R = 0.0;
        for (double v : r_parts) {
            R += v;
            scale += std::abs(v);
        }
        const double S = ((1.0 + 1.0 / sy) * drop + 0.5 * ab1) * dc2;
        scale += std::abs(S);

        out.ks.push_back(k);
        out.energy.push_back(e_k);
        out.ledger_lhs.push_back(lhs);
        out.ledger_rhs.push_back(R + S);
        out.ledger_scale.push_back(scale);
        young_ks.push_back(k);
        young_ok.push_back(drop >= 0.0 && static_cast<double>(k - 1) >= cfg.a);
        r_scaled.push_back(R / pw(k, rate_exp));
        const double vals[] = {w.strong_mu(k), w.strong_nu(k), w.strong_sigma(k), xi, m, n, eta, t};
        for (std::size_t j = 0; j < out.coefficients.size(); ++j) out.coefficients[j].values.push_back(vals[j]);
    }
    const auto valid = tail_index(young_ks, young_ok);
    out.ledger_valid_from = valid ? *valid : N;
    out.c2 = -kInfinity;
    for (std::size_t i = 0; i < out.ks.size(); ++i)
        if (out.ks[i] >= out.ledger_valid_from) out.c2 = std::max(out.c2, r_scaled[i]);
    finish_series(out);
    return out;
}

EnergySeries energy_strong(const Trace& trace, const ProxProblem& problem, const ParamSchedule& sched,
                           const EnergyConfig& cfg) {
    if (!trace.dense()) throw std::invalid_argument("energy diagnostics need a dense trace");
    const auto N = static_cast<std::int64_t>(trace.iterates.size()) - 1;
    return energy_strong(trace, problem, sched, cfg, viscosity_path(problem, sched, 1, N));
}

void write_energy_csv(const EnergySeries& series, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "k,E";
    for (const auto& c : series.coefficients) out << ',' << c.name;
    out << ",ledger_lhs,ledger_rhs\n";
    for (std::size_t i = 0; i < series.ks.size(); ++i) {
        out << series.ks[i] << ',' << format_double(series.energy[i]);
        for (const auto& c : series.coefficients) out << ',' << format_double(c.values[i]);
        out << ',' << format_double(series.ledger_lhs[i]) << ',' << format_double(series.ledger_rhs[i]) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// --------------------------------------------------------------- rate fits

FitResult fit_rate(const Series& series, double window_fraction, double floor) {
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw std::invalid_argument("window_fraction must lie in (0, 1]");
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].first < 1) throw std::invalid_argument("rate fits need k >= 1");
        if (i > 0 && series[i].first <= series[i - 1].first)
            throw std::invalid_argument("rate fit series must have increasing k");
    }

    auto above = [&](std::size_t i) { return series[i].second >= floor && std::isfinite(series[i].second); };
    // Leading values under the floor (a zero first velocity when x_0 = x_1)
    // are skipped; the series is cut at the first drop after that.
    std::size_t first = 0;
    while (first < series.size() && !above(first)) ++first;
    std::optional<std::int64_t> floor_k;
    std::size_t kept = series.size();
    if (first == series.size() && !series.empty()) floor_k = series.front().first;
    for (std::size_t i = first; i < series.size(); ++i) {
        if (!above(i)) {
            floor_k = series[i].first;
            kept = i;
            break;
        }
    }
    auto too_few = [&](const char* why) -> FitResult {
        if (floor_k) return BelowNoiseFloor{floor_k, why};
        throw std::invalid_argument(std::string("rate fit: ") + why);
    };
    if (kept < first + kMinFitPoints) return too_few("fewer than 20 points above the floor");

    const double lk_hi = std::log(static_cast<double>(series[kept - 1].first));
    const double lk_lo_all = std::log(static_cast<double>(series[first].first));
    const double lo = lk_hi - window_fraction * (lk_hi - lk_lo_all);

    std::vector<std::size_t> window;
    for (std::size_t i = first; i < kept; ++i)
        if (std::log(static_cast<double>(series[i].first)) >= lo - 1e-12) window.push_back(i);

    constexpr std::size_t kTargets = 200;
    std::vector<std::size_t> picks;
    if (window.size() <= kTargets) {
        picks = window;
    } else {
        std::size_t cursor = 0;
        for (std::size_t j = 0; j < kTargets; ++j) {
            const double target = lo + (lk_hi - lo) * static_cast<double>(j) / static_cast<double>(kTargets - 1);
            while (cursor + 1 < window.size() &&
                   std::log(static_cast<double>(series[window[cursor]].first)) < target)
                ++cursor;
            if (picks.empty() || picks.back() != window[cursor]) picks.push_back(window[cursor]);
        }
    }
    if (picks.size() < kMinFitPoints) return too_few("fewer than 20 points in the fit window");

    const double n = static_cast<double>(picks.size());
    double sx = 0, sy = 0;
    for (auto i : picks) {
        sx += std::log(static_cast<double>(series[i].first));
        sy += std::log(series[i].second);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto i : picks) {
        const double dx = std::log(static_cast<double>(series[i].first)) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(series[i].second) - my);
    }
    if (!(sxx > 0.0)) return too_few("degenerate fit window");

    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.k_lo = series[picks.front()].first;
    fit.k_hi = series[picks.back()].first;
    fit.points = picks.size();
    fit.floor_k = floor_k;
    for (auto i : picks) {
        const double pred = fit.intercept + fit.slope * std::log(static_cast<double>(series[i].first));
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(std::log(series[i].second) - pred));
    }
    return fit;
}

// ---------------------------------------------------------- sum estimates

SumVerdict sum_estimate(const Series& series, double gamma) {
    if (series.empty()) throw std::invalid_argument("sum_estimate needs a nonempty series");
    const std::int64_t k_max = series.back().first;
    SumVerdict v;
    std::int64_t prev = 0;
    for (const auto& [k, value] : series) {
        if (k <= prev) throw std::invalid_argument("sum_estimate needs increasing k >= 1");
        if (!std::isfinite(value)) throw std::invalid_argument("sum_estimate needs finite values");
        const double term = static_cast<double>(k - prev) * pw(k, gamma) * value;
        v.total += term;
        if (10 * k > k_max) v.last_decade += term;
        prev = k;
    }
    v.fraction = v.total != 0.0 ? v.last_decade / v.total : 0.0;
    v.summable = v.fraction < kSummableFraction;
    return v;
}

// ----------------------------------------------------------- pi sequence

double PiSequence::step_ratio(std::int64_t n) const {
    if (n <= K0 || n > n_max()) throw std::out_of_range("step_ratio index outside the sequence");
    return 1.0 - H / pw(n, beta);
}

PiSequence pi_sequence(double H, double beta, std::int64_t K0, std::int64_t n_max) {
    if (!(H > 0.0) || !std::isfinite(H)) throw std::invalid_argument("H must be positive");
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
    if (K0 < 1) throw std::invalid_argument("K0 must be at least 1");
    if (!(H / pw(K0, beta) < 1.0)) throw std::invalid_argument("K0 must exceed H^(1/beta)");
    if (n_max < K0) throw std::invalid_argument("n_max must be at least K0");
    PiSequence seq{H, beta, K0, {}};
    seq.log_pi.reserve(static_cast<std::size_t>(n_max - K0 + 1));
    double acc = 0.0;
    for (std::int64_t i = K0; i <= n_max; ++i) {
        acc -= std::log1p(-H / pw(i, beta));
        seq.log_pi.push_back(acc);
    }
    return seq;
}

WeightedSumReport pi_weighted_sum_check(const PiSequence& seq, double gamma) {
    if (!(seq.beta < 1.0)) throw std::invalid_argument("the weighted-sum limit needs beta < 1");
    if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
    WeightedSumReport rep;
    rep.gamma = gamma;
    const std::int64_t n_max = seq.n_max();
    const std::int64_t decade_start = std::max(seq.K0, n_max / 10);
    double lo = kInfinity, hi = -kInfinity;
    double T = pw(seq.K0, gamma);
    double next_grid = static_cast<double>(seq.K0);
    for (std::int64_t n = seq.K0; n <= n_max; ++n) {
        if (n > seq.K0) T = T * seq.step_ratio(n) + pw(n, gamma);
        const double ratio = T / pw(n, gamma + seq.beta);
        if (n >= decade_start) {
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        if (static_cast<double>(n) >= next_grid || n == n_max) {
            rep.ratios.emplace_back(n, ratio);
            next_grid = std::max(next_grid * 1.122, static_cast<double>(n + 1)); // about 20 per decade
        }
        rep.limit = ratio;
    }
    rep.last_decade_variation = (hi - lo) / std::abs(rep.limit);
    rep.converges = std::isfinite(rep.limit) && rep.limit > 0.0 && rep.last_decade_variation < 0.1;
    return rep;
}

double pi_telescoping_slack(const PiSequence& seq, const std::vector<double>& a) {
    if (a.empty()) throw std::invalid_argument("telescoping check needs a nonempty sequence");
    if (static_cast<std::int64_t>(a.size()) > seq.n_max() - seq.K0 + 1)
        throw std::invalid_argument("sequence extends past the pi range");
    double W = 0.0;
    double slack = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) {
        const std::int64_t n = seq.K0 + static_cast<std::int64_t>(i);
        W = W * seq.step_ratio(n) + (a[i] - a[i - 1]);
        slack = std::min(slack, a[i] - W);
    }
    return slack;
}

} // namespace piatr
