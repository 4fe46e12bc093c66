#include "piatr/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace piatr {

void ParamSchedule::validate() const {
    std::vector<std::string> bad;
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(alpha) || alpha <= 0.0) bad.emplace_back("alpha must be > 0");
    if (!finite(q) || q <= 0.0 || q > 1.0) bad.emplace_back("q must lie in (0, 1]");
    if (!finite(c) || c < 0.0) bad.emplace_back("c must be >= 0");
    if (!finite(p) || p <= 0.0) bad.emplace_back("p must be > 0");
    if (!finite(lambda0) || lambda0 <= 0.0) bad.emplace_back("lambda must be > 0");
    if (!finite(delta)) bad.emplace_back("delta must be finite");
    if (bad.empty()) return;
    std::ostringstream os;
    os << "invalid schedule:";
    for (const auto& b : bad) os << ' ' << b << ';';
    throw std::invalid_argument(os.str());
}

double ParamSchedule::alpha_k(std::int64_t k) const { return 1.0 - alpha / std::pow(static_cast<double>(k), q); }

double ParamSchedule::c_k(std::int64_t k) const { return c / std::pow(static_cast<double>(k), p); }

double ParamSchedule::lambda_k(std::int64_t k) const {
    return delta == 0.0 ? lambda0 : lambda0 * std::pow(static_cast<double>(k), delta);
}

std::string_view regime_name(RegimeKind kind) {
    switch (kind) {
    case RegimeKind::WeakFast: return "WeakFast";
    case RegimeKind::Critical: return "Critical";
    case RegimeKind::StrongViscosity: return "StrongViscosity";
    case RegimeKind::ClassicalNoTikhonov: return "ClassicalNoTikhonov";
    case RegimeKind::OutOfTheory: return "OutOfTheory";
    }
    return "?";
}

std::string_view convergence_mode_name(ConvergenceMode mode) {
    switch (mode) {
    case ConvergenceMode::WeakToMinimizer: return "WeakToMinimizer";
    case ConvergenceMode::StrongToMinNorm: return "StrongToMinNorm";
    case ConvergenceMode::LiminfToMinNorm: return "LiminfToMinNorm";
    case ConvergenceMode::NoneClaimed: return "NoneClaimed";
    }
    return "?";
}

bool is_critical_exponent(const ParamSchedule& s) {
    const double target = s.q + 1.0;
    return std::fabs(s.p - target) <= kCriticalTolerance * target;
}

namespace {

// Named hypotheses, evaluated once per schedule.
struct Facts {
    bool q_lt_1, q_eq_1;
    bool delta_ge_0, delta_le_0, delta_lt_0, delta_eq_0;
    bool alpha_gt_3, delta_lt_alpha_m3;
    bool critical, p_above, p_below;
    bool p_le_2, p_eq_2, p_gt_2, p_gt_1;
    bool c_large_at_2;
    bool lambda_lt_1, lambda_eq_1;
    bool above_floor; // p - q - 1 < delta
};

Facts facts_of(const ParamSchedule& s) {
    Facts f{};
    f.q_lt_1 = s.q < 1.0;
    f.q_eq_1 = s.q == 1.0;
    f.delta_ge_0 = s.delta >= 0.0;
    f.delta_le_0 = s.delta <= 0.0;
    f.delta_lt_0 = s.delta < 0.0;
    f.delta_eq_0 = s.delta == 0.0;
    f.alpha_gt_3 = s.alpha > 3.0;
    f.delta_lt_alpha_m3 = s.delta < s.alpha - 3.0;
    f.critical = is_critical_exponent(s);
    f.p_above = !f.critical && s.p > s.q + 1.0;
    f.p_below = !f.critical && s.p < s.q + 1.0;
    f.p_le_2 = s.p <= 2.0;
    f.p_eq_2 = s.p == 2.0;
    f.p_gt_2 = s.p > 2.0;
    f.p_gt_1 = s.p > 1.0;
    f.c_large_at_2 = s.c > s.q * (1.0 - s.q);
    f.lambda_lt_1 = s.lambda0 < 1.0;
    f.lambda_eq_1 = s.lambda0 == 1.0;
    f.above_floor = s.p - s.q - 1.0 < s.delta;
    return f;
}

// Collects satisfied/violated names for one candidate branch.
struct Checklist {
    std::vector<std::string> ok, missing;
    Checklist& need(bool cond, const char* name) {
        (cond ? ok : missing).emplace_back(name);
        return *this;
    }
    bool holds() const { return missing.empty(); }
};

// q = 1 requirements shared by the fast-rate branches.
Checklist q1_branch(const Facts& f) {
    Checklist c;
    c.need(f.q_eq_1, "q=1").need(f.alpha_gt_3, "α>3 for q=1").need(f.delta_ge_0, "δ≥0").need(f.delta_lt_alpha_m3,
                                                                                          "δ<α−3");
    return c;
}

Regime make(RegimeKind kind, std::vector<std::string> sat, std::vector<std::string> viol = {}) {
    Regime r;
    r.kind = kind;
    r.satisfied = std::move(sat);
    r.violated = std::move(viol);
    return r;
}

Regime classify_classical(const Facts& f) {
    Checklist sub;
    sub.need(f.q_lt_1, "0<q<1").need(f.delta_ge_0, "δ≥0");
    if (sub.holds()) {
        sub.ok.emplace_back("c=0");
        return make(RegimeKind::ClassicalNoTikhonov, sub.ok);
    }
    Checklist one = q1_branch(f);
    if (one.holds()) {
        one.ok.emplace_back("c=0");
        return make(RegimeKind::ClassicalNoTikhonov, one.ok);
    }
    const Checklist& shown = f.q_eq_1 ? one : sub;
    return make(RegimeKind::OutOfTheory, shown.ok, shown.missing);
}

Regime classify_critical(const Facts& f) {
    if (f.q_lt_1) {
        // Covered by the delta >= 0 fast-rate branch or the delta <= 0
        // log-factor branch; together they span every delta.
        std::vector<std::string> sat{"p=q+1", "0<q<1"};
        if (f.delta_le_0 && (f.delta_lt_0 || f.lambda_lt_1)) {
            sat.emplace_back(f.delta_lt_0 ? "δ<0" : "λ∈(0,1) at δ=0");
        } else {
            sat.emplace_back("δ≥0");
            if (f.delta_eq_0 && f.lambda_eq_1) sat.emplace_back("λ=1, δ=0");
        }
        return make(RegimeKind::Critical, sat);
    }
    Checklist one = q1_branch(f);
    one.ok.insert(one.ok.begin(), "p=q+1");
    if (one.holds()) return make(RegimeKind::Critical, one.ok);
    return make(RegimeKind::OutOfTheory, one.ok, one.missing);
}

Regime classify_above(const Facts& f) {
    if (f.q_lt_1) {
        Checklist c;
        c.need(true, "0<q<1").need(f.delta_ge_0, "δ≥0").need(f.p_le_2, "q+1<p≤2");
        if (f.p_eq_2) c.need(f.c_large_at_2, "c>q(1−q) at p=2");
        if (c.holds()) return make(RegimeKind::WeakFast, c.ok);
        return make(RegimeKind::OutOfTheory, c.ok, c.missing);
    }
    Checklist one = q1_branch(f);
    one.need(f.p_gt_2, "p>2 for q=1");
    if (one.holds()) return make(RegimeKind::WeakFast, one.ok);
    return make(RegimeKind::OutOfTheory, one.ok, one.missing);
}

Regime classify_below(const Facts& f) {
    Checklist c;
    c.need(f.q_lt_1, "0<q<1").need(f.p_gt_1, "1<p<q+1");
    // No result below p = q+1 covers q = 1; report the q = 1 inertia
    // requirement as well so the nearest covered setting is visible.
    if (f.q_eq_1) c.need(f.alpha_gt_3, "α>3 for q=1");
    if (f.delta_lt_0) {
        c.need(true, "δ<0").need(f.above_floor, "p−q−1<δ");
    } else if (f.delta_eq_0) {
        if (f.lambda_eq_1) {
            c.need(true, "λ=1, δ=0");
        } else {
            c.need(f.lambda_lt_1, "λ∈(0,1) at δ=0");
        }
    } else {
        c.need(false, "δ≤0");
    }
    if (c.holds()) return make(RegimeKind::StrongViscosity, c.ok);
    return make(RegimeKind::OutOfTheory, c.ok, c.missing);
}

} // namespace

Regime classify_regime(const ParamSchedule& sched) {
    sched.validate();
    const Facts f = facts_of(sched);
    if (sched.c == 0.0) return classify_classical(f);
    if (f.critical) return classify_critical(f);
    if (f.p_above) return classify_above(f);
    return classify_below(f);
}

namespace {

// Free exponent inside (1/2, upper): upper - margin, with the margin capped
// at half the interval width so the point stays admissible.
double free_exponent(double upper, double margin) {
    if (!(margin > 0.0)) throw std::invalid_argument("s_margin must be > 0");
    const double half_width = 0.5 * (upper - 0.5);
    return upper - std::min(margin, half_width);
}

void fill_fast(RatePrediction& r, const ParamSchedule& s) {
    r.fgap_exponent = -(s.q + s.delta + 1.0);
    r.velocity_exponent = -(s.q + 1.0) / 2.0;
    r.subgrad_exponent = -((s.q + 1.0) / 2.0 + s.delta);
    r.sum_estimates = {{"fgap", s.q + s.delta}, {"vel2", 1.0}, {"subgrad2", s.q + 2.0 * s.delta + 1.0}};
}

// Rates with the exponent s free in (1/2, upper).
void fill_free_s(RatePrediction& r, const ParamSchedule& s, double sval) {
    r.sum_estimates = {{"fgap", 2.0 * sval + s.delta - 1.0}, {"vel2", 2.0 * sval - s.q}, {"subgrad2", 2.0 * sval + 2.0 * s.delta}};
}

void fill_unit_step(RatePrediction& r, const ParamSchedule& s) {
    const double q = s.q;
    const double p = s.p;
    if (p <= 2.0 * q) {
        r.velocity_exponent = -(p + 1.0 - q) / 2.0;
        r.fgap_exponent = -p;
    } else if (p <= (3.0 * q + 1.0) / 2.0) {
        r.velocity_exponent = -(q + 1.0) / 2.0;
        r.fgap_exponent = -p;
    } else {
        r.velocity_exponent = p - 2.0 * q - 1.0;
        r.fgap_exponent = p < (4.0 * q + 2.0) / 3.0 ? -p : 2.0 * p - 4.0 * q - 2.0;
    }
    r.subgrad_exponent = r.velocity_exponent;
    if (p > 2.0 * q) r.sum_estimates = {{"subgrad2", 2.0 * q}, {"vel2", q}};
}

} // namespace

RatePrediction predicted_rates(const ParamSchedule& s, const Regime& regime, double s_margin) {
    s.validate();
    RatePrediction r;
    switch (regime.kind) {
    case RegimeKind::OutOfTheory:
        throw std::invalid_argument("no rate prediction for an OutOfTheory schedule");
    case RegimeKind::WeakFast:
    case RegimeKind::ClassicalNoTikhonov:
        fill_fast(r, s);
        r.convergence_mode = ConvergenceMode::WeakToMinimizer;
        break;
    case RegimeKind::Critical: {
        const bool log_branch = s.q < 1.0 && s.delta <= 0.0 && (s.delta < 0.0 || s.lambda0 < 1.0);
        if (log_branch) {
            r.has_log_factor = true;
            r.fgap_exponent = -(s.p + s.delta);
            r.velocity_exponent = -s.p / 2.0;
            r.subgrad_exponent = -(s.p / 2.0 + s.delta);
            fill_free_s(r, s, free_exponent(s.p / 2.0, s_margin));
        } else {
            const double sv = free_exponent((s.q + 1.0) / 2.0, s_margin);
            r.fgap_exponent = -2.0 * sv - s.delta;
            r.velocity_exponent = -sv;
            r.subgrad_exponent = -(sv + s.delta);
            fill_free_s(r, s, sv);
        }
        r.convergence_mode = ConvergenceMode::NoneClaimed;
        break;
    }
    case RegimeKind::StrongViscosity:
        if (s.delta == 0.0 && s.lambda0 == 1.0) {
            fill_unit_step(r, s);
            r.convergence_mode = ConvergenceMode::StrongToMinNorm;
        } else {
            r.fgap_exponent = -(s.p + s.delta);
            r.velocity_exponent = -s.p / 2.0;
            r.subgrad_exponent = -(s.p / 2.0 + s.delta);
            fill_free_s(r, s, free_exponent(s.p / 2.0, s_margin));
            r.convergence_mode = ConvergenceMode::LiminfToMinNorm;
        }
        break;
    }
    return r;
}

} // namespace piatr
