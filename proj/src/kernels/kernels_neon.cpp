#include "piatr/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace piatr::kernels {
namespace {

// vmaxq/vminq differ from the x86 operand-order rule on signed zeros, so
// the thresholding kernels use explicit compare-and-select instead.

void extrapolate(const double* x, const double* x_prev, double alpha, double c, double* out, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    const float64x2_t vc = vdupq_n_f64(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xi = vld1q_f64(x + i);
        const float64x2_t mom = vmulq_f64(va, vsubq_f64(xi, vld1q_f64(x_prev + i)));
        vst1q_f64(out + i, vsubq_f64(vaddq_f64(xi, mom), vmulq_f64(vc, xi)));
    }
    for (; i < n; ++i) {
        out[i] = x[i] + alpha * (x[i] - x_prev[i]) - c * x[i];
    }
}

void scaled_difference(const double* a, const double* b, double scale, double* out, std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(scale);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(out + i, vmulq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), vs));
    }
    for (; i < n; ++i) {
        out[i] = (a[i] - b[i]) * scale;
    }
}

void soft_threshold(const double* x, double t, double* out, std::size_t n) {
    const float64x2_t vt = vdupq_n_f64(t);
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xi = vld1q_f64(x + i);
        const float64x2_t up = vsubq_f64(xi, vt);
        const float64x2_t lo = vaddq_f64(xi, vt);
        const float64x2_t upper = vbslq_f64(vcgtq_f64(up, zero), up, zero);
        const float64x2_t lower = vbslq_f64(vcltq_f64(lo, zero), lo, zero);
        vst1q_f64(out + i, vaddq_f64(upper, lower));
    }
    for (; i < n; ++i) {
        const double upper = x[i] - t;
        const double lower = x[i] + t;
        out[i] = (upper > 0.0 ? upper : 0.0) + (lower < 0.0 ? lower : 0.0);
    }
}

void clamp(const double* x, const double* lo, const double* hi, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t xi = vld1q_f64(x + i);
        const float64x2_t l = vld1q_f64(lo + i);
        const float64x2_t h = vld1q_f64(hi + i);
        const float64x2_t m = vbslq_f64(vcgtq_f64(xi, l), xi, l);
        vst1q_f64(out + i, vbslq_f64(vcltq_f64(m, h), m, h));
    }
    for (; i < n; ++i) {
        const double m = x[i] > lo[i] ? x[i] : lo[i];
        out[i] = m < hi[i] ? m : hi[i];
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double abs_sum(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) {
        s += std::fabs(x[i]);
    }
    return s;
}

} // namespace

namespace detail {
const KernelTable& neon_table() {
    static const KernelTable t{Isa::Neon,        &extrapolate, &scaled_difference, &soft_threshold, &clamp, &dot,
                               &squared_distance, &abs_sum};
    return t;
}
} // namespace detail

} // namespace piatr::kernels
