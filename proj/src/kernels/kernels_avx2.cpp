// Compiled with -mavx2 only. FMA is deliberately not enabled so that the
// elementwise kernels round exactly like the scalar reference.
#include "piatr/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace piatr::kernels {
namespace {

inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

void extrapolate(const double* x, const double* x_prev, double alpha, double c, double* out, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d xp = _mm256_loadu_pd(x_prev + i);
        const __m256d mom = _mm256_mul_pd(va, _mm256_sub_pd(xi, xp));
        const __m256d r = _mm256_sub_pd(_mm256_add_pd(xi, mom), _mm256_mul_pd(vc, xi));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) {
        out[i] = x[i] + alpha * (x[i] - x_prev[i]) - c * x[i];
    }
}

void scaled_difference(const double* a, const double* b, double scale, double* out, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(d, vs));
    }
    for (; i < n; ++i) {
        out[i] = (a[i] - b[i]) * scale;
    }
}

void soft_threshold(const double* x, double t, double* out, std::size_t n) {
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        const __m256d upper = _mm256_max_pd(_mm256_sub_pd(xi, vt), zero);
        const __m256d lower = _mm256_min_pd(_mm256_add_pd(xi, vt), zero);
        _mm256_storeu_pd(out + i, _mm256_add_pd(upper, lower));
    }
    for (; i < n; ++i) {
        const double upper = x[i] - t;
        const double lower = x[i] + t;
        out[i] = (upper > 0.0 ? upper : 0.0) + (lower < 0.0 ? lower : 0.0);
    }
}

void clamp(const double* x, const double* lo, const double* hi, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d m = _mm256_max_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(lo + i));
        _mm256_storeu_pd(out + i, _mm256_min_pd(m, _mm256_loadu_pd(hi + i)));
    }
    for (; i < n; ++i) {
        const double m = x[i] > lo[i] ? x[i] : lo[i];
        out[i] = m < hi[i] ? m : hi[i];
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    double s = horizontal_sum(acc);
    for (; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double s = horizontal_sum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double abs_sum(const double* x, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
    }
    double s = horizontal_sum(acc);
    for (; i < n; ++i) {
        s += std::fabs(x[i]);
    }
    return s;
}

} // namespace

namespace detail {
const KernelTable& avx2_table() {
    static const KernelTable t{Isa::Avx2,        &extrapolate, &scaled_difference, &soft_threshold, &clamp, &dot,
                               &squared_distance, &abs_sum};
    return t;
}
} // namespace detail

} // namespace piatr::kernels
