#include "piatr/kernels.hpp"

#include <cmath>

namespace piatr::kernels {
namespace {

// The comparison forms below mirror the max/min semantics of the vector
// instructions (return the second operand unless the first compares greater
// or smaller), which keeps signed zeros identical across ISAs.

void extrapolate(const double* x, const double* x_prev, double alpha, double c, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + alpha * (x[i] - x_prev[i]) - c * x[i];
    }
}

void scaled_difference(const double* a, const double* b, double scale, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (a[i] - b[i]) * scale;
    }
}

void soft_threshold(const double* x, double t, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double upper = x[i] - t;
        const double lower = x[i] + t;
        out[i] = (upper > 0.0 ? upper : 0.0) + (lower < 0.0 ? lower : 0.0);
    }
}

void clamp(const double* x, const double* lo, const double* hi, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double m = x[i] > lo[i] ? x[i] : lo[i];
        out[i] = m < hi[i] ? m : hi[i];
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double abs_sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += std::fabs(x[i]);
    }
    return s;
}

} // namespace

namespace detail {
const KernelTable& scalar_table() {
    static const KernelTable t{Isa::Scalar,   &extrapolate, &scaled_difference, &soft_threshold, &clamp, &dot,
                               &squared_distance, &abs_sum};
    return t;
}
} // namespace detail

} // namespace piatr::kernels
