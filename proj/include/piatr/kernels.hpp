#pragma once

// Vector kernels used by the iteration and the prox catalog.
//
// Every kernel has a portable scalar reference implementation. Wider
// variants (AVX2 on x86-64, NEON on AArch64) are selected once at startup
// from the running CPU. Elementwise kernels are bitwise identical to the
// scalar reference; reductions agree to rounding (lane-wise partial sums).

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace piatr::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
    Isa isa;
    // out = x + alpha*(x - x_prev) - c*x
    void (*extrapolate)(const double* x, const double* x_prev, double alpha, double c, double* out, std::size_t n);
    // out = (a - b) * scale
    void (*scaled_difference)(const double* a, const double* b, double scale, double* out, std::size_t n);
    // out = sign(x) * max(|x| - t, 0)
    void (*soft_threshold)(const double* x, double t, double* out, std::size_t n);
    // out = min(max(x, lo), hi)
    void (*clamp)(const double* x, const double* lo, const double* hi, double* out, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    double (*abs_sum)(const double* x, std::size_t n);
};

// ISAs compiled into this binary and supported by the running CPU, scalar first.
std::vector<Isa> available_isas();

// Table for a specific ISA; throws std::invalid_argument if unavailable.
const KernelTable& table(Isa isa);

// Best available table. PIATR_FORCE_SCALAR=1 in the environment pins the
// scalar reference.
const KernelTable& active();

// Convenience wrappers over active().
void extrapolate(std::span<const double> x, std::span<const double> x_prev, double alpha, double c,
                 std::span<double> out);
void scaled_difference(std::span<const double> a, std::span<const double> b, double scale, std::span<double> out);
void soft_threshold(std::span<const double> x, double t, std::span<double> out);
void clamp(std::span<const double> x, std::span<const double> lo, std::span<const double> hi, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);
double abs_sum(std::span<const double> x);

namespace detail {
const KernelTable& scalar_table();
#if defined(PIATR_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(PIATR_HAVE_NEON)
const KernelTable& neon_table();
#endif
} // namespace detail

} // namespace piatr::kernels
