#include "piatr/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace piatr::kernels {

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "unknown";
}

namespace {

bool cpu_supports(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(PIATR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    case Isa::Neon:
#if defined(PIATR_HAVE_NEON)
        return true; // mandatory on AArch64
#else
        return false;
#endif
    }
    return false;
}

const KernelTable& select_best() {
    if (const char* force = std::getenv("PIATR_FORCE_SCALAR"); force && std::string(force) == "1") {
        return detail::scalar_table();
    }
    const auto isas = available_isas();
    return table(isas.back());
}

} // namespace

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::Scalar};
    for (Isa isa : {Isa::Avx2, Isa::Neon}) {
        if (cpu_supports(isa)) out.push_back(isa);
    }
    return out;
}

const KernelTable& table(Isa isa) {
    if (!cpu_supports(isa)) {
        throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
    }
    switch (isa) {
    case Isa::Scalar: return detail::scalar_table();
#if defined(PIATR_HAVE_AVX2)
    case Isa::Avx2: return detail::avx2_table();
#endif
#if defined(PIATR_HAVE_NEON)
    case Isa::Neon: return detail::neon_table();
#endif
    default: break;
    }
    throw std::invalid_argument("kernel ISA not compiled in: " + std::string(isa_name(isa)));
}

const KernelTable& active() {
    static const KernelTable& t = select_best();
    return t;
}

void extrapolate(std::span<const double> x, std::span<const double> x_prev, double alpha, double c,
                 std::span<double> out) {
    assert(x.size() == x_prev.size() && x.size() == out.size());
    active().extrapolate(x.data(), x_prev.data(), alpha, c, out.data(), x.size());
}

void scaled_difference(std::span<const double> a, std::span<const double> b, double scale, std::span<double> out) {
    assert(a.size() == b.size() && a.size() == out.size());
    active().scaled_difference(a.data(), b.data(), scale, out.data(), a.size());
}

void soft_threshold(std::span<const double> x, double t, std::span<double> out) {
    assert(x.size() == out.size());
    active().soft_threshold(x.data(), t, out.data(), x.size());
}

void clamp(std::span<const double> x, std::span<const double> lo, std::span<const double> hi, std::span<double> out) {
    assert(x.size() == lo.size() && x.size() == hi.size() && x.size() == out.size());
    active().clamp(x.data(), lo.data(), hi.data(), out.data(), x.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return active().dot(a.data(), b.data(), a.size());
}

double squared_norm(std::span<const double> a) { return active().dot(a.data(), a.data(), a.size()); }

double squared_distance(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return active().squared_distance(a.data(), b.data(), a.size());
}

double abs_sum(std::span<const double> x) { return active().abs_sum(x.data(), x.size()); }

} // namespace piatr::kernels
