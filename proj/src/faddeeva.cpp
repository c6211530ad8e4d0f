#include "rydsense/faddeeva.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace rydsense {

namespace {

// Weideman's rational series (SIAM J. Numer. Anal. 31, 1994) with N = 40
// terms for |z| <= 8, Laplace continued fraction outside.
constexpr int kTerms = 40;
constexpr double kSwitch = 8.0;
constexpr int kFractionDepth = 40;

struct Series {
    std::array<double, kTerms> a{};
    double L{0.0};
};

const Series& series() {
    static const Series s = [] {
        Series out;
        constexpr int M = 2 * kTerms;
        constexpr int M2 = 2 * M;
        const long double L = std::sqrt(static_cast<long double>(kTerms) / std::sqrt(2.0L));
        out.L = static_cast<double>(L);
        const long double pi = std::numbers::pi_v<long double>;
        // f sampled at k = -M+1 .. M-1 with a leading zero, then fftshifted
        std::array<long double, M2> f{};
        for (int k = -M + 1; k <= M - 1; ++k) {
            long double t = L * std::tan(k * pi / M / 2.0L);
            f[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (L * L + t * t);
        }
        std::array<long double, M2> g{};
        for (int q = 0; q < M2; ++q) g[static_cast<std::size_t>(q)] = f[static_cast<std::size_t>((q + M2 / 2) % M2)];
        for (int m = 1; m <= kTerms; ++m) {
            long double re = 0.0L;
            for (int q = 0; q < M2; ++q) re += g[static_cast<std::size_t>(q)] * std::cos(2.0L * pi * m * q / M2);
            out.a[static_cast<std::size_t>(m - 1)] = static_cast<double>(re / M2);
        }
        return out;
    }();
    return s;
}

std::complex<double> upper_half(std::complex<double> z) {
    using C = std::complex<double>;
    const C I(0.0, 1.0);
    if (std::abs(z) > kSwitch) {
        C r(0.0, 0.0);
        for (int k = kFractionDepth; k >= 1; --k) r = (0.5 * k) / (z - r);
        return I / std::sqrt(std::numbers::pi) / (z - r);
    }
    const auto& s = series();
    const C den = s.L - I * z;
    const C Z = (s.L + I * z) / den;
    C p(0.0, 0.0);
    for (int m = kTerms - 1; m >= 0; --m) p = p * Z + s.a[static_cast<std::size_t>(m)];
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(std::numbers::pi)) / den;
}

}  // namespace

std::complex<double> faddeeva_w(std::complex<double> z) {
    if (z.imag() >= 0.0) return upper_half(z);
    return 2.0 * std::exp(-z * z) - upper_half(-z);
}

}  // namespace rydsense
