#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "rydsense/faddeeva.hpp"

namespace {

using rydsense::faddeeva_w;
using cplx = std::complex<double>;

// scipy.special.wofz
struct Golden {
    double x, y, re, im;
};

constexpr Golden golden[] = {
    {0.5, 0.5, 0.5331567079121748, 0.2304882313844585},
    {0.001, 0.001, 0.9988716223354106, 0.001126380671599899},
    {2.0, 0.1, 0.040201398161451296, 0.3315826873345632},
    {-3.0, 0.01, 0.0009088307067415815, -0.20114646254019664},
    {5.0, 5.0, 0.05696543988817737, 0.05583874277539143},
    {0.1, 6.0, 0.0927524293183419, 0.0015056529933895409},
    {10.0, 1e-05, 5.728717562233368e-08, 0.056705394232829415},
    {7.9, 0.2, 0.0018520516741750168, 0.07195481137196823},
    {8.1, 0.2, 0.0017595967934316173, 0.07015197362929991},
    {-20.0, 3.0, 0.004153127198180633, -0.027619583484586804},
    {1.0, -0.5, 0.15554114245433115, 1.1378372157816865},
    {-2.0, -1.0, -0.20532558064658757, -0.14685548503016754},
    {0.0, 0.0, 1.0, 0.0},
    {1e-08, 0.0, 0.9999999999999999, 1.1283791670955126e-08},
    {30.0, 30.0, 0.00940576953493407, 0.009400545563354873},
    {0.3, 2.5, 0.20858177452898424, 0.022089931497425302},
};

TEST(Faddeeva, MatchesReferenceValues) {
    for (const auto& g : golden) {
        const cplx w = faddeeva_w({g.x, g.y});
        const cplx ref(g.re, g.im);
        EXPECT_LT(std::abs(w - ref), 1e-12 * std::max(1.0, std::abs(ref))) << "z = " << g.x << " + " << g.y << "i";
    }
}

TEST(Faddeeva, ReflectionSymmetry) {
    // w(-conj z) = conj w(z)
    for (double x : {-4.0, -0.7, 0.0, 1.3, 9.0})
        for (double y : {0.01, 0.5, 3.0}) {
            const cplx z(x, y);
            EXPECT_LT(std::abs(faddeeva_w(-std::conj(z)) - std::conj(faddeeva_w(z))), 1e-14);
        }
}

TEST(Faddeeva, RealAxisIsGaussian) {
    for (double x : {0.0, 0.4, 1.0, 2.5, 5.0})
        EXPECT_NEAR(faddeeva_w({x, 0.0}).real(), std::exp(-x * x), 1e-13);
}

TEST(Faddeeva, ContinuousAcrossAsymptoticSwitch) {
    for (double theta = 0.05; theta < 3.1; theta += 0.3) {
        const cplx a = std::polar(8.0 - 1e-13, theta), b = std::polar(8.0 + 1e-13, theta);
        EXPECT_LT(std::abs(faddeeva_w(a) - faddeeva_w(b)), 1e-14);
    }
}

}  // namespace
