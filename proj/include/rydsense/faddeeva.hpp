#pragma once

#include <complex>

namespace rydsense {

// Faddeeva function w(z) = exp(-z^2) erfc(-i z). Relative accuracy ~1e-13
// in the upper half plane; the lower half plane uses the reflection formula.
std::complex<double> faddeeva_w(std::complex<double> z);

}  // namespace rydsense
