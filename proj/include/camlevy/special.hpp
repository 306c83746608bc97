#pragma once

#include <complex>

namespace camlevy {

/// Principal branch of log Gamma(z) for complex z, via the Lanczos
/// approximation (g = 7, nine coefficients) with the reflection formula for
/// Re z < 1/2. Relative accuracy is close to double precision away from the
/// poles at the non-positive integers.
std::complex<double> log_gamma(std::complex<double> z);

/// |Gamma(z)|^2 = exp(2 Re log Gamma(z)); real because
/// Gamma(conj z) = conj Gamma(z).
double gamma_abs_squared(std::complex<double> z);

}  // namespace camlevy
