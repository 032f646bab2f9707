#pragma once

#include <complex>
#include <span>
#include <vector>

namespace depoisson {

struct RootOptions {
  int max_iterations = 200;
  double tolerance = 1e-14;  // relative step size at which a root is frozen
};

// All roots of c_0 + c_1 w + … + c_K w^K (c_K ≠ 0) by Aberth–Ehrlich
// simultaneous iteration started on the circle of radius |c_0/c_K|^{1/K}.
// Exact zero roots (vanishing low-order coefficients) are split off first.
// Throws NumericError if the iteration does not settle.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs,
                                                   const RootOptions& opts = {});

// Coefficients of lead · Π (w − r_k), lowest order first.
std::vector<std::complex<double>> expand_roots(std::span<const std::complex<double>> roots,
                                               std::complex<double> lead = 1.0);

std::complex<double> poly_eval(std::span<const double> coeffs, std::complex<double> w);

}  // namespace depoisson
