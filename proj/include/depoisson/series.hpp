#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "depoisson/profile.hpp"

namespace depoisson {

// Truncated power series c_0 + c_1 z + … + c_D z^D.
struct TruncSeries {
  std::vector<double> coeffs;

  TruncSeries() = default;
  explicit TruncSeries(std::vector<double> c) : coeffs(std::move(c)) {}

  std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double operator[](std::size_t i) const { return i < coeffs.size() ? coeffs[i] : 0.0; }
};

// Coefficients c(i, j) of z1^i z2^j, 0 ≤ i ≤ D1, 0 ≤ j ≤ D2.
using BivarSeries = Eigen::MatrixXd;

// Logarithm of a series with positive constant term. Throws DomainError
// when p_0 ≤ 0.
TruncSeries series_log(const TruncSeries& p);

// Exponential of a series, truncated at the same order.
TruncSeries series_exp(const TruncSeries& a);

// Product truncated at `order`.
TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b, std::size_t order);

// Quotient f(z)/(z − 1) for f with f(1) = 0, truncated at f's order.
// Only f_0…f_k enter the k-th coefficient, so truncation is exact.
TruncSeries divide_by_z_minus_one(const TruncSeries& f);

// Taylor coefficients up to (d1, d2) of
//   ψ(z1, z2) = (exp[h Σ ν_n (z1^n − 1)(z2^n − 1)] − 1) / (h (z1 − 1)^a1 (z2 − 1)^a2).
BivarSeries bivar_psi_series(const RateProfile& profile, double h, std::size_t d1, std::size_t d2,
                             bool a1, bool a2);

// The (n1, n2) Taylor coefficient of ψ above; T times the asymptotic
// (co)variance of rate or tail estimates depending on (a1, a2).
double bivar_taylor_J(const RateProfile& profile, double h, std::size_t n1, std::size_t n2, bool a1,
                      bool a2);

}  // namespace depoisson
