#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "depoisson/profile.hpp"

namespace depoisson {

// Rates entering the covariance kernel: a true profile, or positive parts
// of estimates truncated at K.
struct KernelSpec {
  RateProfile profile;
  double h = 0.0;
};

KernelSpec make_spec(const RateProfile& profile, double h);

// Rates max(ν̂_n, 0) for n ≤ K.
KernelSpec plug_in_spec(const EstimatedProfile& est, double h, std::size_t K);

// Γ_h(θ1, θ2) = h^{−1}(exp[h Σ ν_n (e^{iθ1 n} − 1)(e^{iθ2 n} − 1)] − 1).
std::complex<double> kernel_gamma(const KernelSpec& spec, double theta1, double theta2);

enum class CovKind { rates, tails, cross };

// T times the asymptotic covariance, indexed from order 1. Divide by
// scale_T (or call scaled()) for the covariance itself.
struct CovMatrix {
  Eigen::MatrixXd entries;
  double scale_T = 1.0;
  CovKind kind = CovKind::rates;

  Eigen::MatrixXd scaled() const { return entries / scale_T; }
  double operator()(std::size_t m, std::size_t n) const {
    return entries(static_cast<Eigen::Index>(m - 1), static_cast<Eigen::Index>(n - 1));
  }
};

// Ω_{m,n}, 1 ≤ m, n ≤ nmax.
CovMatrix cov_rates(const KernelSpec& spec, double T, std::size_t nmax);

// Σ_{m1,m2}, 1 ≤ m1, m2 ≤ mmax.
CovMatrix cov_tails(const KernelSpec& spec, double T, std::size_t mmax);

// T·ascov(ρ̂_m, ν̂_n).
double cov_cross(const KernelSpec& spec, double T, std::size_t m, std::size_t n);

struct QuadratureOptions {
  std::size_t initial_grid = 32;
  std::size_t max_grid = 2048;
  double tolerance = 1e-10;
};

// J(n1, n2, a1, a2) as a double integral over [−π, π]², evaluated by a 2-D
// DFT of the integrand on a tensor grid, doubled until successive values
// agree to `tolerance`. Axis nodes with a_j = 1 use the analytic limit.
// Throws NumericError when the grid cap is reached first.
double cov_quadrature_oracle(const KernelSpec& spec, std::size_t n1, std::size_t n2, bool a1, bool a2,
                             const QuadratureOptions& opts = {});

}  // namespace depoisson
