#include "depoisson/covariance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include "depoisson/error.hpp"
#include "depoisson/fft.hpp"
#include "depoisson/series.hpp"

namespace depoisson {

using cd = std::complex<double>;

namespace {

// e^s − 1 without cancellation for small |s|.
cd expm1_complex(cd s) {
  const double x = s.real();
  const double y = s.imag();
  const double sh = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * sh * sh, std::exp(x) * std::sin(y)};
}

// e^{iθ} − 1
cd unit_minus_one(double theta) {
  const double sh = std::sin(0.5 * theta);
  return {-2.0 * sh * sh, std::sin(theta)};
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

KernelSpec make_spec(const RateProfile& profile, double h) {
  if (!(h > 0.0)) throw ArgumentError("bin width h must be positive");
  return {profile, h};
}

KernelSpec plug_in_spec(const EstimatedProfile& est, double h, std::size_t K) {
  if (K < 1) throw ArgumentError("plug-in truncation K must be at least 1");
  std::vector<double> rates(K, 0.0);
  for (std::size_t n = 1; n <= K && n <= est.size(); ++n) rates[n - 1] = std::max(est.rate(n), 0.0);
  return make_spec(RateProfile(std::move(rates)), h);
}

std::complex<double> kernel_gamma(const KernelSpec& spec, double theta1, double theta2) {
  if (!(spec.h > 0.0)) throw ArgumentError("bin width h must be positive");
  cd s = 0.0;
  const auto rates = spec.profile.rates();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    s += rates[i] * unit_minus_one(n * theta1) * unit_minus_one(n * theta2);
  }
  return expm1_complex(spec.h * s) / spec.h;
}

CovMatrix cov_rates(const KernelSpec& spec, double T, std::size_t nmax) {
  if (nmax < 1) throw ArgumentError("nmax must be at least 1");
  const BivarSeries psi = bivar_psi_series(spec.profile, spec.h, nmax, nmax, false, false);
  const auto n = static_cast<Eigen::Index>(nmax);
  return {symmetrize(psi.block(1, 1, n, n)), T, CovKind::rates};
}

CovMatrix cov_tails(const KernelSpec& spec, double T, std::size_t mmax) {
  if (mmax < 1) throw ArgumentError("mmax must be at least 1");
  const BivarSeries psi = bivar_psi_series(spec.profile, spec.h, mmax - 1, mmax - 1, true, true);
  return {symmetrize(psi), T, CovKind::tails};
}

double cov_cross(const KernelSpec& spec, double /*T*/, std::size_t m, std::size_t n) {
  if (m < 1 || n < 1) throw ArgumentError("cov_cross: orders must be at least 1");
  return bivar_taylor_J(spec.profile, spec.h, m - 1, n, true, false);
}

namespace {

// ψ_{a1,a2}(e^{iθ1}, e^{iθ2}) with removable singularities filled in.
class PsiOnCircle {
 public:
  PsiOnCircle(const KernelSpec& spec, bool a1, bool a2) : spec_(spec), a1_(a1), a2_(a2) {}

  cd operator()(double t1, double t2) const {
    const auto rates = spec_.profile.rates();
    const bool axis1 = a1_ && t1 == 0.0;
    const bool axis2 = a2_ && t2 == 0.0;
    if (axis1 && axis2) {
      double s = 0.0;
      for (std::size_t i = 0; i < rates.size(); ++i) s += static_cast<double>((i + 1) * (i + 1)) * rates[i];
      return s;
    }
    if (axis1) return axis_limit(t2, a2_);
    if (axis2) return axis_limit(t1, a1_);
    cd v = kernel_gamma(spec_, t1, t2);
    if (a1_) v /= unit_minus_one(t1);
    if (a2_) v /= unit_minus_one(t2);
    return v;
  }

 private:
  // lim_{z→1} ψ as a function of the other variable w = e^{iθ}:
  // Σ n ν_n (w^n − 1), divided by (w − 1) when that variable carries a pole.
  cd axis_limit(double theta, bool divide) const {
    const auto rates = spec_.profile.rates();
    cd s = 0.0;
    const cd w = std::polar(1.0, theta);
    for (std::size_t i = 0; i < rates.size(); ++i) {
      const double n = static_cast<double>(i + 1);
      if (divide) {
        // (w^n − 1)/(w − 1) = 1 + w + … + w^{n−1}
        cd g = 0.0, p = 1.0;
        for (std::size_t k = 0; k <= i; ++k) {
          g += p;
          p *= w;
        }
        s += n * rates[i] * g;
      } else {
        s += n * rates[i] * unit_minus_one(n * theta);
      }
    }
    return s;
  }

  const KernelSpec& spec_;
  bool a1_, a2_;
};

double quadrature_once(const PsiOnCircle& psi, std::size_t G, std::size_t n1, std::size_t n2) {
  std::vector<cd> grid(G * G);
  for (std::size_t j1 = 0; j1 < G; ++j1) {
    const double t1 = 2.0 * std::numbers::pi * static_cast<double>(j1) / static_cast<double>(G);
    for (std::size_t j2 = 0; j2 < G; ++j2) {
      const double t2 = 2.0 * std::numbers::pi * static_cast<double>(j2) / static_cast<double>(G);
      grid[j1 * G + j2] = psi(t1, t2);
    }
  }
  const auto coeffs = fft::dft2(grid, G, G, -1);
  const cd v = coeffs[n1 * G + n2] / static_cast<double>(G * G);
  if (std::abs(v.imag()) > 1e-8 * std::max(1.0, std::abs(v.real()))) {
    throw NumericError("cov_quadrature_oracle: non-negligible imaginary part");
  }
  return v.real();
}

}  // namespace

double cov_quadrature_oracle(const KernelSpec& spec, std::size_t n1, std::size_t n2, bool a1, bool a2,
                             const QuadratureOptions& opts) {
  if (!(spec.h > 0.0)) throw ArgumentError("bin width h must be positive");
  const PsiOnCircle psi(spec, a1, a2);
  std::size_t G = std::max(opts.initial_grid, std::bit_ceil(2 * (std::max(n1, n2) + 1)));
  double prev = quadrature_once(psi, G, n1, n2);
  while (2 * G <= opts.max_grid) {
    G *= 2;
    const double cur = quadrature_once(psi, G, n1, n2);
    if (std::abs(cur - prev) <= opts.tolerance * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw NumericError("cov_quadrature_oracle: no convergence under grid refinement");
}

}  // namespace depoisson
