#include "depoisson/series.hpp"

#include <cmath>

#include "depoisson/error.hpp"

namespace depoisson {

TruncSeries series_log(const TruncSeries& p) {
  if (p.coeffs.empty() || !(p.coeffs[0] > 0.0)) {
    throw DomainError("series_log: leading coefficient must be positive");
  }
  const std::size_t d = p.order();
  const double p0 = p.coeffs[0];
  std::vector<double> b(d + 1, 0.0);
  b[0] = std::log(p0);
  for (std::size_t n = 1; n <= d; ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k < n; ++k) acc += static_cast<double>(k) * b[k] * p.coeffs[n - k];
    b[n] = p.coeffs[n] / p0 - acc / (static_cast<double>(n) * p0);
  }
  return TruncSeries(std::move(b));
}

TruncSeries series_exp(const TruncSeries& a) {
  if (a.coeffs.empty()) return TruncSeries({1.0});
  const std::size_t d = a.order();
  std::vector<double> p(d + 1, 0.0);
  p[0] = std::exp(a.coeffs[0]);
  for (std::size_t n = 1; n <= d; ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += static_cast<double>(k) * a.coeffs[k] * p[n - k];
    p[n] = acc / static_cast<double>(n);
  }
  return TruncSeries(std::move(p));
}

TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b, std::size_t order) {
  std::vector<double> c(order + 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs.size() && i <= order; ++i) {
    if (a.coeffs[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.coeffs.size() && i + j <= order; ++j) {
      c[i + j] += a.coeffs[i] * b.coeffs[j];
    }
  }
  return TruncSeries(std::move(c));
}

TruncSeries divide_by_z_minus_one(const TruncSeries& f) {
  // f/(z−1) = −f·(1 + z + z² + …)
  std::vector<double> q(f.coeffs.size());
  double run = 0.0;
  for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
    run += f.coeffs[k];
    q[k] = -run;
  }
  return TruncSeries(std::move(q));
}

namespace {

// Row k holds the z2-series multiplying z1^k in the exponent
// h Σ ν_n (z1^n − 1)(z2^n − 1).
BivarSeries exponent_series(const RateProfile& profile, double h, std::size_t d1, std::size_t d2) {
  BivarSeries e = BivarSeries::Zero(d1 + 1, d2 + 1);
  const auto rates = profile.rates();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const double w = h * rates[i];
    if (w == 0.0) continue;
    const std::size_t n = i + 1;
    e(0, 0) += w;
    if (n <= d2) e(0, n) -= w;
    if (n <= d1) {
      e(n, 0) -= w;
      if (n <= d2) e(n, n) += w;
    }
  }
  return e;
}

// Product of two z2-series stored as matrix rows, truncated at d2.
void accumulate_row_product(const BivarSeries& a, std::size_t ra, const BivarSeries& b,
                            std::size_t rb, double scale, Eigen::Ref<Eigen::RowVectorXd> out) {
  const Eigen::Index d2 = out.size() - 1;
  for (Eigen::Index i = 0; i <= d2; ++i) {
    const double ai = a(ra, i);
    if (ai == 0.0) continue;
    for (Eigen::Index j = 0; i + j <= d2; ++j) out(i + j) += scale * ai * b(rb, j);
  }
}

}  // namespace

BivarSeries bivar_psi_series(const RateProfile& profile, double h, std::size_t d1, std::size_t d2,
                             bool a1, bool a2) {
  if (!(h > 0.0)) throw ArgumentError("bin width h must be positive");
  const BivarSeries e = exponent_series(profile, h, d1, d2);

  // exp along z1, coefficients are truncated series in z2.
  BivarSeries f = BivarSeries::Zero(d1 + 1, d2 + 1);
  {
    TruncSeries e0;
    e0.coeffs.resize(d2 + 1);
    for (std::size_t j = 0; j <= d2; ++j) e0.coeffs[j] = e(0, j);
    const TruncSeries f0 = series_exp(e0);
    for (std::size_t j = 0; j <= d2; ++j) f(0, j) = f0.coeffs[j];
  }
  for (std::size_t i = 1; i <= d1; ++i) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d2 + 1);
    for (std::size_t k = 1; k <= i; ++k) {
      accumulate_row_product(e, k, f, i - k, static_cast<double>(k), acc);
    }
    f.row(i) = acc / static_cast<double>(i);
  }
  // Subtract 1 without cancellation in the constant term.
  f(0, 0) = std::expm1(e(0, 0));
  f /= h;

  if (a1) {
    for (std::size_t i = 1; i <= d1; ++i) f.row(i) += f.row(i - 1);
    f = -f;
  }
  if (a2) {
    for (std::size_t j = 1; j <= d2; ++j) f.col(j) += f.col(j - 1);
    f = -f;
  }
  return f;
}

double bivar_taylor_J(const RateProfile& profile, double h, std::size_t n1, std::size_t n2, bool a1,
                      bool a2) {
  return bivar_psi_series(profile, h, n1, n2, a1, a2)(n1, n2);
}

}  // namespace depoisson
