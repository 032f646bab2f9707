#include "depoisson/model.hpp"

#include <algorithm>
#include <cmath>

#include "depoisson/error.hpp"

namespace depoisson {

std::complex<double> cf_theoretical(const RateProfile& profile, double h, double theta) {
  if (!(h > 0.0)) throw ArgumentError("bin width h must be positive");
  if (theta == 0.0) return {1.0, 0.0};
  std::complex<double> s{0.0, 0.0};
  const auto rates = profile.rates();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    const double a = static_cast<double>(i + 1) * theta;
    // e^{ia} − 1 = (cos a − 1) + i sin a, with cos a − 1 = −2 sin²(a/2)
    const double sh = std::sin(0.5 * a);
    s += rates[i] * std::complex<double>(-2.0 * sh * sh, std::sin(a));
  }
  return std::exp(h * s);
}

TruncSeries pmf_theoretical(const RateProfile& profile, double h, std::optional<std::size_t> kmax) {
  if (!(h > 0.0)) throw ArgumentError("bin width h must be positive");
  const double hnu = h * profile.nu_plus();
  std::size_t order = 0;
  if (kmax) {
    order = *kmax;
  } else {
    const double k = static_cast<double>(std::max<std::size_t>(profile.max_jump(), 1));
    order = static_cast<std::size_t>(std::ceil(10.0 * (1.0 + hnu * k)));
  }
  TruncSeries exponent;
  exponent.coeffs.assign(order + 1, 0.0);
  exponent.coeffs[0] = -hnu;
  const auto rates = profile.rates();
  for (std::size_t i = 0; i < rates.size() && i + 1 <= order; ++i) exponent.coeffs[i + 1] = h * rates[i];
  TruncSeries p = series_exp(exponent);
  if (!kmax) {
    double cum = 0.0;
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
      cum += p.coeffs[k];
      if (cum > 1.0 - 1e-12) {
        p.coeffs.resize(k + 1);
        break;
      }
    }
  }
  return p;
}

double tail_sum(const RateProfile& profile, std::size_t m) {
  if (m < 1) throw ArgumentError("tail_sum: order m must be at least 1");
  const auto rates = profile.rates();
  double s = 0.0;
  for (std::size_t n = m; n <= rates.size(); ++n) s += rates[n - 1];
  return s;
}

DiagnosticsReport asymptotics_report(double nu_plus, double h, double T,
                                     const DiagnosticThresholds& th) {
  if (!(h > 0.0)) throw ArgumentError("bin width h must be positive");
  if (!(T >= h)) throw ArgumentError("observation length T must be at least h");
  if (!(nu_plus >= 0.0)) throw ArgumentError("nu_plus must be nonnegative");

  DiagnosticsReport r;
  const double x = h * nu_plus;
  r.h_nu_plus = x;
  r.nu_plus_over_T = nu_plus / T;
  const double e2 = std::expm1(2.0 * x);
  const double e4 = std::expm1(4.0 * x);
  const double e8 = std::expm1(8.0 * x);
  r.xi1_lower = e2 / (T * h);
  r.xi1_upper = e4 / (T * h);
  r.eps2_bound = 3.0 * (e4 / T) * (e4 / T) + 3.0 * (h / (T * T * T)) * e8;
  r.xi2_lower = 2.0 * (1.0 - h / T) * (e2 / T) * (e2 / T);

  const double bins = T / h;
  r.c0_ok = bins >= th.min_bins && r.nu_plus_over_T <= th.rate_ratio * nu_plus * nu_plus;
  const bool moderate = x <= th.moderate_h_nu_plus;
  const bool large_ok = std::exp(2.0 * x) / (T * h) <= th.large_branch_bias && h * h * T <= th.large_branch_h2T;
  r.c1_ok = moderate || large_ok;
  return r;
}

}  // namespace depoisson
