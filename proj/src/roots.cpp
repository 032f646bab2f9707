#include "depoisson/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "depoisson/error.hpp"

namespace depoisson {

using cd = std::complex<double>;

std::complex<double> poly_eval(std::span<const double> c, cd w) {
  cd acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * w + c[k];
  return acc;
}

namespace {

// p(w) and p'(w) by Horner, plus Σ|c_k||w|^k for the rounding-error bound.
void eval_with_derivative(std::span<const double> c, cd w, cd& p, cd& dp, double& scale) {
  p = 0.0;
  dp = 0.0;
  scale = 0.0;
  const double r = std::abs(w);
  for (std::size_t k = c.size(); k-- > 0;) {
    dp = dp * w + p;
    p = p * w + c[k];
    scale = scale * r + std::abs(c[k]);
  }
}

// Horner evaluation error stays below about 2K·ε·Σ|c_k||w|^k.
constexpr double kBackwardErrorFactor = 4.0 * std::numeric_limits<double>::epsilon();

}  // namespace

std::vector<cd> polynomial_roots(std::span<const double> coeffs, const RootOptions& opts) {
  std::size_t hi = coeffs.size();
  while (hi > 0 && coeffs[hi - 1] == 0.0) --hi;
  if (hi == 0) throw ArgumentError("polynomial_roots: zero polynomial");
  std::size_t lo = 0;
  while (coeffs[lo] == 0.0) ++lo;

  std::vector<cd> roots(lo, cd{0.0, 0.0});
  const auto c = coeffs.subspan(lo, hi - lo);
  const std::size_t K = c.size() - 1;
  if (K == 0) return roots;
  if (K == 1) {
    roots.emplace_back(-c[0] / c[1], 0.0);
    return roots;
  }

  const double radius = std::pow(std::abs(c[0] / c[K]), 1.0 / static_cast<double>(K));
  std::vector<cd> z(K);
  for (std::size_t k = 0; k < K; ++k) {
    // offset keeps the start off the real axis and away from conjugate symmetry
    z[k] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(K) + 0.4);
  }

  std::vector<bool> done(K, false);
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    bool all_done = true;
    for (std::size_t k = 0; k < K; ++k) {
      if (done[k]) continue;
      cd p, dp;
      double scale = 0.0;
      eval_with_derivative(c, z[k], p, dp, scale);
      if (std::abs(p) <= kBackwardErrorFactor * static_cast<double>(K) * scale) {
        done[k] = true;
        continue;
      }
      const cd ratio = p / dp;
      cd repulse = 0.0;
      for (std::size_t j = 0; j < K; ++j) {
        if (j != k) repulse += 1.0 / (z[k] - z[j]);
      }
      const cd step = ratio / (1.0 - ratio * repulse);
      z[k] -= step;
      if (!std::isfinite(z[k].real()) || !std::isfinite(z[k].imag())) {
        throw NumericError("polynomial_roots: iteration diverged");
      }
      if (std::abs(step) <= opts.tolerance * std::max(1.0, std::abs(z[k]))) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }
  if (it == opts.max_iterations) throw NumericError("polynomial_roots: no convergence within iteration cap");

  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

std::vector<cd> expand_roots(std::span<const cd> roots, cd lead) {
  std::vector<cd> c{lead};
  c.reserve(roots.size() + 1);
  for (const cd& r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return c;
}

}  // namespace depoisson
