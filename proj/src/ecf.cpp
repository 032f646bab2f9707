#include "depoisson/ecf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "depoisson/error.hpp"
#include "depoisson/fft.hpp"
#include "depoisson/roots.hpp"

namespace depoisson {

using cd = std::complex<double>;

double CoeffPoly::sum() const { return std::accumulate(coeffs.begin(), coeffs.end(), 0.0); }

double CoeffPoly::mean() const {
  double s = 0.0;
  for (std::size_t k = 1; k < coeffs.size(); ++k) s += static_cast<double>(k) * coeffs[k];
  return s;
}

CoeffPoly histogram(const BinSeries& bins) {
  bins.validate();
  const auto kmax = *std::max_element(bins.counts.begin(), bins.counts.end());
  std::vector<std::size_t> tally(static_cast<std::size_t>(kmax) + 1, 0);
  for (auto z : bins.counts) ++tally[static_cast<std::size_t>(z)];
  CoeffPoly out;
  out.coeffs.resize(tally.size());
  const double L = static_cast<double>(bins.size());
  for (std::size_t k = 0; k < tally.size(); ++k) out.coeffs[k] = static_cast<double>(tally[k]) / L;
  out.normalized = true;
  return out;
}

std::size_t default_grid_size(std::size_t degree) {
  return std::bit_ceil(std::max<std::size_t>(256, 8 * (degree + 1)));
}

EcfLog ecf_eval(const CoeffPoly& poly, std::size_t grid_size) {
  if (poly.coeffs.empty()) throw ArgumentError("ecf_eval: empty coefficient vector");
  if (grid_size < 4 * (poly.degree() + 1)) throw ArgumentError("ecf_eval: grid size must be at least 4(K+1)");
  std::vector<cd> padded(grid_size, cd{0.0, 0.0});
  for (std::size_t k = 0; k < poly.coeffs.size(); ++k) padded[k] = poly.coeffs[k];
  EcfLog out;
  out.coeffs = poly.coeffs;
  out.grid_size = grid_size;
  out.values = fft::dft(padded, +1);
  return out;
}

namespace {

// Unwrapped phase on nodes 0…G/2, or nullopt when a step exceeds π/2.
std::optional<std::vector<double>> unwrap_half(const std::vector<cd>& values, double zero_tol) {
  const std::size_t G = values.size();
  std::vector<double> phase(G / 2 + 1);
  if (std::abs(values[0]) <= zero_tol) throw SingularEcfError("ECF vanishes at theta = 0");
  phase[0] = std::arg(values[0]);
  for (std::size_t j = 1; j <= G / 2; ++j) {
    if (std::abs(values[j]) <= zero_tol) throw SingularEcfError("ECF vanishes on the frequency grid");
    const double step = std::arg(values[j] / values[j - 1]);
    if (std::abs(step) > 0.5 * std::numbers::pi) return std::nullopt;
    phase[j] = phase[j - 1] + step;
  }
  return phase;
}

}  // namespace

EcfLog continuous_log(EcfLog ecf, const UnwrapOptions& opts) {
  if (ecf.grid_size < 4 || ecf.values.size() != ecf.grid_size || ecf.grid_size % 2 != 0) {
    throw ArgumentError("continuous_log: grid must be even with at least 4 nodes");
  }
  std::optional<std::vector<double>> phase = unwrap_half(ecf.values, opts.zero_tolerance);
  while (!phase) {
    if (2 * ecf.grid_size > opts.max_grid) {
      throw NumericError("continuous_log: phase unwrapping failed at the grid-size cap");
    }
    ecf = ecf_eval(CoeffPoly{ecf.coeffs, true}, 2 * ecf.grid_size);
    phase = unwrap_half(ecf.values, opts.zero_tolerance);
  }

  const std::size_t G = ecf.grid_size;
  const auto& ph = *phase;
  // Full-loop phase change is 2·phase(π); phase(π) is a multiple of π.
  ecf.winding = static_cast<int>(std::lround(ph[G / 2] / std::numbers::pi));

  ecf.log_values.assign(G, cd{0.0, 0.0});
  for (std::size_t j = 0; j < G / 2; ++j) ecf.log_values[j] = {std::log(std::abs(ecf.values[j])), ph[j]};
  ecf.log_values[G / 2] = {std::log(std::abs(ecf.values[G / 2])), 0.0};
  for (std::size_t j = G / 2 + 1; j < G; ++j) ecf.log_values[j] = std::conj(ecf.log_values[G - j]);
  return ecf;
}

int winding_number(const CoeffPoly& poly) {
  return continuous_log(ecf_eval(poly, default_grid_size(poly.degree()))).winding;
}

CoeffPoly shrink(const CoeffPoly& poly, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("shrink: delta must lie in (0, 1)");
  CoeffPoly out = poly;
  for (auto& c : out.coeffs) c *= (1.0 - delta);
  out.coeffs[0] += delta;
  return out;
}

std::optional<ShrinkResult> adaptive_shrink(const CoeffPoly& poly) {
  for (double delta : kShrinkLadder) {
    CoeffPoly s = shrink(poly, delta);
    if (winding_number(s) == 0) return ShrinkResult{std::move(s), delta};
  }
  return std::nullopt;
}

CoeffPoly edit_zeros(const CoeffPoly& poly, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("edit_zeros: eps must be positive");
  if (poly.coeffs.empty() || poly.coeffs.back() == 0.0) {
    throw ArgumentError("edit_zeros: leading coefficient must be nonzero");
  }
  if (poly.coeffs.front() == 0.0) throw DomainError("edit_zeros: root at the origin cannot be moved radially");
  if (poly.degree() == 0) return poly;

  std::vector<cd> roots = polynomial_roots(poly.coeffs);
  bool edited = false;
  for (cd& a : roots) {
    if (std::abs(a - 1.0) <= 1e-10) throw DomainError("edit_zeros: degenerate polynomial with a root at 1");
    const double r = std::abs(a);
    if (r <= 1.0 + eps) {
      a *= (1.0 + eps) / r;
      edited = true;
    }
  }
  if (!edited) return poly;

  // Π (w − α̃_k)/(1 − α̃_k), normalizing factor by factor.
  std::vector<cd> c{1.0};
  for (const cd& a : roots) {
    const cd scale = 1.0 / (1.0 - a);
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = (c[k - 1] - a * c[k]) * scale;
    c[0] = -a * c[0] * scale;
  }
  double imag_residue = 0.0;
  double scale = 0.0;
  for (const cd& v : c) {
    imag_residue = std::max(imag_residue, std::abs(v.imag()));
    scale = std::max(scale, std::abs(v));
  }
  if (imag_residue > 1e-8 * std::max(1.0, scale)) {
    throw NumericError("edit_zeros: re-expanded polynomial is not real");
  }
  CoeffPoly out;
  out.coeffs.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) out.coeffs[k] = c[k].real();
  const double total = out.sum();
  for (auto& v : out.coeffs) v /= total;
  out.normalized = true;
  return out;
}

}  // namespace depoisson
