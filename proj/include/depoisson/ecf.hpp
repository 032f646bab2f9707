#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "depoisson/simulate.hpp"

namespace depoisson {

// Coefficients of the ECF as a polynomial in w = e^{iθ}: either the
// histogram p̂_k or an edited/shrunk analog.
struct CoeffPoly {
  std::vector<double> coeffs;
  bool normalized = true;

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  double sum() const;
  // Σ k c_k
  double mean() const;
};

// ECF on the grid θ_j = 2πj/G, j = 0…G−1.
struct EcfLog {
  std::vector<double> coeffs;  // polynomial the values came from
  std::size_t grid_size = 0;
  std::vector<std::complex<double>> values;
  // Phase-continuous log; log_values[0] = 0. Empty until continuous_log runs.
  std::vector<std::complex<double>> log_values;
  int winding = 0;
};

struct UnwrapOptions {
  std::size_t max_grid = std::size_t{1} << 20;
  double zero_tolerance = 1e-14;
};

CoeffPoly histogram(const BinSeries& bins);

// Smallest power of two ≥ max(256, 8(K + 1)).
std::size_t default_grid_size(std::size_t degree);

// γ̂(θ_j) = Σ_k c_k e^{ikθ_j} by a length-G DFT. Requires G ≥ 4(K + 1).
EcfLog ecf_eval(const CoeffPoly& poly, std::size_t grid_size);

// Fills log_values and winding. The phase is unwrapped from θ = 0 toward
// θ = π and mirrored (the coefficients are real, so γ̂(−θ) = conj γ̂(θ));
// the full-loop phase change is twice the phase at π, which is a multiple
// of π because γ̂(π) is real. The grid is doubled while any raw phase step
// exceeds π/2. Throws SingularEcfError on a zero of the ECF and
// NumericError when refinement hits the cap.
//
// With nonzero winding the returned log has a jump at θ = π; the node at π
// then carries log|γ̂(π)|.
EcfLog continuous_log(EcfLog ecf, const UnwrapOptions& opts = {});

// Winding number of the ECF loop about the origin.
int winding_number(const CoeffPoly& poly);

// γ̂(θ; δ) = δ + (1 − δ) γ̂(θ).
CoeffPoly shrink(const CoeffPoly& poly, double delta);

inline constexpr double kShrinkLadder[] = {0.005, 0.01, 0.02, 0.04, 0.08, 0.16};

struct ShrinkResult {
  CoeffPoly poly;
  double delta = 0.0;
};

// Smallest δ in kShrinkLadder whose shrunk ECF has winding 0, or nullopt.
std::optional<ShrinkResult> adaptive_shrink(const CoeffPoly& poly);

// Roots α_k of Σ c_k w^k with |α_k| ≤ 1 + ε are moved radially to modulus
// 1 + ε and the product Π (w − α̃_k)/(1 − α̃_k) is re-expanded. Returns the
// input unchanged when no root is edited.
CoeffPoly edit_zeros(const CoeffPoly& poly, double eps);

}  // namespace depoisson
