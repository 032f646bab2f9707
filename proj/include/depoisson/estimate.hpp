#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "depoisson/ecf.hpp"
#include "depoisson/profile.hpp"
#include "depoisson/simulate.hpp"

namespace depoisson {

enum class Correction { none, auto_shrink, auto_edit };

std::string to_string(Correction c);
Correction parse_correction(const std::string& s);

struct EstimationOptions {
  std::size_t nmax = 12;
  // Fixed inversion grid. Without it the grid starts at default_grid_size
  // and doubles until the estimates stop changing.
  std::optional<std::size_t> grid_size;
  Correction correction = Correction::auto_edit;
  // Fixed shrinking parameter; adaptive ladder when absent.
  std::optional<double> delta;
  double eps = 0.075;
  // With correction = none, estimate from the mirrored-branch log instead of
  // failing when the winding number is nonzero.
  bool allow_nonzero_winding = false;

  void validate() const;
};

struct AppliedCorrection {
  Correction kind = Correction::none;  // none when the raw ECF was used
  double parameter = 0.0;              // δ or ε
};

struct EstimateResult {
  EstimatedProfile rates;       // ν̂_1…ν̂_M
  double nu_plus_hat = 0.0;     // −log p̂_0 / h
  std::vector<double> tails;    // ρ̂_1…ρ̂_M
  int winding_before = 0;
  int winding_after = 0;
  bool singular_before = false;  // raw ECF vanished on the grid; winding_before undefined
  AppliedCorrection correction;
  std::size_t grid_size = 0;    // grid of the final inversion
  double h = 0.0;
  double T = 0.0;
  CoeffPoly poly;               // coefficients actually inverted
};

// Fourier inversion of the phase-continuous log-ECF:
//   ν̂_n = (1/(hG)) Σ_j log γ̂(θ_j) e^{−inθ_j},
// with ν̂_+ = −log p̂_0 / h and tails by telescoping. A nonzero winding
// number triggers the configured correction.
EstimateResult estimate_rates_fourier(const BinSeries& bins, const EstimationOptions& opts = {});

// Closed form h·ν̂ = log of the histogram generating function, orders 1…nmax.
EstimatedProfile estimate_rates_histogram(const BinSeries& bins, std::size_t nmax);
EstimatedProfile estimate_rates_histogram(const CoeffPoly& poly, double h, std::size_t nmax);

enum class TailMode { telescoping, quadrature };

// ρ̂_1…ρ̂_M. Quadrature mode integrates log γ̂(θ)·e^{−imθ}/(1 − e^{−iθ})
// on the grid with the θ = 0 node set to its limit, the mean count.
std::vector<double> estimate_tails(const BinSeries& bins, const EstimationOptions& opts = {},
                                   TailMode mode = TailMode::telescoping);

// Σ c_n ν̂_n with c_1 first.
double estimate_functional(const BinSeries& bins, std::span<const double> c,
                           EstimationOptions opts = {});

struct NormalizedProfile {
  std::vector<double> omega;                      // ν̂_n / ν̂_+
  std::vector<std::optional<double>> omega_sqrt;  // (ν̂_n / ν̂_+)^{1/2} where ν̂_n ≥ 0
};

NormalizedProfile reparameterize(const EstimateResult& est);

}  // namespace depoisson
