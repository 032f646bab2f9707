#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "depoisson/covariance.hpp"
#include "depoisson/estimate.hpp"
#include "depoisson/profile.hpp"
#include "depoisson/simulate.hpp"

namespace depoisson {

enum class TestKind { wald, vm, max_v };

struct TestResult {
  double statistic = 0.0;
  int df = 0;  // Wald only
  double p_value = 1.0;
  TestKind kind = TestKind::wald;
};

// W = T (Aν̂)′ (AΩ̂A′)^{−1} Aν̂ against χ²_q. `omega` is the unscaled Ω̂
// (T times the covariance). Throws SingularityError if A is rank deficient
// or AΩ̂A′ has condition number above 1e12.
TestResult wald_test(const EstimatedProfile& est, const CovMatrix& omega, const Eigen::MatrixXd& A,
                     double T);

struct VmStatistics {
  std::vector<double> v;          // V_1…V_mmax
  std::vector<bool> degenerate;   // Σ̂_{m,m} ≤ 1e−12, V_m reported as 0
  EstimateResult estimate;
  CovMatrix sigma;                // plug-in Σ̂
};

// V_m = (T/Σ̂_{m,m})^{1/2} ρ̂_m with Σ̂ from positive parts of ν̂_1…ν̂_K.
// K defaults to the estimation order max(opts.nmax, mmax).
VmStatistics vm_statistics(const BinSeries& bins, std::size_t mmax, EstimationOptions opts = {},
                           std::optional<std::size_t> K = std::nullopt);

// Upper one-sided standard normal p-value.
double normal_upper_p(double z);

// Test of ρ_m = 0 for all m1 ≤ m ≤ m2 via V = max V_m. The reference
// distribution is a parametric bootstrap: B series of the observed length
// are simulated from the plug-in profile truncated at m1 − 1.
// p = (1 + #{V* ≥ V})/(B + 1).
TestResult max_v_test(const BinSeries& bins, std::size_t m1, std::size_t m2, std::size_t B,
                      std::uint64_t seed, EstimationOptions opts = {}, std::size_t threads = 1);

struct PowerProfile {
  std::vector<double> beta;  // β_1…β_nmax
  std::size_t reps = 0;
  double threshold = 0.0;
  std::size_t failures = 0;  // replicates whose estimation threw; counted as non-rejections
};

// β_n = fraction of `reps` simulated series (profile, h, L) with V_n > threshold.
PowerProfile power_profile(const RateProfile& profile, double h, std::size_t L, std::size_t reps,
                           double threshold, std::size_t nmax, std::uint64_t seed,
                           EstimationOptions opts = {}, std::size_t threads = 1);

struct ScreeningRow {
  std::size_t n = 0;
  double nu_hat = 0.0;
  double rho_hat = 0.0;
  double v = 0.0;
  double p = 1.0;
  bool degenerate = false;
};

std::vector<ScreeningRow> screening_report(const BinSeries& bins, std::size_t nmax,
                                           EstimationOptions opts = {});

}  // namespace depoisson
