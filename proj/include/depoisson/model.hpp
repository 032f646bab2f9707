#pragma once

#include <complex>
#include <cstddef>
#include <optional>

#include "depoisson/profile.hpp"
#include "depoisson/series.hpp"

namespace depoisson {

// γ_h(θ) = exp[h Σ ν_n (e^{inθ} − 1)], the characteristic function of one
// bin count.
std::complex<double> cf_theoretical(const RateProfile& profile, double h, double theta);

// P[Z_l = k] for k = 0…kmax. Without kmax, the smallest k whose cumulative
// mass exceeds 1 − 1e−12, capped at 10·(1 + hν_+·K).
TruncSeries pmf_theoretical(const RateProfile& profile, double h,
                            std::optional<std::size_t> kmax = std::nullopt);

// ρ_m = Σ_{n ≥ m} ν_n.
double tail_sum(const RateProfile& profile, std::size_t m);

// Thresholds used to turn the asymptotic validity conditions into flags.
// They are advisory; nothing in the estimators enforces them.
struct DiagnosticThresholds {
  double min_bins = 100.0;             // L = T/h must be at least this large
  double rate_ratio = 0.1;             // ν_+/T ≤ rate_ratio · ν_+²
  double moderate_h_nu_plus = 3.0;     // "hν_+ = O(1)" branch
  double large_branch_bias = 0.1;      // e^{2hν_+}/(Th) ≤ this
  double large_branch_h2T = 10.0;      // h²T ≤ this
};

struct DiagnosticsReport {
  double h_nu_plus = 0.0;
  double nu_plus_over_T = 0.0;
  double xi1_lower = 0.0;  // (e^{2hν_+} − 1)/(Th)
  double xi1_upper = 0.0;  // (e^{4hν_+} − 1)/(Th)
  double eps2_bound = 0.0;  // upper bound on the quadratic remainder
  double xi2_lower = 0.0;
  bool c0_ok = false;
  bool c1_ok = false;
};

DiagnosticsReport asymptotics_report(double nu_plus, double h, double T,
                                     const DiagnosticThresholds& thresholds = {});

}  // namespace depoisson
