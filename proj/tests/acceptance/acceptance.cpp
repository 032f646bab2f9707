// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "depoisson/covariance.hpp"
#include "depoisson/ecf.hpp"
#include "depoisson/error.hpp"
#include "depoisson/estimate.hpp"
#include "depoisson/inference.hpp"
#include "depoisson/model.hpp"
#include "depoisson/parallel.hpp"
#include "depoisson/rng.hpp"
#include "depoisson/series.hpp"
#include "depoisson/simulate.hpp"

using namespace depoisson;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <typename... Args>
std::string format(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::size_t kThreads = default_threads();

// 1. Fourier inversion equals the histogram closed form when the winding is zero.
Outcome estimator_equivalence() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0, attempts = 0;
  double worst = 0.0;
  while (checked < 100) {
    ++attempts;
    std::vector<double> r(1 + attempts % 6);
    for (auto& v : r) v = 20.0 * u(rng);
    const BinSeries b = simulate_bins(RateProfile(r), 0.005 + 0.03 * u(rng), 200 + 20 * (attempts % 50),
                                      derive_seed(1001, attempts));
    const CoeffPoly c = histogram(b);
    if (c.coeffs[0] == 0.0) continue;
    try {
      if (winding_number(c) != 0) continue;
    } catch (const SingularEcfError&) {
      continue;
    }
    ++checked;
    EstimationOptions o;
    o.correction = Correction::none;
    const EstimateResult f = estimate_rates_fourier(b, o);
    const EstimatedProfile h = estimate_rates_histogram(b, o.nmax);
    for (std::size_t n = 1; n <= o.nmax; ++n) worst = std::max(worst, std::abs(f.rates.rate(n) - h.rate(n)));
  }
  return {worst <= 1e-8, format("%d series, max |diff| = %.3g (tol 1e-8)", checked, worst)};
}

// 2. Taylor coefficients against the four closed forms.
Outcome closed_form_oracles() {
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(2, 6);
  double worst = 0.0;
  auto rel = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want) / std::abs(want));
  };
  for (int trial = 0; trial < 50; ++trial) {
    const double h = 0.001 + 0.099 * u(rng);
    std::vector<double> r(static_cast<std::size_t>(len(rng)));
    for (auto& v : r) v = 0.05 + u(rng);
    double tot = 0.0;
    for (double v : r) tot += v;
    const double target = 0.05 + 2.95 * u(rng);  // hν_+ ≤ 3
    for (auto& v : r) v *= target / (h * tot);
    const RateProfile p(r);
    const double x = h * p.nu_plus(), e = std::exp(x), n1 = p.rate(1), n2 = p.rate(2);
    rel(bivar_taylor_J(p, h, 0, 0, true, true), std::expm1(x) / h);
    rel(bivar_taylor_J(p, h, 1, 1, false, false), e * (n1 + h * n1 * n1));
    rel(bivar_taylor_J(p, h, 1, 2, false, false), e * h * n1 * (n2 - n1 - h * n1 * n1 / 2));
    rel(bivar_taylor_J(p, h, 0, 1, true, false), e * n1);
  }
  return {worst <= 1e-10, format("50 profiles, max relative error = %.3g (tol 1e-10)", worst)};
}

// 3. Taylor coefficients against 2-D quadrature.
Outcome taylor_vs_quadrature() {
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> order(0, 8), len(1, 5), bit(0, 1);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double h = 0.01 + 0.09 * u(rng);
    std::vector<double> r(static_cast<std::size_t>(len(rng)));
    for (auto& v : r) v = u(rng);
    double tot = 0.0;
    for (double v : r) tot += v;
    const double scale = (0.1 + 2.9 * u(rng)) / (h * tot);
    for (auto& v : r) v *= scale;
    const KernelSpec s = make_spec(RateProfile(r), h);
    const auto n1 = static_cast<std::size_t>(order(rng)), n2 = static_cast<std::size_t>(order(rng));
    const bool a1 = bit(rng), a2 = bit(rng);
    const double taylor = bivar_taylor_J(s.profile, h, n1, n2, a1, a2);
    const double quad = cov_quadrature_oracle(s, n1, n2, a1, a2);
    worst = std::max(worst, std::abs(taylor - quad) / std::max(1.0, std::abs(taylor)));
  }
  return {worst <= 1e-6, format("20 tuples, max error = %.3g (tol 1e-6, relative above 1)", worst)};
}

// 4. |Ω_nn(h) − ν_n| halves with h.
Outcome small_h_limit() {
  const RateProfile p({40, 10, 4, 3, 1});
  const double hs[] = {0.02, 0.01, 0.005};
  double dev[3][5];
  for (int i = 0; i < 3; ++i) {
    const CovMatrix om = cov_rates(make_spec(p, hs[i]), 1.0, 5);
    for (std::size_t n = 1; n <= 5; ++n) dev[i][n - 1] = std::abs(om(n, n) - p.rate(n));
  }
  bool ok = true;
  std::string ratios;
  for (std::size_t n = 0; n < 5; ++n) {
    const double q1 = dev[1][n] / dev[0][n], q2 = dev[2][n] / dev[1][n];
    ok = ok && q1 >= 0.35 && q1 <= 0.65 && q2 >= 0.35 && q2 <= 0.65;
    ratios += format(" n=%zu:%.3f/%.3f", n + 1, q1, q2);
  }
  return {ok, "ratios" + ratios + " (band [0.35, 0.65])"};
}

// Replicate means of ν̂ under the default correction.
std::vector<double> replicate_mean(const RateProfile& p, double h, std::size_t L, std::size_t reps,
                                   std::uint64_t seed, std::size_t nmax) {
  std::vector<std::vector<double>> est(reps);
  parallel_for(reps, kThreads, [&](std::size_t r) {
    EstimationOptions o;
    o.nmax = nmax;
    est[r] = estimate_rates_fourier(simulate_bins(p, h, L, derive_seed(seed, r)), o).rates.rates;
  });
  std::vector<double> mean(nmax, 0.0);
  for (const auto& e : est) {
    for (std::size_t n = 0; n < nmax; ++n) mean[n] += e[n] / static_cast<double>(reps);
  }
  return mean;
}

// 5. Example-1 replicate means.
Outcome example1_reproduction() {
  const RateProfile p({40, 10, 4, 3, 1});
  const double T = 30.0, h = 0.02;
  const std::size_t reps = 50, nmax = 12;
  const auto mean = replicate_mean(p, h, 1500, reps, 1005, nmax);
  const CovMatrix om = cov_rates(make_spec(p, h), T, nmax);
  double worst = 0.0;
  for (std::size_t n = 1; n <= nmax; ++n) {
    const double se = std::sqrt(om(n, n) / (T * static_cast<double>(reps)));
    worst = std::max(worst, std::abs(mean[n - 1] - p.rate(n)) / se);
  }
  return {worst <= 4.0, format("max |mean − ν_n| = %.2f standard errors (tol 4)", worst)};
}

// 6. Example-2 power profile.
Outcome example2_power() {
  const RateProfile p = RateProfile::from_pairs({{1, 150.0}, {7, 7.0}});
  const PowerProfile pw = power_profile(p, 0.005, 12000, 50, 2.0, 12, 1006, {}, kThreads);
  bool ok = true;
  std::string betas;
  for (std::size_t n = 1; n <= 12; ++n) {
    const double b = pw.beta[n - 1];
    if (n >= 2 && n <= 7) ok = ok && b >= 0.8;
    if (n >= 8) ok = ok && b <= 0.2;
    betas += format(" %.2f", b);
  }
  return {ok, "beta_1..12 =" + betas + " (≥0.8 for 2..7, ≤0.2 for 8..12)"};
}

// 7. Winding frequency and the two corrections in the figure-3 scenario.
Outcome figure3_scenario() {
  const RateProfile p({17, 11, 14, 6});
  const double T = 60.0, h = 0.05;
  const std::size_t reps = 50, nmax = 12;
  const CovMatrix om = cov_rates(make_spec(p, h), T, nmax);
  std::atomic<int> wound{0}, edit_ok{0}, shrink_ok{0};
  auto within = [&](const EstimateResult& e) {
    for (std::size_t n = 1; n <= nmax; ++n) {
      if (std::abs(e.rates.rate(n) - p.rate(n)) > 5.0 * std::sqrt(om(n, n) / T)) return false;
    }
    return true;
  };
  parallel_for(reps, kThreads, [&](std::size_t r) {
    const BinSeries b = simulate_bins(p, h, 1200, derive_seed(1007, r));
    try {
      if (winding_number(histogram(b)) != 0) ++wound;
    } catch (const SingularEcfError&) {
      ++wound;  // the loop passes through the origin
    }
    EstimationOptions edit;
    edit.nmax = nmax;
    edit.correction = Correction::auto_edit;
    edit.eps = 0.075;
    try {
      if (within(estimate_rates_fourier(b, edit))) ++edit_ok;
    } catch (const NumericError&) {
    }
    EstimationOptions shrink;
    shrink.nmax = nmax;
    shrink.correction = Correction::auto_shrink;
    try {
      if (within(estimate_rates_fourier(b, shrink))) ++shrink_ok;
    } catch (const NumericError&) {
    }
  });
  const double n = static_cast<double>(reps);
  const bool ok = wound >= 0.10 * n && edit_ok == static_cast<int>(reps) && shrink_ok >= 0.96 * n;
  return {ok, format("nonzero/singular winding %d/50 (≥5), edit within 5 SE %d/50 (50), shrink %d/50 (≥48)",
                     wound.load(), edit_ok.load(), shrink_ok.load())};
}

// 8. Null rejection frequencies at the 5% level.
Outcome null_calibration() {
  const std::size_t R = 500;
  const double h = 0.02;
  std::atomic<int> wald{0}, vm{0};
  parallel_for(R, kThreads, [&](std::size_t r) {
    const BinSeries b = simulate_bins(RateProfile({40.0}), h, 1500, derive_seed(1008, r));
    EstimationOptions o;
    o.nmax = 2;
    const EstimateResult e = estimate_rates_fourier(b, o);
    const CovMatrix omega = cov_rates(plug_in_spec(e.rates, h, 2), b.duration(), 2);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 2);
    A(0, 1) = 1.0;
    if (wald_test(e.rates, omega, A, b.duration()).p_value < 0.05) ++wald;

    const BinSeries c = simulate_bins(RateProfile({40, 10}), h, 1500, derive_seed(1009, r));
    if (normal_upper_p(vm_statistics(c, 3).v[2]) < 0.05) ++vm;
  });
  const double fw = wald / static_cast<double>(R), fv = vm / static_cast<double>(R);
  const bool ok = fw >= 0.02 && fw <= 0.10 && fv >= 0.02 && fv <= 0.10;
  return {ok, format("Wald nu_2=0 %.3f, V_3 %.3f (band [0.02, 0.10])", fw, fv)};
}

// 9. Diagnostics arithmetic; oracle values are 50-digit evaluations of the bound formulas.
Outcome diagnostics_arithmetic() {
  struct Case {
    double nu_plus, h, T, h_nu_plus, xi1_lo, xi1_hi, eps2, xi2_lo;
  };
  const Case cases[] = {
      {58, 0.02, 30, 1.16, 15.292790510122224805, 170.90724597213507567, 35.074967252972406855,
       0.18697082290034137642},
      {157, 0.005, 60, 0.785, 12.688827312583927245, 73.679556195740609282, 0.40718777430286304431,
       0.0080496460686847567325},
      {48, 0.05, 60, 2.4, 40.170139172911626919, 4921.2605218590908719, 181792.42646734331517,
       8.0614769055172331583},
  };
  bool ok = true;
  double worst = 0.0, worst_ulps = 0.0;
  for (const auto& c : cases) {
    const auto r = asymptotics_report(c.nu_plus, c.h, c.T);
    const double ulp = std::nextafter(c.h_nu_plus, INFINITY) - c.h_nu_plus;
    const double ulps = std::abs(r.h_nu_plus - c.h_nu_plus) / ulp;
    worst_ulps = std::max(worst_ulps, ulps);
    ok = ok && ulps <= 2.0;
    for (auto [got, want] : {std::pair{r.xi1_lower, c.xi1_lo}, std::pair{r.xi1_upper, c.xi1_hi},
                             std::pair{r.eps2_bound, c.eps2}, std::pair{r.xi2_lower, c.xi2_lo}}) {
      worst = std::max(worst, std::abs(got / want - 1.0));
    }
  }
  ok = ok && worst <= 1e-12;
  return {ok, format("h*nu_plus within %.0f ulp of 1.16/0.785/2.4 (tol 2), bounds max relative error %.3g "
                     "(tol 1e-12)",
                     worst_ulps, worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double budget_s;  // runtime limit; 0 when none is stated
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, 10, estimator_equivalence}, {2, 5, closed_form_oracles},  {3, 60, taylor_vs_quadrature},
      {4, 0, small_h_limit},          {5, 120, example1_reproduction}, {6, 180, example2_power},
      {7, 0, figure3_scenario},       {8, 180, null_calibration},   {9, 0, diagnostics_arithmetic},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_s == 0 || secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%s criterion %d: %s; %.2f s%s\n", pass ? "PASS" : "FAIL", c.id, o.detail.c_str(), secs,
                in_time ? "" : " (over time budget)");
    std::fflush(stdout);
  }
  return failures;
}
