#include "depoisson/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "depoisson/error.hpp"
#include "depoisson/parallel.hpp"
#include "depoisson/rng.hpp"

namespace depoisson {

namespace {
constexpr double kDegenerateVariance = 1e-12;
constexpr double kMaxCondition = 1e12;
}  // namespace

TestResult wald_test(const EstimatedProfile& est, const CovMatrix& omega, const Eigen::MatrixXd& A,
                     double T) {
  const auto M = static_cast<Eigen::Index>(est.size());
  if (A.rows() < 1 || A.cols() != M) throw ArgumentError("wald_test: A must be q x M with M = number of estimates");
  if (omega.entries.rows() != M || omega.entries.cols() != M) throw ArgumentError("wald_test: covariance must be M x M");
  if (!(T > 0.0)) throw ArgumentError("wald_test: T must be positive");

  TestResult r;
  r.kind = TestKind::wald;
  r.df = static_cast<int>(A.rows());

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.rank() != A.rows()) throw SingularityError("wald_test: restriction matrix is rank deficient");

  const Eigen::VectorXd nu = Eigen::Map<const Eigen::VectorXd>(est.rates.data(), M);
  const Eigen::VectorXd a_nu = A * nu;
  if (a_nu.isZero(0.0)) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  const Eigen::MatrixXd S = A * omega.entries * A.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(0) / sv(sv.size() - 1) > kMaxCondition) {
    throw SingularityError("wald_test: A Omega A' is singular or ill-conditioned");
  }
  r.statistic = T * a_nu.dot(S.ldlt().solve(a_nu));
  const boost::math::chi_squared chi2(static_cast<double>(r.df));
  r.p_value = std::clamp(boost::math::cdf(boost::math::complement(chi2, std::max(r.statistic, 0.0))), 0.0, 1.0);
  return r;
}

double normal_upper_p(double z) {
  static const boost::math::normal standard;
  return boost::math::cdf(boost::math::complement(standard, z));
}

VmStatistics vm_statistics(const BinSeries& bins, std::size_t mmax, EstimationOptions opts,
                           std::optional<std::size_t> K) {
  if (mmax < 1) throw ArgumentError("mmax must be at least 1");
  opts.nmax = std::max(opts.nmax, mmax);
  VmStatistics out;
  out.estimate = estimate_rates_fourier(bins, opts);
  const KernelSpec spec = plug_in_spec(out.estimate.rates, bins.h, K.value_or(opts.nmax));
  const double T = bins.duration();
  out.sigma = cov_tails(spec, T, mmax);
  out.v.resize(mmax);
  out.degenerate.resize(mmax);
  for (std::size_t m = 1; m <= mmax; ++m) {
    const double var = out.sigma(m, m);
    if (var <= kDegenerateVariance) {
      out.v[m - 1] = 0.0;
      out.degenerate[m - 1] = true;
    } else {
      out.v[m - 1] = std::sqrt(T / var) * out.estimate.tails[m - 1];
    }
  }
  return out;
}

namespace {

double max_v(const VmStatistics& vm, std::size_t m1, std::size_t m2) {
  double v = -std::numeric_limits<double>::infinity();
  for (std::size_t m = m1; m <= m2; ++m) v = std::max(v, vm.v[m - 1]);
  return v;
}

}  // namespace

TestResult max_v_test(const BinSeries& bins, std::size_t m1, std::size_t m2, std::size_t B,
                      std::uint64_t seed, EstimationOptions opts, std::size_t threads) {
  if (m1 < 2 || m2 < m1) throw ArgumentError("max_v_test: need 2 <= m1 <= m2");
  if (B < 100) throw ArgumentError("max_v_test: need at least 100 bootstrap replicates");

  const VmStatistics observed = vm_statistics(bins, m2, opts);
  const double v_obs = max_v(observed, m1, m2);

  std::vector<double> null_rates(m1 - 1, 0.0);
  for (std::size_t n = 1; n < m1; ++n) null_rates[n - 1] = std::max(observed.estimate.rates.rate(n), 0.0);
  const RateProfile null_profile(std::move(null_rates));

  std::vector<char> exceed(B, 0);
  parallel_for(B, threads, [&](std::size_t b) {
    const BinSeries sim = simulate_bins(null_profile, bins.h, bins.size(), derive_seed(seed, b));
    try {
      exceed[b] = max_v(vm_statistics(sim, m2, opts), m1, m2) >= v_obs;
    } catch (const NumericError&) {
      // a resample that cannot be estimated counts against rejection
      exceed[b] = 1;
    }
  });
  const auto count = static_cast<double>(std::count(exceed.begin(), exceed.end(), 1));

  TestResult r;
  r.kind = TestKind::max_v;
  r.statistic = v_obs;
  r.p_value = (1.0 + count) / (static_cast<double>(B) + 1.0);
  return r;
}

PowerProfile power_profile(const RateProfile& profile, double h, std::size_t L, std::size_t reps,
                           double threshold, std::size_t nmax, std::uint64_t seed,
                           EstimationOptions opts, std::size_t threads) {
  if (reps < 1) throw ArgumentError("power_profile: reps must be at least 1");
  if (nmax < 1) throw ArgumentError("power_profile: nmax must be at least 1");
  std::vector<std::vector<char>> hits(reps, std::vector<char>(nmax, 0));
  std::vector<char> failed(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const BinSeries bins = simulate_bins(profile, h, L, derive_seed(seed, r));
    try {
      const VmStatistics vm = vm_statistics(bins, nmax, opts);
      for (std::size_t n = 0; n < nmax; ++n) hits[r][n] = vm.v[n] > threshold;
    } catch (const NumericError&) {
      failed[r] = 1;
    }
  });

  PowerProfile out;
  out.reps = reps;
  out.threshold = threshold;
  out.beta.assign(nmax, 0.0);
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t n = 0; n < nmax; ++n) out.beta[n] += hits[r][n];
  }
  for (auto& b : out.beta) b /= static_cast<double>(reps);
  out.failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  return out;
}

std::vector<ScreeningRow> screening_report(const BinSeries& bins, std::size_t nmax, EstimationOptions opts) {
  const VmStatistics vm = vm_statistics(bins, nmax, opts);
  std::vector<ScreeningRow> rows(nmax);
  for (std::size_t n = 1; n <= nmax; ++n) {
    auto& row = rows[n - 1];
    row.n = n;
    row.nu_hat = vm.estimate.rates.rate(n);
    row.rho_hat = vm.estimate.tails[n - 1];
    row.v = vm.v[n - 1];
    row.degenerate = vm.degenerate[n - 1];
    row.p = row.degenerate ? 1.0 : normal_upper_p(row.v);
  }
  return rows;
}

}  // namespace depoisson
