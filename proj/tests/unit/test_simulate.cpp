#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <boost/math/distributions/chi_squared.hpp>

#include "depoisson/error.hpp"
#include "depoisson/rng.hpp"
#include "depoisson/simulate.hpp"

using namespace depoisson;

namespace {

double mean(const BinSeries& b) {
  return std::accumulate(b.counts.begin(), b.counts.end(), 0.0) / static_cast<double>(b.size());
}

double variance(const BinSeries& b) {
  const double m = mean(b);
  double s = 0.0;
  for (auto z : b.counts) s += (static_cast<double>(z) - m) * (static_cast<double>(z) - m);
  return s / static_cast<double>(b.size() - 1);
}

// κ_r = h Σ n^r ν_n, the cumulants of one bin count.
double cumulant(const RateProfile& p, double h, int r) {
  double s = 0.0;
  for (std::size_t n = 1; n <= p.max_jump(); ++n) s += std::pow(static_cast<double>(n), r) * p.rate(n);
  return h * s;
}

// Asymptotic Kolmogorov tail P(K > x).
double kolmogorov_q(double x) {
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) s += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
  return std::clamp(s, 0.0, 1.0);
}

double ks_two_sample_p(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  const auto hi = std::max(*std::max_element(a.begin(), a.end()), *std::max_element(b.begin(), b.end()));
  std::vector<double> fa(hi + 1, 0.0), fb(hi + 1, 0.0);
  for (auto z : a) fa[z] += 1.0 / static_cast<double>(a.size());
  for (auto z : b) fb[z] += 1.0 / static_cast<double>(b.size());
  double ca = 0.0, cb = 0.0, d = 0.0;
  for (std::int64_t k = 0; k <= hi; ++k) {
    ca += fa[k];
    cb += fb[k];
    d = std::max(d, std::abs(ca - cb));
  }
  const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
  return kolmogorov_q(std::sqrt(ne) * d);
}

}  // namespace

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswers) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsAreDistinctAndReproducible) {
  Philox4x32 a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  for (int i = 0; i < 10; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(SimulateBins, ZeroProfileGivesZeroCounts) {
  const BinSeries b = simulate_bins(RateProfile(), 0.02, 100, 1);
  EXPECT_EQ(b.size(), 100u);
  EXPECT_TRUE(std::all_of(b.counts.begin(), b.counts.end(), [](auto z) { return z == 0; }));
}

TEST(SimulateBins, Example1Mean) {
  const RateProfile p({40, 10, 4, 3, 1});
  const BinSeries b = simulate_bins(p, 0.02, 1500, 7);
  EXPECT_EQ(b.size(), 1500u);
  EXPECT_DOUBLE_EQ(b.duration(), 30.0);
  EXPECT_NEAR(mean(b), 1.78, 4.0 * std::sqrt(cumulant(p, 0.02, 2) / 1500.0));
}

TEST(SimulateBins, SingleJumpIsPoisson) {
  const double lam = 0.02 * 100.0;
  const BinSeries b = simulate_bins(RateProfile({100.0}), 0.02, 10000, 3);
  // Pool the upper tail so every expected cell count is ≥ 5.
  const int top = 7;
  std::vector<double> obs(top + 1, 0.0), expct(top + 1, 0.0);
  for (auto z : b.counts) obs[std::min<std::int64_t>(z, top)] += 1.0;
  double pk = std::exp(-lam), cum = 0.0;
  for (int k = 0; k < top; ++k) {
    expct[k] = pk * 10000.0;
    cum += pk;
    pk *= lam / (k + 1);
  }
  expct[top] = (1.0 - cum) * 10000.0;
  double chi2 = 0.0;
  for (int k = 0; k <= top; ++k) chi2 += (obs[k] - expct[k]) * (obs[k] - expct[k]) / expct[k];
  const boost::math::chi_squared dist(top);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001);
}

TEST(SimulateBins, CompoundPoissonMoments) {
  const RateProfile p({40, 10, 4, 3, 1});
  const double h = 0.02;
  const std::size_t L = 100000;
  const BinSeries b = simulate_bins(p, h, L, 99);
  const double k2 = cumulant(p, h, 2), k4 = cumulant(p, h, 4);
  EXPECT_NEAR(mean(b), cumulant(p, h, 1), 5.0 * std::sqrt(k2 / L));
  EXPECT_NEAR(variance(b), k2, 5.0 * std::sqrt((k4 + 2.0 * k2 * k2) / L));
}

TEST(SimulateBins, Deterministic) {
  const RateProfile p({17, 11, 14, 6});
  EXPECT_EQ(simulate_bins(p, 0.05, 500, 12), simulate_bins(p, 0.05, 500, 12));
  EXPECT_NE(simulate_bins(p, 0.05, 500, 12), simulate_bins(p, 0.05, 500, 13));
  // Bin l depends only on (seed, l): a shorter run is a prefix.
  const BinSeries a = simulate_bins(p, 0.05, 500, 12), b = simulate_bins(p, 0.05, 200, 12);
  EXPECT_TRUE(std::equal(b.counts.begin(), b.counts.end(), a.counts.begin()));
}

TEST(SimulateBins, RejectsBadArguments) {
  EXPECT_THROW(simulate_bins(RateProfile({1.0}), 0.0, 10, 1), ArgumentError);
  EXPECT_THROW(simulate_bins(RateProfile({1.0}), 0.1, 0, 1), ArgumentError);
}

TEST(SimulateRaster, Example2SingleNeuronRate) {
  const RateProfile p = RateProfile::from_pairs({{1, 150.0}, {7, 7.0}});
  const std::size_t N = 20;
  const double T = 60.0;
  const auto events = simulate_raster(p, N, T, 5);
  const double rate = static_cast<double>(events.size()) / (N * T);
  const double se = std::sqrt(cumulant(p, 1.0, 2) * T) / (N * T);
  EXPECT_NEAR(rate, 199.0 / 20.0, 4.0 * se);
  EXPECT_NEAR(rate, 10.0, 0.5);
}

TEST(SimulateRaster, SortedWithDistinctNeuronsPerJump) {
  const auto events = simulate_raster(RateProfile({5, 5, 5}), 6, 20.0, 2);
  ASSERT_FALSE(events.empty());
  for (std::size_t i = 1; i < events.size(); ++i) {
    const auto& a = events[i - 1];
    const auto& b = events[i];
    EXPECT_TRUE(a.time < b.time || (a.time == b.time && a.neuron < b.neuron));
  }
  for (const auto& e : events) {
    EXPECT_GE(e.neuron, 1u);
    EXPECT_LE(e.neuron, 6u);
    EXPECT_GE(e.time, 0.0);
    EXPECT_LE(e.time, 20.0);
  }
}

TEST(SimulateRaster, SingleNeuronPoissonTrain) {
  const auto events = simulate_raster(RateProfile({50.0}), 1, 100.0, 8);
  EXPECT_TRUE(std::all_of(events.begin(), events.end(), [](const auto& e) { return e.neuron == 1; }));
  EXPECT_NEAR(static_cast<double>(events.size()), 5000.0, 4.0 * std::sqrt(5000.0));
}

TEST(SimulateRaster, PairsAreUniform) {
  const std::size_t N = 4;
  const auto events = simulate_raster(RateProfile({0.0, 200.0}), N, 30.0, 21);
  std::map<std::pair<std::size_t, std::size_t>, double> tally;
  for (std::size_t i = 0; i + 1 < events.size(); i += 2) {
    ASSERT_EQ(events[i].time, events[i + 1].time);
    tally[{events[i].neuron, events[i + 1].neuron}] += 1.0;
  }
  ASSERT_EQ(tally.size(), 6u);
  const double expected = static_cast<double>(events.size() / 2) / 6.0;
  double chi2 = 0.0;
  for (const auto& [pair, count] : tally) chi2 += (count - expected) * (count - expected) / expected;
  EXPECT_GT(boost::math::cdf(boost::math::complement(boost::math::chi_squared(5), chi2)), 0.001);
}

TEST(SimulateRaster, RejectsTooFewNeurons) {
  EXPECT_THROW(simulate_raster(RateProfile({1, 1, 1}), 2, 1.0, 1), ArgumentError);
}

TEST(SimulateRaster, BinnedRasterMatchesBinsInLaw) {
  const RateProfile p({40, 10, 4, 3, 1});
  const double h = 0.005, T = 60.0;
  const BinSeries from_raster = bin_raster(simulate_raster(p, 30, T, 31), h, T);
  const BinSeries direct = simulate_bins(p, h, from_raster.size(), 32);
  EXPECT_EQ(from_raster.size(), 12000u);
  EXPECT_GT(ks_two_sample_p(from_raster.counts, direct.counts), 0.001);
}

TEST(BinRaster, CountsEventsPerBin) {
  const std::vector<RasterEvent> ev{{1, 0.0}, {2, 0.05}, {1, 0.15}, {3, 0.15}, {1, 0.299}};
  const BinSeries b = bin_raster(ev, 0.1, 0.3);
  EXPECT_EQ(b.counts, (std::vector<std::int64_t>{2, 2, 1}));
}

TEST(Bootstrap, ConstantAndSingleton) {
  const BinSeries c{0.1, {3, 3, 3, 3}};
  EXPECT_EQ(bootstrap_resample(c, 1), c);
  const BinSeries one{0.1, {5}};
  EXPECT_EQ(bootstrap_resample(one, 9), one);
}

TEST(Bootstrap, ResampleMeansAreConsistent) {
  const BinSeries b = simulate_bins(RateProfile({40, 10, 4, 3, 1}), 0.02, 400, 4);
  const double m = mean(b), sd = std::sqrt(variance(b));
  double total = 0.0;
  const int R = 1000;
  for (int r = 0; r < R; ++r) total += mean(bootstrap_resample(b, derive_seed(77, r)));
  EXPECT_NEAR(total / R, m, 4.0 * sd / std::sqrt(400.0 * R));
}
