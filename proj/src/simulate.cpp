#include "depoisson/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "depoisson/error.hpp"
#include "depoisson/rng.hpp"

namespace depoisson {

namespace {
// Raster streams live above the bin-index range.
constexpr std::uint64_t kRasterStreamBase = 1ull << 62;
}  // namespace

void BinSeries::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ArgumentError("bin width h must be positive and finite");
  if (counts.empty()) throw ArgumentError("bin series must contain at least one bin");
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] < 0) throw ArgumentError("negative count in bin " + std::to_string(l + 1));
  }
}

BinSeries simulate_bins(const RateProfile& profile, double h, std::size_t L, std::uint64_t seed) {
  if (!(h > 0.0)) throw ArgumentError("bin width h must be positive");
  if (L < 1) throw ArgumentError("number of bins L must be at least 1");

  using Poisson = boost::random::poisson_distribution<std::int64_t, double>;
  std::vector<std::pair<std::int64_t, Poisson>> draws;
  const auto rates = profile.rates();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i] > 0.0) draws.emplace_back(static_cast<std::int64_t>(i + 1), Poisson(h * rates[i]));
  }

  BinSeries out{h, std::vector<std::int64_t>(L, 0)};
  if (draws.empty()) return out;
  for (std::size_t l = 0; l < L; ++l) {
    Philox4x32 eng(seed, l);
    std::int64_t z = 0;
    for (auto& [n, dist] : draws) z += n * dist(eng);
    out.counts[l] = z;
  }
  return out;
}

std::vector<RasterEvent> simulate_raster(const RateProfile& profile, std::size_t N, double T,
                                         std::uint64_t seed) {
  if (N < profile.max_jump()) throw ArgumentError("simulate_raster: N must be at least the largest jump size");
  if (!(T > 0.0)) throw ArgumentError("simulate_raster: T must be positive");

  std::vector<RasterEvent> events;
  std::vector<std::size_t> pool(N);
  const auto rates = profile.rates();
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i] <= 0.0) continue;
    const std::size_t n = i + 1;
    Philox4x32 eng(seed, kRasterStreamBase + n);
    boost::random::poisson_distribution<std::int64_t, double> njumps(rates[i] * T);
    boost::random::uniform_real_distribution<double> when(0.0, T);
    const std::int64_t jumps = njumps(eng);
    for (std::int64_t j = 0; j < jumps; ++j) {
      const double t = when(eng);
      std::iota(pool.begin(), pool.end(), std::size_t{1});
      // partial Fisher–Yates: the first n slots become a uniform n-subset
      for (std::size_t s = 0; s < n; ++s) {
        boost::random::uniform_int_distribution<std::size_t> pick(s, N - 1);
        std::swap(pool[s], pool[pick(eng)]);
        events.push_back({pool[s], t});
      }
    }
  }
  std::sort(events.begin(), events.end(), [](const RasterEvent& a, const RasterEvent& b) {
    return a.time != b.time ? a.time < b.time : a.neuron < b.neuron;
  });
  return events;
}

BinSeries bin_raster(const std::vector<RasterEvent>& events, double h, double T) {
  if (!(h > 0.0) || !(T >= h)) throw ArgumentError("bin_raster: need h > 0 and T ≥ h");
  const auto L = static_cast<std::size_t>(std::floor(T / h + 1e-9));
  BinSeries out{h, std::vector<std::int64_t>(L, 0)};
  for (const auto& e : events) {
    const auto l = static_cast<std::size_t>(std::floor(e.time / h));
    if (l < L) ++out.counts[l];
  }
  return out;
}

BinSeries bootstrap_resample(const BinSeries& bins, std::uint64_t seed) {
  bins.validate();
  Philox4x32 eng(seed, 0);
  boost::random::uniform_int_distribution<std::size_t> pick(0, bins.size() - 1);
  BinSeries out{bins.h, std::vector<std::int64_t>(bins.size())};
  for (auto& c : out.counts) c = bins.counts[pick(eng)];
  return out;
}

}  // namespace depoisson
