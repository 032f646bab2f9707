#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "depoisson/profile.hpp"

namespace depoisson {

// Bin width h (seconds) and the counts Z_1…Z_L.
struct BinSeries {
  double h = 0.0;
  std::vector<std::int64_t> counts;

  std::size_t size() const { return counts.size(); }
  double duration() const { return h * static_cast<double>(counts.size()); }

  // Throws ArgumentError unless h > 0, L ≥ 1 and all counts ≥ 0.
  void validate() const;

  friend bool operator==(const BinSeries&, const BinSeries&) = default;
};

struct RasterEvent {
  std::size_t neuron = 0;  // 1…N
  double time = 0.0;       // seconds in [0, T]
};

// L bins of width h: per bin, Y_n ~ Poisson(hν_n) independently and
// Z = Σ n·Y_n. Bin l draws from its own substream, so the output for a
// given seed does not depend on evaluation order.
BinSeries simulate_bins(const RateProfile& profile, double h, std::size_t L, std::uint64_t seed);

// Population raster on [0, T]: each size-n jump emits one event at the jump
// time on each member of a uniformly chosen n-subset of the N neurons.
// Events are sorted by time, then neuron.
std::vector<RasterEvent> simulate_raster(const RateProfile& profile, std::size_t N, double T,
                                         std::uint64_t seed);

// Pooled event counts of a raster in consecutive bins of width h covering [0, T).
BinSeries bin_raster(const std::vector<RasterEvent>& events, double h, double T);

// L draws with replacement from the observed counts.
BinSeries bootstrap_resample(const BinSeries& bins, std::uint64_t seed);

}  // namespace depoisson
