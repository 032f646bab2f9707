#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace depoisson {

// Jump rates ν_1…ν_K in events/second. Index 0 holds ν_1.
class RateProfile {
 public:
  RateProfile() = default;
  explicit RateProfile(std::vector<double> rates);

  // Sparse construction: {{1, 150.0}, {7, 7.0}} gives ν_1 = 150, ν_7 = 7.
  static RateProfile from_pairs(std::initializer_list<std::pair<std::size_t, double>> pairs);

  std::span<const double> rates() const { return rates_; }
  std::size_t max_jump() const { return rates_.size(); }
  bool empty() const;

  // ν_n for n ≥ 1; zero beyond the support.
  double rate(std::size_t n) const { return n >= 1 && n <= rates_.size() ? rates_[n - 1] : 0.0; }
  double nu_plus() const;
  // Σ n ν_n, the mean number of events per unit time.
  double event_rate() const;

 private:
  std::vector<double> rates_;
};

// Estimated rates ν̂_1…ν̂_M; entries may be negative.
struct EstimatedProfile {
  std::vector<double> rates;

  std::size_t size() const { return rates.size(); }
  double rate(std::size_t n) const { return n >= 1 && n <= rates.size() ? rates[n - 1] : 0.0; }
};

}  // namespace depoisson
