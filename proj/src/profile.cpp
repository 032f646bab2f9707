#include "depoisson/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "depoisson/error.hpp"

namespace depoisson {

RateProfile::RateProfile(std::vector<double> rates) : rates_(std::move(rates)) {
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    if (!std::isfinite(rates_[i]) || rates_[i] < 0.0) {
      throw ArgumentError("rate nu_" + std::to_string(i + 1) + " must be finite and nonnegative");
    }
  }
  while (!rates_.empty() && rates_.back() == 0.0) rates_.pop_back();
}

RateProfile RateProfile::from_pairs(std::initializer_list<std::pair<std::size_t, double>> pairs) {
  std::size_t k = 0;
  for (const auto& [n, v] : pairs) {
    if (n == 0) throw ArgumentError("jump sizes start at 1");
    k = std::max(k, n);
  }
  std::vector<double> rates(k, 0.0);
  for (const auto& [n, v] : pairs) rates[n - 1] += v;
  return RateProfile(std::move(rates));
}

bool RateProfile::empty() const {
  return std::all_of(rates_.begin(), rates_.end(), [](double v) { return v == 0.0; });
}

double RateProfile::nu_plus() const { return std::accumulate(rates_.begin(), rates_.end(), 0.0); }

double RateProfile::event_rate() const {
  double s = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) s += static_cast<double>(i + 1) * rates_[i];
  return s;
}

}  // namespace depoisson
