#include "depoisson/fft.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

#include "depoisson/error.hpp"

namespace depoisson::fft {

namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n0, std::size_t n1, int sign) {
    std::lock_guard lock(mu_);
    const auto key = std::make_tuple(n0, n1, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cd> scratch_in(n0 * n1), scratch_out(n0 * n1);
    auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
    auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
    const int dir = sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = n1 == 0 ? fftw_plan_dft_1d(static_cast<int>(n0), in, out, dir, flags)
                          : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), in, out, dir, flags);
    if (p == nullptr) throw NumericError("FFTW planning failed");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::vector<cd> run(fftw_plan plan, std::span<const cd> in) {
  std::vector<cd> src(in.begin(), in.end());
  std::vector<cd> out(in.size());
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(src.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<cd> dft(std::span<const cd> in, int sign) {
  if (in.empty()) return {};
  return run(cache().get(in.size(), 0, sign), in);
}

std::vector<cd> dft2(std::span<const cd> in, std::size_t n0, std::size_t n1, int sign) {
  if (in.size() != n0 * n1) throw ArgumentError("dft2: size mismatch");
  if (in.empty()) return {};
  return run(cache().get(n0, n1, sign), in);
}

}  // namespace depoisson::fft
