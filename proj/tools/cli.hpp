#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "depoisson/estimate.hpp"

namespace depoisson::cli {

enum class Command { simulate, estimate, cov, test, power, diagnose, reproduce };

struct RunConfig {
  Command command = Command::estimate;
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> output;  // stdout when absent; a directory for reproduce

  std::vector<double> rates;        // ν_1…ν_K
  std::optional<double> h;          // with -i, switches to raw text input
  std::optional<std::size_t> L;
  std::optional<double> T;          // alternative to L
  std::uint64_t seed = 1;
  EstimationOptions est;
  std::optional<std::size_t> K;     // plug-in truncation
  std::size_t reps = 50;
  double threshold = 2.0;
  std::size_t threads = 1;

  std::optional<std::size_t> neurons;  // simulate: raster CSV instead of bins
  std::string cov_kind = "rates";      // rates | tails | cross
  std::string test_kind = "vm";        // wald | vm | maxv
  std::vector<std::size_t> orders;     // wald: H0 ν_n = 0 for these n
  std::size_t m1 = 2;                  // maxv range
  std::size_t m2 = 12;
  int figure = 0;

  // Throws ArgumentError on missing or out-of-range options.
  void validate() const;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  int exit_code = 0;  // meaningful when config is empty (help, usage error)
};

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Executes the command. Results go to config.output or `out`; progress and
// warnings to `err`. Returns 0, 2 (invalid input) or 3 (numeric failure).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv);

// Writes the data behind figure 1, 2 or 3 into `dir`.
void reproduce_figure(int figure, const std::filesystem::path& dir, std::uint64_t seed, std::size_t threads,
                      std::ostream& err);

}  // namespace depoisson::cli
