#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "depoisson/error.hpp"
#include "depoisson/inference.hpp"
#include "depoisson/io.hpp"
#include "depoisson/parallel.hpp"
#include "depoisson/rng.hpp"
#include "depoisson/simulate.hpp"

namespace depoisson::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kReplicates = 50;
constexpr std::size_t kOrders = 12;

struct Scenario {
  const char* name;
  RateProfile profile;
  double T;
  double h;
  std::size_t neurons;
  std::size_t L() const { return static_cast<std::size_t>(std::round(T / h)); }
};

Scenario example1() { return {"example1", RateProfile({40, 10, 4, 3, 1}), 30.0, 0.02, 30}; }
Scenario example2() { return {"example2", RateProfile::from_pairs({{1, 150.0}, {7, 7.0}}), 60.0, 0.005, 20}; }
Scenario winding_case() { return {"winding", RateProfile({17, 11, 14, 6}), 60.0, 0.05, 0}; }

std::string true_profile_csv(const RateProfile& p) {
  std::ostringstream s;
  s << "n,nu\n";
  for (std::size_t n = 1; n <= kOrders; ++n) s << n << ',' << io::fmt(p.rate(n)) << '\n';
  return s.str();
}

// Panels a–d: raster and bin counts over the first 2 s, count histogram of the full run.
void figure1(const fs::path& dir, std::uint64_t seed) {
  int index = 0;
  for (const Scenario& sc : {example1(), example2()}) {
    const auto events = simulate_raster(sc.profile, sc.neurons, sc.T, derive_seed(seed, 100 + index++));
    const BinSeries bins = bin_raster(events, sc.h, sc.T);
    const std::string base = std::string("fig1_") + sc.name;

    std::ostringstream raster;
    raster << "neuron,time\n";
    for (const auto& e : events) {
      if (e.time < 2.0) raster << e.neuron << ',' << io::fmt(e.time) << '\n';
    }
    io::write_file(dir / (base + "_raster.csv"), raster.str());

    std::ostringstream counts;
    counts << "bin,start,count\n";
    for (std::size_t l = 0; l < bins.size() && static_cast<double>(l) * sc.h < 2.0 - 1e-12; ++l) {
      counts << l + 1 << ',' << io::fmt(static_cast<double>(l) * sc.h) << ',' << bins.counts[l] << '\n';
    }
    io::write_file(dir / (base + "_counts_2s.csv"), counts.str());

    const CoeffPoly hist = histogram(bins);
    std::ostringstream h;
    h << "k,bins,frequency\n";
    for (std::size_t k = 0; k < hist.coeffs.size(); ++k) {
      const double f = hist.coeffs[k];
      h << k << ',' << std::llround(f * static_cast<double>(bins.size())) << ',' << io::fmt(f) << '\n';
    }
    io::write_file(dir / (base + "_histogram.csv"), h.str());
    io::write_bins(dir / (base + "_bins.json"), bins);
  }
}

// Panels a,b: per-replicate ν̂_n; panels c,d: β_n = fraction of replicates with V_n > 2.
void figure2(const fs::path& dir, std::uint64_t seed, std::size_t threads, std::ostream& err) {
  int index = 0;
  for (const Scenario& sc : {example1(), example2()}) {
    const std::uint64_t study = derive_seed(seed, 200 + index++);
    std::vector<std::optional<VmStatistics>> results(kReplicates);
    parallel_for(kReplicates, threads, [&](std::size_t r) {
      const BinSeries bins = simulate_bins(sc.profile, sc.h, sc.L(), derive_seed(study, r));
      EstimationOptions opts;
      opts.nmax = kOrders;
      try {
        results[r] = vm_statistics(bins, kOrders, opts);
      } catch (const NumericError&) {
      }
    });

    const std::string base = std::string("fig2_") + sc.name;
    std::ostringstream rates;
    rates << "replicate,n,nu_hat,rho_hat,V\n";
    std::vector<double> beta(kOrders, 0.0);
    std::size_t failures = 0;
    for (std::size_t r = 0; r < kReplicates; ++r) {
      if (!results[r]) {
        ++failures;
        continue;
      }
      const auto& vm = *results[r];
      for (std::size_t n = 1; n <= kOrders; ++n) {
        rates << r + 1 << ',' << n << ',' << io::fmt(vm.estimate.rates.rate(n)) << ','
              << io::fmt(vm.estimate.tails[n - 1]) << ',' << io::fmt(vm.v[n - 1]) << '\n';
        if (vm.v[n - 1] > 2.0) beta[n - 1] += 1.0;
      }
    }
    if (failures > 0) err << sc.name << ": " << failures << " replicates failed to estimate\n";
    io::write_file(dir / (base + "_rates.csv"), rates.str());
    io::write_file(dir / (base + "_true.csv"), true_profile_csv(sc.profile));

    std::ostringstream power;
    power << "n,beta\n";
    for (std::size_t n = 1; n <= kOrders; ++n) {
      power << n << ',' << io::fmt(beta[n - 1] / static_cast<double>(kReplicates)) << '\n';
    }
    io::write_file(dir / (base + "_power.csv"), power.str());
  }
}

struct Method {
  const char* name;
  EstimationOptions opts;
};

std::vector<Method> figure3_methods() {
  EstimationOptions none;
  none.correction = Correction::none;
  none.allow_nonzero_winding = true;
  EstimationOptions shrink_fixed;
  shrink_fixed.correction = Correction::auto_shrink;
  shrink_fixed.delta = 0.02;
  EstimationOptions shrink_adaptive;
  shrink_adaptive.correction = Correction::auto_shrink;
  EstimationOptions edit;
  edit.correction = Correction::auto_edit;
  edit.eps = 0.075;
  return {{"none", none}, {"shrink_0.02", shrink_fixed}, {"shrink_adaptive", shrink_adaptive}, {"edit_0.075", edit}};
}

// Imaginary part of the log-ECF at θ_j = 2πj/G, j = 0…G/2, thinned to `points` nodes.
void write_imlog(std::ostringstream& s, std::size_t r, const char* method, const CoeffPoly& poly,
                 std::size_t points) {
  const EcfLog log = continuous_log(ecf_eval(poly, default_grid_size(poly.degree())));
  const std::size_t half = log.grid_size / 2;
  const std::size_t stride = std::max<std::size_t>(1, half / (points - 1));
  for (std::size_t j = 0; j <= half; j += stride) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(log.grid_size);
    s << r << ',' << method << ',' << io::fmt(theta) << ',' << io::fmt(log.log_values[j].imag()) << '\n';
  }
}

// Panels a–f: profiles and Im log γ̂ under no correction, shrinking and editing.
void figure3(const fs::path& dir, std::uint64_t seed, std::size_t threads, std::ostream& err) {
  const Scenario sc = winding_case();
  const std::uint64_t study = derive_seed(seed, 300);
  const auto methods = figure3_methods();
  constexpr std::size_t kCurvePoints = 129;

  struct Replicate {
    std::optional<int> winding;  // empty when the raw ECF vanishes on the grid
    std::vector<std::optional<EstimateResult>> fits;
    std::vector<std::string> errors;
  };
  std::vector<Replicate> reps(kReplicates);
  parallel_for(kReplicates, threads, [&](std::size_t r) {
    const BinSeries bins = simulate_bins(sc.profile, sc.h, sc.L(), derive_seed(study, r));
    Replicate& rep = reps[r];
    try {
      rep.winding = winding_number(histogram(bins));
    } catch (const SingularEcfError&) {
    }
    rep.fits.resize(methods.size());
    rep.errors.resize(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) {
      EstimationOptions opts = methods[m].opts;
      opts.nmax = kOrders;
      try {
        rep.fits[m] = estimate_rates_fourier(bins, opts);
      } catch (const NumericError& e) {
        rep.errors[m] = e.what();
      }
    }
  });

  std::ostringstream winding, rates, curves;
  winding << "replicate,winding\n";
  rates << "replicate,method,winding_before,n,nu_hat,correction_parameter\n";
  curves << "replicate,method,theta,im_log\n";
  std::map<std::string, std::size_t> failures;
  for (std::size_t r = 0; r < kReplicates; ++r) {
    const Replicate& rep = reps[r];
    const std::string w = rep.winding ? std::to_string(*rep.winding) : "singular";
    winding << r + 1 << ',' << w << '\n';
    for (std::size_t m = 0; m < methods.size(); ++m) {
      if (!rep.fits[m]) {
        ++failures[methods[m].name];
        continue;
      }
      const EstimateResult& fit = *rep.fits[m];
      for (std::size_t n = 1; n <= kOrders; ++n) {
        rates << r + 1 << ',' << methods[m].name << ',' << w << ',' << n << ','
              << io::fmt(fit.rates.rate(n)) << ',' << io::fmt(fit.correction.parameter) << '\n';
      }
      write_imlog(curves, r + 1, methods[m].name, fit.poly, kCurvePoints);
    }
  }
  for (const auto& [name, count] : failures) err << name << ": " << count << " replicates failed\n";

  std::ostringstream truth;
  truth << "theta,im_log\n";
  for (std::size_t j = 0; j < kCurvePoints; ++j) {
    const double theta = std::numbers::pi * static_cast<double>(j) / static_cast<double>(kCurvePoints - 1);
    double im = 0.0;
    for (std::size_t n = 1; n <= sc.profile.max_jump(); ++n) {
      im += sc.h * sc.profile.rate(n) * std::sin(static_cast<double>(n) * theta);
    }
    truth << io::fmt(theta) << ',' << io::fmt(im) << '\n';
  }

  io::write_file(dir / "fig3_winding.csv", winding.str());
  io::write_file(dir / "fig3_rates.csv", rates.str());
  io::write_file(dir / "fig3_imlog.csv", curves.str());
  io::write_file(dir / "fig3_imlog_true.csv", truth.str());
  io::write_file(dir / "fig3_true.csv", true_profile_csv(sc.profile));
}

}  // namespace

void reproduce_figure(int figure, const fs::path& dir, std::uint64_t seed, std::size_t threads,
                      std::ostream& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FormatError("cannot create " + dir.string() + ": " + ec.message());
  switch (figure) {
    case 1: figure1(dir, seed); break;
    case 2: figure2(dir, seed, threads, err); break;
    case 3: figure3(dir, seed, threads, err); break;
    default: throw ArgumentError("--figure must be 1, 2 or 3");
  }
}

}  // namespace depoisson::cli
