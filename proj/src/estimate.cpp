#include "depoisson/estimate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "depoisson/error.hpp"
#include "depoisson/fft.hpp"
#include "depoisson/series.hpp"

namespace depoisson {

using cd = std::complex<double>;

namespace {

constexpr std::size_t kMaxAutoGrid = std::size_t{1} << 18;
constexpr double kGridTolerance = 1e-13;  // on hν̂_n

struct Inversion {
  std::vector<double> beta;  // β_0…β_M, the Fourier coefficients of log γ̂
  EcfLog log;
};

Inversion invert_once(const CoeffPoly& poly, std::size_t grid, std::size_t nmax) {
  Inversion inv;
  inv.log = continuous_log(ecf_eval(poly, grid));
  const std::size_t G = inv.log.grid_size;
  const auto coeffs = fft::dft(inv.log.log_values, -1);
  inv.beta.resize(nmax + 1);
  for (std::size_t n = 0; n <= nmax; ++n) inv.beta[n] = coeffs[n].real() / static_cast<double>(G);
  return inv;
}

Inversion invert(const CoeffPoly& poly, std::size_t nmax, const EstimationOptions& opts) {
  const std::size_t floor_grid = std::bit_ceil(4 * (std::max(poly.degree(), nmax) + 1));
  if (opts.grid_size) {
    if (*opts.grid_size < 2 * nmax + 2) throw ArgumentError("grid size too small for the requested nmax");
    return invert_once(poly, std::max(*opts.grid_size, 4 * (poly.degree() + 1)), nmax);
  }
  std::size_t G = std::max(default_grid_size(poly.degree()), floor_grid);
  Inversion cur = invert_once(poly, G, nmax);
  while (cur.log.grid_size < kMaxAutoGrid) {
    Inversion next = invert_once(poly, 2 * cur.log.grid_size, nmax);
    double diff = 0.0;
    for (std::size_t n = 0; n <= nmax; ++n) diff = std::max(diff, std::abs(next.beta[n] - cur.beta[n]));
    cur = std::move(next);
    if (diff <= kGridTolerance) break;
  }
  return cur;
}

void require_empty_bins(const CoeffPoly& poly) {
  if (poly.coeffs.empty() || !(poly.coeffs[0] > 0.0)) throw NoEmptyBinsError();
}

struct Prepared {
  CoeffPoly poly;
  int winding_before = 0;
  int winding_after = 0;
  bool singular_before = false;
  AppliedCorrection correction;
};

Prepared prepare(const BinSeries& bins, const EstimationOptions& opts) {
  opts.validate();
  bins.validate();
  Prepared out;
  CoeffPoly raw = histogram(bins);
  require_empty_bins(raw);
  const std::size_t G0 = opts.grid_size.value_or(default_grid_size(raw.degree()));
  try {
    out.winding_before = continuous_log(ecf_eval(raw, std::max(G0, 4 * (raw.degree() + 1)))).winding;
  } catch (const SingularEcfError&) {
    // A zero on the grid (e.g. γ̂(π) = 0 with equally many even and odd
    // counts) leaves the winding undefined; only a correction can proceed.
    if (opts.correction == Correction::none) throw;
    out.singular_before = true;
  }
  if (out.winding_before == 0 && !out.singular_before) {
    out.poly = std::move(raw);
    return out;
  }

  switch (opts.correction) {
    case Correction::none:
      if (!opts.allow_nonzero_winding) {
        throw CorrectionError("ECF has winding number " + std::to_string(out.winding_before) +
                              " and no correction was requested");
      }
      out.poly = std::move(raw);
      out.winding_after = out.winding_before;
      return out;
    case Correction::auto_shrink: {
      if (opts.delta) {
        CoeffPoly s = shrink(raw, *opts.delta);
        if (winding_number(s) != 0) throw CorrectionError("shrinking with the given delta leaves a nonzero winding number");
        out.poly = std::move(s);
        out.correction = {Correction::auto_shrink, *opts.delta};
      } else {
        auto s = adaptive_shrink(raw);
        if (!s) throw CorrectionError("no delta on the shrinking ladder removes the winding number");
        out.poly = std::move(s->poly);
        out.correction = {Correction::auto_shrink, s->delta};
      }
      break;
    }
    case Correction::auto_edit: {
      CoeffPoly e = edit_zeros(raw, opts.eps);
      if (winding_number(e) != 0) throw CorrectionError("zero editing left a nonzero winding number");
      out.poly = std::move(e);
      out.correction = {Correction::auto_edit, opts.eps};
      break;
    }
  }
  require_empty_bins(out.poly);
  return out;
}

}  // namespace

std::string to_string(Correction c) {
  switch (c) {
    case Correction::none: return "none";
    case Correction::auto_shrink: return "auto-shrink";
    case Correction::auto_edit: return "auto-edit";
  }
  return "none";
}

Correction parse_correction(const std::string& s) {
  if (s == "none") return Correction::none;
  if (s == "auto-shrink") return Correction::auto_shrink;
  if (s == "auto-edit") return Correction::auto_edit;
  throw ArgumentError("unknown correction '" + s + "' (expected none, auto-shrink or auto-edit)");
}

void EstimationOptions::validate() const {
  if (nmax < 1) throw ArgumentError("nmax must be at least 1");
  if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
  if (delta && !(*delta > 0.0 && *delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
  if (grid_size && (*grid_size < 4 || (*grid_size % 2) != 0)) throw ArgumentError("grid size must be even and at least 4");
}

EstimateResult estimate_rates_fourier(const BinSeries& bins, const EstimationOptions& opts) {
  Prepared prep = prepare(bins, opts);
  const std::size_t M = opts.nmax;
  const Inversion inv = invert(prep.poly, M, opts);

  EstimateResult r;
  r.h = bins.h;
  r.T = bins.duration();
  r.rates.rates.resize(M);
  for (std::size_t n = 1; n <= M; ++n) r.rates.rates[n - 1] = inv.beta[n] / bins.h;
  r.nu_plus_hat = -std::log(prep.poly.coeffs[0]) / bins.h;
  r.tails.resize(M);
  r.tails[0] = r.nu_plus_hat;
  for (std::size_t m = 1; m < M; ++m) r.tails[m] = r.tails[m - 1] - r.rates.rates[m - 1];
  r.winding_before = prep.winding_before;
  r.singular_before = prep.singular_before;
  r.winding_after = inv.log.winding;
  r.correction = prep.correction;
  r.grid_size = inv.log.grid_size;
  r.poly = std::move(prep.poly);
  return r;
}

EstimatedProfile estimate_rates_histogram(const CoeffPoly& poly, double h, std::size_t nmax) {
  if (!(h > 0.0)) throw ArgumentError("bin width h must be positive");
  require_empty_bins(poly);
  TruncSeries p;
  p.coeffs.assign(nmax + 1, 0.0);
  std::copy_n(poly.coeffs.begin(), std::min(poly.coeffs.size(), nmax + 1), p.coeffs.begin());
  const TruncSeries b = series_log(p);
  EstimatedProfile out;
  out.rates.resize(nmax);
  for (std::size_t n = 1; n <= nmax; ++n) out.rates[n - 1] = b.coeffs[n] / h;
  return out;
}

EstimatedProfile estimate_rates_histogram(const BinSeries& bins, std::size_t nmax) {
  return estimate_rates_histogram(histogram(bins), bins.h, nmax);
}

std::vector<double> estimate_tails(const BinSeries& bins, const EstimationOptions& opts, TailMode mode) {
  if (mode == TailMode::telescoping) return estimate_rates_fourier(bins, opts).tails;

  Prepared prep = prepare(bins, opts);
  const std::size_t M = opts.nmax;
  const Inversion inv = invert(prep.poly, M, opts);
  const std::size_t G = inv.log.grid_size;
  const double mean = prep.poly.mean();

  // log γ̂(θ)/(e^{iθ} − 1) on the grid; its (m−1)-th Fourier coefficient is hρ̂_m.
  std::vector<cd> integrand(G);
  integrand[0] = mean;
  for (std::size_t j = 1; j < G; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(G);
    integrand[j] = inv.log.log_values[j] / (std::polar(1.0, theta) - 1.0);
  }
  const auto coeffs = fft::dft(integrand, -1);
  std::vector<double> tails(M);
  for (std::size_t m = 1; m <= M; ++m) tails[m - 1] = coeffs[m - 1].real() / (static_cast<double>(G) * bins.h);
  return tails;
}

double estimate_functional(const BinSeries& bins, std::span<const double> c, EstimationOptions opts) {
  if (c.empty()) return 0.0;
  opts.nmax = std::max(opts.nmax, c.size());
  const EstimateResult r = estimate_rates_fourier(bins, opts);
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) s += c[n] * r.rates.rates[n];
  return s;
}

NormalizedProfile reparameterize(const EstimateResult& est) {
  if (!(est.nu_plus_hat > 0.0)) throw DomainError("reparameterize: estimated carrier rate must be positive");
  NormalizedProfile out;
  out.omega.reserve(est.rates.size());
  for (double v : est.rates.rates) {
    const double w = v / est.nu_plus_hat;
    out.omega.push_back(w);
    out.omega_sqrt.push_back(v >= 0.0 ? std::optional<double>(std::sqrt(w)) : std::nullopt);
  }
  return out;
}

}  // namespace depoisson
