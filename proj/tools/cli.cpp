#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "depoisson/covariance.hpp"
#include "depoisson/error.hpp"
#include "depoisson/inference.hpp"
#include "depoisson/io.hpp"
#include "depoisson/model.hpp"
#include "depoisson/parallel.hpp"
#include "depoisson/simulate.hpp"

namespace depoisson::cli {

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::estimate: return "estimate";
    case Command::cov: return "cov";
    case Command::test: return "test";
    case Command::power: return "power";
    case Command::diagnose: return "diagnose";
    case Command::reproduce: return "reproduce";
  }
  return "?";
}

std::size_t bins_for(const RunConfig& c) {
  if (c.L) return *c.L;
  const double L = std::round(*c.T / *c.h);
  if (!(L >= 1.0)) throw ArgumentError("T/h must be at least one bin");
  return static_cast<std::size_t>(L);
}

void require_profile(const RunConfig& c) {
  if (c.rates.empty()) throw ArgumentError(std::string(command_name(c.command)) + " needs --rates");
  if (!c.h) throw ArgumentError(std::string(command_name(c.command)) + " needs --h");
}

BinSeries load_input(const RunConfig& c) {
  if (!c.input) throw ArgumentError(std::string(command_name(c.command)) + " needs -i");
  return c.h ? io::read_bins_text(*c.input, *c.h) : io::read_bins(*c.input);
}

// Writes `text` to the output file, or to `out` when none was given.
void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output) {
    io::write_file(*c.output, text);
  } else {
    out << text;
  }
}

std::string matrix_csv(const Eigen::MatrixXd& m, std::size_t row0, std::size_t col0) {
  std::ostringstream s;
  s << "order";
  for (Eigen::Index j = 0; j < m.cols(); ++j) s << ',' << col0 + static_cast<std::size_t>(j);
  s << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s << row0 + static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j < m.cols(); ++j) s << ',' << io::fmt(m(i, j));
    s << '\n';
  }
  return s.str();
}

void report_estimate(const EstimateResult& r, std::ostream& err) {
  if (r.singular_before) {
    err << "ECF vanishes on the grid";
  } else {
    err << "winding " << r.winding_before;
  }
  if (r.correction.kind != Correction::none) {
    err << ", corrected by " << to_string(r.correction.kind) << " (" << io::fmt(r.correction.parameter) << ")";
  }
  err << ", grid " << r.grid_size << '\n';
}

void cmd_simulate(const RunConfig& c, std::ostream& out) {
  require_profile(c);
  const RateProfile profile(c.rates);
  if (c.neurons) {
    const double T = c.T ? *c.T : *c.h * static_cast<double>(bins_for(c));
    const auto events = simulate_raster(profile, *c.neurons, T, c.seed);
    std::ostringstream s;
    s << "neuron,time\n";
    for (const auto& e : events) s << e.neuron << ',' << io::fmt(e.time) << '\n';
    emit(c, s.str(), out);
    return;
  }
  emit(c, io::format_bins_json(simulate_bins(profile, *c.h, bins_for(c), c.seed)), out);
}

void cmd_estimate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const BinSeries bins = load_input(c);
  const auto rows = screening_report(bins, c.est.nmax, c.est);
  report_estimate(estimate_rates_fourier(bins, c.est), err);
  std::ostringstream s;
  s << "n,nu_hat,rho_hat,V,p\n";
  for (const auto& r : rows) {
    s << r.n << ',' << io::fmt(r.nu_hat) << ',' << io::fmt(r.rho_hat) << ',' << io::fmt(r.v) << ','
      << io::fmt(r.p) << '\n';
  }
  emit(c, s.str(), out);
}

void cmd_cov(const RunConfig& c, std::ostream& out) {
  KernelSpec spec;
  double T = 1.0;
  if (c.input) {
    const BinSeries bins = load_input(c);
    const EstimateResult est = estimate_rates_fourier(bins, c.est);
    spec = plug_in_spec(est.rates, bins.h, c.K.value_or(c.est.nmax));
    T = bins.duration();
  } else {
    require_profile(c);
    spec = make_spec(RateProfile(c.rates), *c.h);
  }
  const std::size_t M = c.est.nmax;
  if (c.cov_kind == "rates") {
    emit(c, matrix_csv(cov_rates(spec, T, M).entries, 1, 1), out);
  } else if (c.cov_kind == "tails") {
    emit(c, matrix_csv(cov_tails(spec, T, M).entries, 1, 1), out);
  } else {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M));
    for (std::size_t i = 1; i <= M; ++i) {
      for (std::size_t j = 1; j <= M; ++j) {
        m(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1)) = cov_cross(spec, T, i, j);
      }
    }
    emit(c, matrix_csv(m, 1, 1), out);
  }
}

void cmd_test(const RunConfig& c, std::ostream& out) {
  const BinSeries bins = load_input(c);
  std::ostringstream s;
  if (c.test_kind == "vm") {
    const auto rows = screening_report(bins, c.est.nmax, c.est);
    s << "n,nu_hat,rho_hat,V,p\n";
    for (const auto& r : rows) {
      s << r.n << ',' << io::fmt(r.nu_hat) << ',' << io::fmt(r.rho_hat) << ',' << io::fmt(r.v) << ','
        << io::fmt(r.p) << '\n';
    }
    emit(c, s.str(), out);
    return;
  }

  TestResult r;
  if (c.test_kind == "wald") {
    EstimationOptions opts = c.est;
    for (auto n : c.orders) opts.nmax = std::max(opts.nmax, n);
    const EstimateResult est = estimate_rates_fourier(bins, opts);
    const KernelSpec spec = plug_in_spec(est.rates, bins.h, c.K.value_or(opts.nmax));
    const CovMatrix omega = cov_rates(spec, bins.duration(), opts.nmax);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c.orders.size()),
                                              static_cast<Eigen::Index>(opts.nmax));
    for (std::size_t i = 0; i < c.orders.size(); ++i) {
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c.orders[i] - 1)) = 1.0;
    }
    r = wald_test(est.rates, omega, A, bins.duration());
  } else {
    r = max_v_test(bins, c.m1, c.m2, c.reps, c.seed, c.est, c.threads);
  }
  s << "test,statistic,df,p\n" << c.test_kind << ',' << io::fmt(r.statistic) << ',' << r.df << ','
    << io::fmt(r.p_value) << '\n';
  emit(c, s.str(), out);
}

void cmd_power(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_profile(c);
  const PowerProfile p = power_profile(RateProfile(c.rates), *c.h, bins_for(c), c.reps, c.threshold,
                                       c.est.nmax, c.seed, c.est, c.threads);
  if (p.failures > 0) err << p.failures << " of " << p.reps << " replicates failed and count as non-rejections\n";
  std::ostringstream s;
  s << "n,beta\n";
  for (std::size_t n = 1; n <= p.beta.size(); ++n) s << n << ',' << io::fmt(p.beta[n - 1]) << '\n';
  emit(c, s.str(), out);
}

void cmd_diagnose(const RunConfig& c, std::ostream& out) {
  double nu_plus = 0.0, h = 0.0, T = 0.0;
  if (c.input) {
    const BinSeries bins = load_input(c);
    const CoeffPoly poly = histogram(bins);
    if (!(poly.coeffs[0] > 0.0)) throw NoEmptyBinsError();
    h = bins.h;
    T = bins.duration();
    nu_plus = -std::log(poly.coeffs[0]) / h;
  } else {
    require_profile(c);
    h = *c.h;
    T = h * static_cast<double>(bins_for(c));
    nu_plus = RateProfile(c.rates).nu_plus();
  }
  const DiagnosticsReport d = asymptotics_report(nu_plus, h, T);
  nlohmann::ordered_json j;
  j["nu_plus"] = nu_plus;
  j["h"] = h;
  j["T"] = T;
  j["h_nu_plus"] = d.h_nu_plus;
  j["nu_plus_over_T"] = d.nu_plus_over_T;
  j["xi1_lower"] = d.xi1_lower;
  j["xi1_upper"] = d.xi1_upper;
  j["eps2_bound"] = d.eps2_bound;
  j["xi2_lower"] = d.xi2_lower;
  j["c0_ok"] = d.c0_ok;
  j["c1_ok"] = d.c1_ok;
  emit(c, j.dump(2) + "\n", out);
}

}  // namespace

void RunConfig::validate() const {
  est.validate();
  if (h && !(*h > 0.0 && std::isfinite(*h))) throw ArgumentError("--h must be positive");
  if (L && *L < 1) throw ArgumentError("--L must be at least 1");
  if (T && !(*T > 0.0 && std::isfinite(*T))) throw ArgumentError("--T must be positive");
  for (double r : rates) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ArgumentError("--rates must be finite and nonnegative");
  }
  if (K && *K < 1) throw ArgumentError("--K must be at least 1");
  if (reps < 1) throw ArgumentError("--reps must be at least 1");
  if (!std::isfinite(threshold)) throw ArgumentError("--threshold must be finite");
  if (threads < 1) throw ArgumentError("--threads must be at least 1");

  const bool needs_length = command == Command::simulate || command == Command::power ||
                            (command == Command::diagnose && !input);
  if (needs_length && !L && !T) throw ArgumentError(std::string(command_name(command)) + " needs --L or --T");
  if (command == Command::cov && cov_kind != "rates" && cov_kind != "tails" && cov_kind != "cross") {
    throw ArgumentError("--kind must be rates, tails or cross");
  }
  if (command == Command::test) {
    if (test_kind != "wald" && test_kind != "vm" && test_kind != "maxv") {
      throw ArgumentError("--kind must be wald, vm or maxv");
    }
    if (test_kind == "wald") {
      if (orders.empty()) throw ArgumentError("wald test needs --orders");
      for (auto n : orders) {
        if (n < 1) throw ArgumentError("--orders entries must be at least 1");
      }
    }
    if (test_kind == "maxv" && (m1 < 2 || m2 < m1)) throw ArgumentError("maxv needs 2 <= --m1 <= --m2");
  }
  if (command == Command::reproduce) {
    if (figure < 1 || figure > 3) throw ArgumentError("--figure must be 1, 2 or 3");
    if (!output) throw ArgumentError("reproduce needs -o <directory>");
  }
}

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decompounding of binned compound Poisson counts"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  RunConfig cfg;
  cfg.threads = default_threads();
  std::string input, output, correction = "auto-edit";
  double h = 0.0, T = 0.0, delta = 0.0;
  std::size_t L = 0, grid = 0, K = 0, neurons = 0;

  struct Sub {
    Command command;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  auto add = [&](Command cmd, const char* help) {
    CLI::App* s = app.add_subcommand(command_name(cmd), help);
    subs.push_back({cmd, s});
    return s;
  };
  auto common_est = [&](CLI::App* s) {
    s->add_option("--nmax", cfg.est.nmax, "highest jump order estimated")->capture_default_str();
    s->add_option("--grid", grid, "fixed inversion grid size (default: refined until stable)");
    s->add_option("--correction", correction, "none | auto-shrink | auto-edit")->capture_default_str();
    s->add_option("--delta", delta, "fixed shrinking parameter (default: adaptive)");
    s->add_option("--eps", cfg.est.eps, "zero-editing parameter")->capture_default_str();
    s->add_option("--K", K, "plug-in truncation for covariances (default: nmax)");
  };
  auto io_opts = [&](CLI::App* s, bool in, bool outp) {
    if (in) s->add_option("-i,--input", input, "BinSeries JSON, or raw counts when --h is given");
    if (outp) s->add_option("-o,--output", output, "output file (default: stdout)");
  };
  auto model_opts = [&](CLI::App* s) {
    s->add_option("--rates", cfg.rates, "comma-separated ν_1,…,ν_K")->delimiter(',');
    s->add_option("--h", h, "bin width in seconds");
    s->add_option("--L", L, "number of bins");
    s->add_option("--T", T, "observation length in seconds (alternative to --L)");
  };
  auto run_opts = [&](CLI::App* s) {
    s->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    s->add_option("--threads", cfg.threads, "worker threads");
  };

  CLI::App* sim = add(Command::simulate, "simulate bin counts (or a raster with --neurons)");
  model_opts(sim);
  run_opts(sim);
  io_opts(sim, false, true);
  sim->add_option("--neurons", neurons, "emit a population raster CSV over this many neurons");

  CLI::App* est = add(Command::estimate, "estimate rates, tails and screening statistics");
  io_opts(est, true, true);
  est->add_option("--h", h, "bin width for raw text input");
  common_est(est);

  CLI::App* cov = add(Command::cov, "T times the asymptotic covariance matrix");
  io_opts(cov, true, true);
  model_opts(cov);
  common_est(cov);
  cov->add_option("--kind", cfg.cov_kind, "rates | tails | cross")->capture_default_str();

  CLI::App* test = add(Command::test, "hypothesis tests");
  io_opts(test, true, true);
  test->add_option("--h", h, "bin width for raw text input");
  common_est(test);
  run_opts(test);
  test->add_option("--kind", cfg.test_kind, "wald | vm | maxv")->capture_default_str();
  test->add_option("--orders", cfg.orders, "wald: orders n with H0 ν_n = 0")->delimiter(',');
  test->add_option("--m1", cfg.m1, "maxv: first tail order")->capture_default_str();
  test->add_option("--m2", cfg.m2, "maxv: last tail order")->capture_default_str();
  test->add_option("--reps", cfg.reps, "maxv: bootstrap replicates")->capture_default_str();

  CLI::App* power = add(Command::power, "Monte Carlo power profile of the V_n screening");
  model_opts(power);
  run_opts(power);
  io_opts(power, false, true);
  common_est(power);
  power->add_option("--reps", cfg.reps, "replicates")->capture_default_str();
  power->add_option("--threshold", cfg.threshold, "rejection threshold for V_n")->capture_default_str();

  CLI::App* diag = add(Command::diagnose, "asymptotic validity diagnostics as JSON");
  io_opts(diag, true, true);
  model_opts(diag);

  CLI::App* repro = add(Command::reproduce, "write the data behind a figure as CSV");
  repro->add_option("--figure", cfg.figure, "1, 2 or 3")->required();
  repro->add_option("-o,--output", output, "output directory")->required();
  run_opts(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? 0 : 2};
  }

  for (const auto& s : subs) {
    if (!s.app->parsed()) continue;
    cfg.command = s.command;
    auto given = [&](const char* name) {
      const CLI::Option* o = s.app->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };
    if (given("--input")) cfg.input = input;
    if (given("--output")) cfg.output = output;
    if (given("--h")) cfg.h = h;
    if (given("--T")) cfg.T = T;
    if (given("--L")) cfg.L = L;
    if (given("--grid")) cfg.est.grid_size = grid;
    if (given("--delta")) cfg.est.delta = delta;
    if (given("--K")) cfg.K = K;
    if (given("--neurons")) cfg.neurons = neurons;
  }
  try {
    cfg.est.correction = parse_correction(correction);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return {std::nullopt, 2};
  }
  return {cfg, 0};
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    c.validate();
    switch (c.command) {
      case Command::simulate: cmd_simulate(c, out); break;
      case Command::estimate: cmd_estimate(c, out, err); break;
      case Command::cov: cmd_cov(c, out); break;
      case Command::test: cmd_test(c, out); break;
      case Command::power: cmd_power(c, out, err); break;
      case Command::diagnose: cmd_diagnose(c, out); break;
      case Command::reproduce: reproduce_figure(c.figure, *c.output, c.seed, c.threads, err); break;
    }
    return 0;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return 3;
  }
}

int main_entry(int argc, const char* const* argv) {
  const ParseOutcome p = parse_args(argc, argv, std::cout, std::cerr);
  if (!p.config) return p.exit_code;
  return run(*p.config, std::cout, std::cerr);
}

}  // namespace depoisson::cli
