#include "cli/app.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cli/sweep.hpp"
#include "cli/values.hpp"
#include "sqd/analytics.hpp"
#include "sqd/errors.hpp"
#include "sqd/montecarlo.hpp"
#include "sqd/series.hpp"

namespace sqd::cli {
namespace {

struct Options {
  double vx = 0.32;
  double vp = 8.5;
  double eta = 1.0;
  std::vector<std::string> sigma, q, theta, nqcp;
  std::size_t trials = 1'000'000;
  std::uint64_t seed = 1;
  std::string engine = "analytic";
  std::string out;
  std::size_t shards = 1;
  unsigned threads = 1;
  std::string phase_model;
  double sample_rate = 100e3;
  double band_low = 1e3;
  double band_high = 5e3;
  std::string trigger_mode = "fixed";
  bool uproduct = false;
  std::size_t resamples = kBootstrapResamples;
  std::size_t nmax = 20;
  std::string psi = "0";
  double shot_noise_raw = 1.0;
  bool no_threshold = false;
  std::string file;
};

std::vector<double> values_or(const std::vector<std::string>& items, std::vector<double> fallback) {
  return items.empty() ? fallback : parse_list(items);
}

std::vector<int> counts_or(const std::vector<std::string>& items, std::vector<int> fallback) {
  if (items.empty()) return fallback;
  std::vector<int> out;
  for (double v : parse_list(items)) {
    if (v < 1 || v != std::floor(v)) throw InvalidArgument("--nqcp values must be integers >= 1");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

double single(const std::vector<double>& v, const char* name) {
  if (v.size() != 1) throw InvalidArgument(std::string("--") + name + " takes a single value here");
  return v.front();
}

Engine parse_engine(const std::string& s) {
  if (s == "analytic") return Engine::analytic;
  if (s == "montecarlo" || s == "mc") return Engine::montecarlo;
  if (s == "both") return Engine::both;
  throw InvalidArgument("unknown engine '" + s + "'");
}

PhaseModel parse_phase_model(const std::string& s) {
  if (s == "iid") return PhaseModel::iid;
  if (s == "bandlimited") return PhaseModel::bandlimited;
  if (s == "held") return PhaseModel::held;
  throw InvalidArgument("unknown phase model '" + s + "'");
}

TriggerMode parse_trigger(const std::string& s) {
  if (s == "fixed") return TriggerMode::fixed_angle;
  if (s == "randomized") return TriggerMode::randomized_angle;
  throw InvalidArgument("unknown trigger mode '" + s + "'");
}

SweepSpec base_spec(const Options& o, SweptParameter swept, PhaseModel default_model) {
  SweepSpec s;
  s.swept = swept;
  s.baseline.state = {o.vx, o.vp};
  s.baseline.eta = o.eta;
  s.engine = parse_engine(o.engine);
  s.uncertainty_product = o.uproduct;
  s.trials = o.trials;
  s.seed = o.seed;
  s.shards = o.shards;
  s.threads = o.threads;
  s.phase_model = o.phase_model.empty() ? default_model : parse_phase_model(o.phase_model);
  s.process.sample_rate = o.sample_rate;
  s.process.band_low = o.band_low;
  s.process.band_high = o.band_high;
  s.trigger_mode = parse_trigger(o.trigger_mode);
  s.bootstrap_resamples = o.resamples;
  return s;
}

// Sends output to --out when given, otherwise to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ParseError(0, "cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

const std::vector<double> kSigmaFigures{0.17, 0.28, 0.40};
const std::vector<double> kConjugateAngles{0.0, std::numbers::pi / 2};

int do_sweep(const Options& o, const std::string& command, std::ostream& out) {
  SweepSpec s;
  TableLayout layout = TableLayout::sweep;
  if (command == "sweep-sigma") {
    s = base_spec(o, SweptParameter::sigma, PhaseModel::iid);
    s.sigmas = values_or(o.sigma, parse_list({"0:0.4:21"}));
    s.thresholds = values_or(o.q, {1.0});
    s.thetas = values_or(o.theta, kConjugateAngles);
  } else if (command == "sweep-threshold" || command == "tradeoff") {
    s = base_spec(o, SweptParameter::q_threshold, PhaseModel::iid);
    s.sigmas = values_or(o.sigma, kSigmaFigures);
    s.thresholds =
        values_or(o.q, parse_list({command == "tradeoff" ? "0.05:3:60" : "0.1:3:30"}));
    s.thetas = values_or(o.theta, kConjugateAngles);
    if (command == "tradeoff") layout = TableLayout::tradeoff;
  } else if (command == "sweep-theta") {
    s = base_spec(o, SweptParameter::theta, PhaseModel::iid);
    s.sigmas = values_or(o.sigma, {0.202});
    s.thresholds = values_or(o.q, {0.7});
    s.thetas = values_or(o.theta, half_open_grid(0.0, std::numbers::pi, 64));
  } else {  // qcp
    s = base_spec(o, SweptParameter::q_threshold, PhaseModel::bandlimited);
    s.sigmas = values_or(o.sigma, {0.28});
    s.thresholds = values_or(o.q, parse_list({"0.3:2:18"}));
    s.thetas = values_or(o.theta, {0.0});
    s.n_qcps = counts_or(o.nqcp, {1, 2, 4});
  }
  if (s.n_qcps.empty()) s.n_qcps = counts_or(o.nqcp, {1});
  s.validate();
  const std::vector<SweepRow> rows = sweep(s);
  Sink sink(o.out, out);
  write_table(sink.get(), command, s, rows, layout);
  return kSuccess;
}

int do_povm(const Options& o, std::ostream& out) {
  const double q = single(values_or(o.q, {1.0}), "q");
  const std::vector<double> p = povm_coefficients(q, o.nmax);
  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  s << "# sqd povm\n"
    << "# q=" << format_number(q) << '\n'
    << "# nmax=" << o.nmax << '\n'
    << "# note: q is in quadrature units where the vacuum variance is 1/2;"
       " a shot-noise-unit threshold Q corresponds to q = Q/sqrt(2)\n"
    << "n,p_n\n";
  for (std::size_t n = 0; n < p.size(); ++n) s << n << ',' << format_number(p[n]) << '\n';
  return kSuccess;
}

SimulationConfig series_config(const Options& o) {
  SimulationConfig c;
  c.params.state = {o.vx, o.vp};
  c.params.eta = o.eta;
  c.params.sigma = single(values_or(o.sigma, {0.28}), "sigma");
  c.params.theta = single(values_or(o.theta, {0.0}), "theta");
  c.params.q_threshold = single(values_or(o.q, {1.0}), "q");
  c.params.n_qcp = 1;
  c.n_trials = o.trials;
  c.phase_model = o.phase_model.empty() ? PhaseModel::iid : parse_phase_model(o.phase_model);
  if (c.phase_model == PhaseModel::held)
    throw InvalidArgument("gen-series supports the iid and bandlimited phase models");
  c.process.sample_rate = o.sample_rate;
  c.process.band_low = o.band_low;
  c.process.band_high = o.band_high;
  c.trigger_mode = parse_trigger(o.trigger_mode);
  c.verify_angle = parse_value(o.psi);
  c.seed = o.seed;
  c.shards = 1;
  c.bootstrap_resamples = o.resamples;
  return c;
}

int do_gen_series(const Options& o, std::ostream& out) {
  if (o.trials == 0) throw InvalidArgument("--trials must be >= 1");
  if (!(o.shot_noise_raw > 0.0)) throw InvalidArgument("--shot-noise-raw must be > 0");
  const SimulationConfig c = series_config(o);
  const QuadratureSamples samples = simulate_samples(c);
  const double scale = std::sqrt(o.shot_noise_raw);
  std::vector<QuadratureRecord> records(samples.q1.size());
  for (std::size_t k = 0; k < records.size(); ++k)
    records[k] = {k, samples.q1[k] * scale, samples.q2[k] * scale};

  SeriesMetadata meta;
  meta.sample_rate = o.sample_rate;
  meta.trigger_angle = c.params.theta;
  meta.verify_angle = c.verify_angle;
  meta.shot_noise_variance_raw = o.shot_noise_raw;
  meta.description = "simulated vx=" + format_number(o.vx) + " vp=" + format_number(o.vp) +
                     " eta=" + format_number(o.eta) + " sigma=" + format_number(c.params.sigma) +
                     " phase_model=" + to_string(c.phase_model) +
                     " trigger_mode=" + to_string(c.trigger_mode) + " seed=" +
                     std::to_string(o.seed);
  Sink sink(o.out, out);
  save_series(records, meta, sink.get());
  return kSuccess;
}

int do_postprocess(const Options& o, std::ostream& out) {
  const Series series = load_series(std::filesystem::path(o.file));
  const std::vector<QuadratureRecord> calibrated = calibrate(series.records, series.metadata);
  const bool q_given = !o.q.empty();
  const double q = o.no_threshold ? kNoThreshold : single(values_or(o.q, {1.0}), "q");
  const std::vector<int> windows = counts_or(o.nqcp, {1});
  if (windows.size() != 1) throw InvalidArgument("--nqcp takes a single value here");
  const int n = windows.front();
  if (calibrated.size() < static_cast<std::size_t>(n))
    throw InvalidArgument("series has " + std::to_string(calibrated.size()) +
                          " samples, fewer than --nqcp " + std::to_string(n));
  const ConditionedSeries result =
      condition_series(calibrated, q, static_cast<std::size_t>(n), o.seed, o.resamples);
  const DistillationEstimate& e = result.estimate;

  Sink sink(o.out, out);
  std::ostream& s = sink.get();
  s << "# sqd postprocess\n"
    << "# file=" << o.file << '\n'
    << "# description=" << series.metadata.description << '\n'
    << "# shot_noise_variance_raw=" << format_number(series.metadata.shot_noise_variance_raw)
    << '\n';
  if (o.no_threshold)
    s << "# q=inf (no threshold)\n";
  else
    s << "# q=" << format_number(q) << (q_given ? "" : " (default)") << '\n';
  s << "# nqcp=" << n << '\n'
    << "# seed=" << o.seed << '\n'
    << "# units=shot noise\n"
    << "n_records,n_candidates,n_accepted,p_hat,se_p,v_out_hat,se_v\n"
    << calibrated.size() << ',' << e.n_trials << ',' << e.n_accepted << ','
    << format_number(e.p_hat) << ',' << format_number(e.se_p) << ','
    << (e.v_out_hat ? format_number(*e.v_out_hat) : "nan") << ','
    << (e.se_v ? format_number(*e.se_v) : "nan") << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Phase-diffused squeezed-state distillation: analytic predictions, "
               "Monte Carlo simulation and time-series postprocessing"};
  app.name("sqd");
  app.set_config("--config", "", "key=value configuration file ('#' comments); flags override it");
  app.require_subcommand(1);

  app.add_option("--vx", o.vx, "Squeezed quadrature variance (shot-noise units)")->capture_default_str();
  app.add_option("--vp", o.vp, "Anti-squeezed quadrature variance")->capture_default_str();
  app.add_option("--eta", o.eta, "Detection efficiency in (0, 1]")->capture_default_str();
  app.add_option("--sigma", o.sigma, "Phase-noise std list (rad); a:b:n ranges allowed")->delimiter(',');
  app.add_option("--q", o.q, "Trigger threshold list")->delimiter(',');
  app.add_option("--theta", o.theta, "Trigger angle list (rad, 'pi/2' accepted)")->delimiter(',');
  app.add_option("--nqcp", o.nqcp, "Consecutive trigger samples list")->delimiter(',');
  app.add_option("--trials", o.trials, "Monte Carlo trials per grid point")->capture_default_str();
  app.add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  app.add_option("--engine", o.engine, "analytic | montecarlo | both")->capture_default_str();
  app.add_option("--out", o.out, "Output file (default: stdout)");
  app.add_option("--shards", o.shards, "Monte Carlo shards (deterministic per seed and count)")
      ->capture_default_str();
  app.add_option("--threads", o.threads, "Grid points evaluated concurrently (0 = all cores)")
      ->capture_default_str();
  app.add_option("--phase-model", o.phase_model, "iid | bandlimited | held");
  app.add_option("--sample-rate", o.sample_rate, "Sample rate of the band-limited phase (Hz)")
      ->capture_default_str();
  app.add_option("--band-low", o.band_low, "Lower phase-noise band edge (Hz)")->capture_default_str();
  app.add_option("--band-high", o.band_high, "Upper phase-noise band edge (Hz)")->capture_default_str();
  app.add_option("--trigger-mode", o.trigger_mode, "fixed | randomized")->capture_default_str();
  app.add_flag("--uproduct", o.uproduct, "Add uncertainty-product columns");
  app.add_option("--resamples", o.resamples, "Bootstrap resamples")->capture_default_str();
  app.add_option("--nmax", o.nmax, "Largest Fock index for povm")->capture_default_str();
  app.add_option("--psi", o.psi, "Verified quadrature angle for gen-series")->capture_default_str();
  app.add_option("--shot-noise-raw", o.shot_noise_raw,
                 "Raw-unit vacuum variance stamped on gen-series output")
      ->capture_default_str();
  app.add_flag("--no-threshold", o.no_threshold, "postprocess: accept every sample");

  const std::vector<std::pair<std::string, std::string>> sweeps{
      {"sweep-sigma", "Output variance versus phase-noise strength"},
      {"sweep-threshold", "Output variance versus trigger threshold"},
      {"sweep-theta", "Output variance versus trigger quadrature angle"},
      {"tradeoff", "Output variance versus success probability"},
      {"qcp", "Channel probing over consecutive trigger samples"},
  };
  for (const auto& [name, help] : sweeps) app.add_subcommand(name, help)->fallthrough();
  app.add_subcommand("povm", "Fock-diagonal coefficients of the phase-averaged window POVM")
      ->fallthrough();
  app.add_subcommand("gen-series", "Export a simulated two-detector time series")->fallthrough();
  auto* post = app.add_subcommand("postprocess", "Condition a recorded time series");
  post->fallthrough();
  post->add_option("file", o.file, "Series file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Engine engine = parse_engine(o.engine);
    if (engine != Engine::analytic && o.trials == 0)
      throw InvalidArgument("--trials must be >= 1 for the Monte Carlo engine");
    if (command == "povm") return do_povm(o, out);
    if (command == "gen-series") return do_gen_series(o, out);
    if (command == "postprocess") return do_postprocess(o, out);
    return do_sweep(o, command, out);
  } catch (const GridPointError& e) {
    err << "sqd " << command << ": " << e.what() << '\n';
    return e.numerical() ? kNumericalError : kUsageError;
  } catch (const NumericalFailure& e) {
    err << "sqd " << command << ": numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const ParseError& e) {
    err << "sqd " << command << ": " << (o.file.empty() ? "" : o.file + ": ") << e.what() << '\n';
    return kDataError;
  } catch (const InvalidArgument& e) {
    err << "sqd " << command << ": " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace sqd::cli
