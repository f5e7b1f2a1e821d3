#include "cli/sweep.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "cli/values.hpp"
#include "sqd/errors.hpp"

namespace sqd::cli {
namespace {

std::string describe(const ProtocolParams& p) {
  std::ostringstream s;
  s << "sigma=" << format_number(p.sigma) << " theta=" << format_number(p.theta)
    << " nqcp=" << p.n_qcp << " q=" << format_number(p.q_threshold);
  return s.str();
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

std::optional<double> mc_uncertainty(const SweepRow& r) {
  if (!r.mc || !r.mc_p || !r.mc->v_out_hat || !r.mc_p->v_out_hat) return std::nullopt;
  return std::sqrt(*r.mc->v_out_hat * *r.mc_p->v_out_hat);
}

std::optional<double> mc_uncertainty_se(const SweepRow& r) {
  const auto u = mc_uncertainty(r);
  if (!u || !r.mc->se_v || !r.mc_p->se_v) return std::nullopt;
  const double rx = *r.mc->se_v / *r.mc->v_out_hat;
  const double rp = *r.mc_p->se_v / *r.mc_p->v_out_hat;
  return 0.5 * *u * std::sqrt(rx * rx + rp * rp);
}

}  // namespace

const char* to_string(Engine e) {
  switch (e) {
    case Engine::analytic: return "analytic";
    case Engine::montecarlo: return "montecarlo";
    case Engine::both: return "both";
  }
  return "?";
}

const char* to_string(SweptParameter p) {
  switch (p) {
    case SweptParameter::sigma: return "sigma";
    case SweptParameter::q_threshold: return "q";
    case SweptParameter::theta: return "theta";
    case SweptParameter::n_qcp: return "nqcp";
  }
  return "?";
}

const char* to_string(PhaseModel m) {
  switch (m) {
    case PhaseModel::iid: return "iid";
    case PhaseModel::bandlimited: return "bandlimited";
    case PhaseModel::held: return "held";
  }
  return "?";
}

const char* to_string(TriggerMode m) {
  return m == TriggerMode::fixed_angle ? "fixed" : "randomized";
}

GridPointError::GridPointError(std::size_t row, const ProtocolParams& p, const std::string& what,
                               bool numerical)
    : std::runtime_error("grid point " + std::to_string(row) + " (" + describe(p) + "): " + what),
      numerical_(numerical) {}

void SweepSpec::validate() const {
  if (sigmas.empty() || thresholds.empty() || thetas.empty() || n_qcps.empty())
    throw InvalidArgument("every parameter grid must be non-empty");
  if (engine != Engine::analytic) {
    if (trials == 0) throw InvalidArgument("Monte Carlo needs --trials >= 1");
    if (shards == 0 || shards > trials) throw InvalidArgument("shard count must be in [1, trials]");
  }
  for (const ProtocolParams& p : grid()) p.validate();
}

std::vector<ProtocolParams> SweepSpec::grid() const {
  std::vector<ProtocolParams> out;
  const auto emit = [&](double sigma, double theta, int n, double q) {
    ProtocolParams p = baseline;
    p.sigma = sigma;
    p.theta = theta;
    p.n_qcp = n;
    p.q_threshold = q;
    out.push_back(p);
  };
  // Outer loops skip the swept parameter, which runs innermost.
  const std::vector<double> one{0.0};
  const std::vector<int> one_n{1};
  const auto& s_outer = swept == SweptParameter::sigma ? one : sigmas;
  const auto& t_outer = swept == SweptParameter::theta ? one : thetas;
  const auto& n_outer = swept == SweptParameter::n_qcp ? one_n : n_qcps;
  const auto& q_outer = swept == SweptParameter::q_threshold ? one : thresholds;
  for (double s : s_outer)
    for (double t : t_outer)
      for (int n : n_outer)
        for (double q : q_outer) {
          switch (swept) {
            case SweptParameter::sigma:
              for (double v : sigmas) emit(v, t, n, q);
              break;
            case SweptParameter::theta:
              for (double v : thetas) emit(s, v, n, q);
              break;
            case SweptParameter::n_qcp:
              for (int v : n_qcps) emit(s, t, v, q);
              break;
            case SweptParameter::q_threshold:
              for (double v : thresholds) emit(s, t, n, v);
              break;
          }
        }
  return out;
}

SimulationConfig SweepSpec::simulation(const ProtocolParams& point, double verify_angle) const {
  SimulationConfig c;
  c.params = point;
  c.n_trials = trials;
  c.phase_model = phase_model;
  c.process = process;
  c.trigger_mode = trigger_mode;
  c.verify_angle = verify_angle;
  c.seed = seed;
  c.shards = shards;
  c.threads = 1;
  c.bootstrap_resamples = bootstrap_resamples;
  return c;
}

SweepRow evaluate_point(const SweepSpec& spec, const ProtocolParams& point) {
  SweepRow row;
  row.params = point;
  row.v_in = v_in(point);
  if (spec.engine != Engine::montecarlo) {
    row.analytic = spec.trigger_mode == TriggerMode::randomized_angle ? v_out_randomized(point)
                                                                      : v_out_qcp(point);
    if (spec.uncertainty_product) row.u_product = uncertainty_product(point);
  }
  if (spec.engine != Engine::analytic) {
    row.mc = run_qcp(spec.simulation(point, 0.0));
    if (spec.uncertainty_product) row.mc_p = run_qcp(spec.simulation(point, std::numbers::pi / 2));
  }
  return row;
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<ProtocolParams> points = spec.grid();
  std::vector<SweepRow> rows(points.size());
  const auto guarded = [&](std::size_t i) {
    try {
      return evaluate_point(spec, points[i]);
    } catch (const NumericalFailure& e) {
      throw GridPointError(i, points[i], e.what(), true);
    } catch (const InvalidArgument& e) {
      throw GridPointError(i, points[i], e.what(), false);
    }
  };
  const std::size_t threads = std::max(1u, spec.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) rows[i] = guarded(i);
    return rows;
  }
  for (std::size_t first = 0; first < points.size(); first += threads) {
    const std::size_t last = std::min(points.size(), first + threads);
    std::vector<std::future<SweepRow>> wave;
    for (std::size_t i = first; i < last; ++i)
      wave.push_back(std::async(std::launch::async, guarded, i));
    for (std::size_t i = first; i < last; ++i) rows[i] = wave[i - first].get();
  }
  return rows;
}

bool consistent(const SweepRow& row) {
  if (!row.analytic || !row.mc || !row.mc->v_out_hat || !row.mc->se_v) return false;
  const double dv = std::abs(*row.mc->v_out_hat - row.analytic->v_out);
  const double dp = std::abs(row.mc->p_hat - row.analytic->p_success);
  return dv <= 3.0 * *row.mc->se_v && dp <= 3.0 * row.mc->se_p;
}

void write_table(std::ostream& out, const std::string& command, const SweepSpec& spec,
                 const std::vector<SweepRow>& rows, TableLayout layout) {
  const auto list = [](const auto& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s += ';';
      s += format_number(static_cast<double>(values[i]));
    }
    return s;
  };
  const bool mc = spec.engine != Engine::analytic;
  out << "# sqd " << command << '\n'
      << "# swept=" << to_string(spec.swept) << '\n'
      << "# vx=" << format_number(spec.baseline.state.v_x) << '\n'
      << "# vp=" << format_number(spec.baseline.state.v_p) << '\n'
      << "# eta=" << format_number(spec.baseline.eta) << '\n'
      << "# sigma=" << list(spec.sigmas) << '\n'
      << "# q=" << list(spec.thresholds) << '\n'
      << "# theta=" << list(spec.thetas) << '\n'
      << "# nqcp=" << list(spec.n_qcps) << '\n'
      << "# engine=" << to_string(spec.engine) << '\n'
      << "# trigger_mode=" << to_string(spec.trigger_mode) << '\n';
  if (mc) {
    out << "# trials=" << spec.trials << '\n'
        << "# seed=" << spec.seed << '\n'
        << "# shards=" << spec.shards << '\n'
        << "# phase_model=" << to_string(spec.phase_model) << '\n'
        << "# bootstrap_resamples=" << spec.bootstrap_resamples << '\n';
    if (spec.phase_model == PhaseModel::bandlimited)
      out << "# sample_rate_hz=" << format_number(spec.process.sample_rate) << '\n'
          << "# band_low_hz=" << format_number(spec.process.band_low) << '\n'
          << "# band_high_hz=" << format_number(spec.process.band_high) << '\n';
  }

  if (layout == TableLayout::tradeoff) {
    out << "sigma,theta,nqcp,q,p_success,v_out,p_hat,se_p,v_out_hat,se_v\n";
    for (const SweepRow& r : rows) {
      out << format_number(r.params.sigma) << ',' << format_number(r.params.theta) << ','
          << r.params.n_qcp << ',' << format_number(r.params.q_threshold) << ','
          << cell(r.analytic ? std::optional(r.analytic->p_success) : std::nullopt) << ','
          << cell(r.analytic ? std::optional(r.analytic->v_out) : std::nullopt) << ','
          << cell(r.mc ? std::optional(r.mc->p_hat) : std::nullopt) << ','
          << cell(r.mc ? std::optional(r.mc->se_p) : std::nullopt) << ','
          << cell(r.mc ? r.mc->v_out_hat : std::nullopt) << ','
          << cell(r.mc ? r.mc->se_v : std::nullopt) << '\n';
    }
    return;
  }

  out << "sigma,theta,nqcp,q,v_in,v_out,p_success,v_out_hat,se_v,p_hat,se_p,n_accepted,"
         "u_product,u_product_hat,se_u,consistent\n";
  for (const SweepRow& r : rows) {
    out << format_number(r.params.sigma) << ',' << format_number(r.params.theta) << ','
        << r.params.n_qcp << ',' << format_number(r.params.q_threshold) << ','
        << format_number(r.v_in) << ','
        << cell(r.analytic ? std::optional(r.analytic->v_out) : std::nullopt) << ','
        << cell(r.analytic ? std::optional(r.analytic->p_success) : std::nullopt) << ','
        << cell(r.mc ? r.mc->v_out_hat : std::nullopt) << ','
        << cell(r.mc ? r.mc->se_v : std::nullopt) << ','
        << cell(r.mc ? std::optional(r.mc->p_hat) : std::nullopt) << ','
        << cell(r.mc ? std::optional(r.mc->se_p) : std::nullopt) << ','
        << (r.mc ? std::to_string(r.mc->n_accepted) : "") << ',' << cell(r.u_product) << ','
        << cell(mc_uncertainty(r)) << ',' << cell(mc_uncertainty_se(r)) << ','
        << (spec.engine == Engine::both ? (consistent(r) ? "1" : "0") : "") << '\n';
  }
}

}  // namespace sqd::cli
