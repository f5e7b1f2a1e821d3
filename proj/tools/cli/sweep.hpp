#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sqd/analytics.hpp"
#include "sqd/montecarlo.hpp"

namespace sqd::cli {

enum class Engine { analytic, montecarlo, both };
enum class SweptParameter { sigma, q_threshold, theta, n_qcp };

const char* to_string(Engine e);
const char* to_string(SweptParameter p);
const char* to_string(PhaseModel m);
const char* to_string(TriggerMode m);

/// A parameter-grid run. Every grid is a list; the table is the Cartesian
/// product with the swept parameter varying fastest and the others in the
/// fixed order sigma, theta, n_qcp, q_threshold.
struct SweepSpec {
  SweptParameter swept = SweptParameter::sigma;
  ProtocolParams baseline;  ///< state and eta; the gridded fields are ignored
  std::vector<double> sigmas;
  std::vector<double> thresholds;
  std::vector<double> thetas;
  std::vector<int> n_qcps;
  Engine engine = Engine::analytic;
  bool uncertainty_product = false;

  // Monte Carlo settings.
  std::size_t trials = 1'000'000;
  std::uint64_t seed = 1;
  std::size_t shards = 1;
  PhaseModel phase_model = PhaseModel::iid;
  PhaseProcessConfig process;
  TriggerMode trigger_mode = TriggerMode::fixed_angle;
  std::size_t bootstrap_resamples = kBootstrapResamples;

  unsigned threads = 1;  ///< grid points evaluated concurrently

  void validate() const;
  std::vector<ProtocolParams> grid() const;
  SimulationConfig simulation(const ProtocolParams& point, double verify_angle) const;
};

struct SweepRow {
  ProtocolParams params;
  double v_in = 0.0;
  std::optional<AnalyticResult> analytic;
  std::optional<double> u_product;
  std::optional<DistillationEstimate> mc;
  std::optional<DistillationEstimate> mc_p;  ///< psi = pi/2 run for the uncertainty product
};

/// Thrown when a grid point fails; carries the row number and parameters.
class GridPointError : public std::runtime_error {
 public:
  GridPointError(std::size_t row, const ProtocolParams& p, const std::string& what,
                 bool numerical);
  bool numerical() const { return numerical_; }

 private:
  bool numerical_;
};

SweepRow evaluate_point(const SweepSpec& spec, const ProtocolParams& point);

/// Rows in grid order regardless of completion order.
std::vector<SweepRow> sweep(const SweepSpec& spec);

/// Monte Carlo and analytic columns agree within three combined standard errors.
bool consistent(const SweepRow& row);

enum class TableLayout { sweep, tradeoff };

/// '#'-prefixed configuration echo followed by a CSV header and one line per row.
void write_table(std::ostream& out, const std::string& command, const SweepSpec& spec,
                 const std::vector<SweepRow>& rows, TableLayout layout = TableLayout::sweep);

}  // namespace sqd::cli
