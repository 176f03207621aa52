#pragma once

#include "ars/ars_model.hpp"
#include "ars/dynamics.hpp"
#include "ars/optimizer.hpp"
#include "ars/series.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ars {

enum class System { circular, lorenz };

std::string to_string(System system);
System system_from_string(const std::string& name);

/// Optimizer settings used by the experiment harness: library defaults with
/// an iteration cap high enough that every fit stops on its tolerance.
OptimSettings harness_optim_settings(std::uint64_t seed = 0);

struct ExperimentConfig {
  System system = System::circular;
  Index n_train = 100;
  Index n_test = 30;
  int instances = 10;
  std::vector<double> sigmas{0.0, 0.01};
  std::vector<int> horizons{5, 10, 15, 20, 25};
  Index s_tilde = 1;
  SlackInitMode init = SlackInitMode::truth_perturbed;
  std::uint64_t base_seed = 0;
  int ar_order = 1;
  double ridge = 0.0;
  OptimSettings optim = harness_optim_settings();

  /// Circular motion: r = 1 observed of d = 2, 30 test points.
  static ExperimentConfig circular_defaults(std::uint64_t seed = 0);
  /// Lorenz map: r = 2 observed of d = 3, 100 test points.
  static ExperimentConfig lorenz_defaults(std::uint64_t seed = 0);

  Index observed_dims() const { return system == System::circular ? 1 : 2; }
  void validate() const;
};

struct InstanceResult {
  double sigma = 0.0;
  int instance = 0;
  bool ok = false;
  std::string error;
  std::vector<double> mse_ar;  // per horizon, same order as cfg.horizons
  std::vector<double> mse_ars;
  std::vector<double> relative_error;  // NaN where mse_ar == 0
  double ars_loss = 0.0;
  int ars_iterations = 0;
  bool ars_converged = false;
  // Plot data: observed training series, clean continuation, forecasts.
  ObservedSeries train;
  ObservedSeries truth;
  ObservedSeries ar_forecast;
  ObservedSeries ars_forecast;
};

struct HorizonSummary {
  double sigma = 0.0;
  int horizon = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single instance
  int count = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<InstanceResult> instances;  // sigma-major, then instance
  std::vector<HorizonSummary> summaries;  // sigma-major, then horizon
  std::vector<int> excluded;              // failed instances per sigma

  const HorizonSummary& summary(double sigma, int horizon) const;
  const InstanceResult& instance(double sigma, int index) const;
};

enum class Execution { serial, parallel };

/// |truth(k) - forecast(k)|^2 / r for 1-based horizon k.
double mse_at_horizon(const ObservedSeries& truth, const ObservedSeries& forecast, int k);

/// Runs every (sigma, instance) pair. Instance i draws all randomness from
/// base_seed + i, so serial and parallel execution give identical reports.
ExperimentReport run_experiment(const ExperimentConfig& cfg, Execution execution = Execution::parallel);

struct TableRow {
  std::string label;               // e.g. "σ=0.01"
  std::vector<std::string> cells;  // "mean ± sd" mantissas, one per horizon
  int exponent = 0;                // shared power of ten for the row
};

/// Rows per sigma; each row is scaled by 10^exponent where exponent is the
/// floor of log10 of the largest mean in that row.
std::vector<TableRow> relative_error_table(const ExperimentReport& report);
std::string render_markdown_table(const ExperimentReport& report, const std::string& title);
void write_report_csv(std::ostream& out, const ExperimentReport& report);

struct Figure1Data {
  ObservedSeries train;
  ObservedSeries truth;
  ObservedSeries ar_forecast;
  ObservedSeries ars_forecast;
};

/// Circular motion sampled at phase step 0.3, n = 30, r = s_tilde = 1,
/// slack started from standard normal draws; 30-step forecasts.
Figure1Data figure1_demo(std::uint64_t seed = 0);

/// Coefficient polynomials P_0..P_3 of the third-order scalar ODE stated for
/// the first Lorenz coordinate.
double observation_poly(int k, double x, const LorenzParams& params = {});

struct OdeResidualPoint {
  double t = 0.0;
  double x1 = 0.0;
  std::array<double, 4> derivatives{};  // x1, x1', x1'', x1'''
  std::array<double, 4> terms{};        // P_k(x1) * x1^(k)
  double residual = 0.0;                // sum of terms
  double max_term = 0.0;
  double roundoff_floor = 0.0;  // estimated finite-difference roundoff in residual
  // Identity obtained by eliminating x2 and x3 from the Lorenz equations:
  // Q x1' - x1 Q' - x1^4 - x1^3 x1' / alpha - gamma x1 Q = 0,
  // Q = x1'' / alpha + (1 + alpha) / alpha x1' + (1 - beta) x1.
  double eliminated_residual = 0.0;
  double eliminated_max_term = 0.0;
};

struct OdeResidualReport {
  double dt = 0.0;
  std::vector<OdeResidualPoint> points;
};

/// Integrates RK4 from x0 at step dt and evaluates both residuals at each
/// requested time with central differences (3-point for orders 1-2, 5-point
/// for order 3).
OdeResidualReport lorenz_ode_residual(double dt, const LorenzParams& params, const std::vector<double>& t_points,
                                      const Eigen::Vector3d& x0 = Eigen::Vector3d(1.0, 1.0, 1.0));
void write_residual_csv(std::ostream& out, const OdeResidualReport& report);

/// Evenly spaced sample times in [first, last].
std::vector<double> linspace(double first, double last, int count);

}  // namespace ars
