#include "ars/eval.hpp"

#include "ars/ar.hpp"
#include "ars/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

namespace ars {

std::string to_string(System system) { return system == System::circular ? "circular" : "lorenz"; }

System system_from_string(const std::string& name) {
  if (name == "circular") return System::circular;
  if (name == "lorenz") return System::lorenz;
  throw InvalidArgument("unknown system '" + name + "' (expected circular or lorenz)");
}

OptimSettings harness_optim_settings(std::uint64_t seed) {
  OptimSettings s;
  s.max_iters = 2000;
  s.seed = seed;
  return s;
}

ExperimentConfig ExperimentConfig::circular_defaults(std::uint64_t seed) {
  ExperimentConfig c;
  c.system = System::circular;
  c.n_test = 30;
  c.base_seed = seed;
  return c;
}

ExperimentConfig ExperimentConfig::lorenz_defaults(std::uint64_t seed) {
  ExperimentConfig c;
  c.system = System::lorenz;
  c.n_test = 100;
  c.base_seed = seed;
  return c;
}

void ExperimentConfig::validate() const {
  if (n_train < 3) throw InvalidArgument("n_train must be at least 3");
  if (n_test < 1) throw InvalidArgument("n_test must be at least 1");
  if (instances < 1) throw InvalidArgument("instances must be at least 1");
  if (sigmas.empty() || horizons.empty()) throw InvalidArgument("sigmas and horizons must be non-empty");
  for (double s : sigmas)
    if (!(s >= 0.0)) throw InvalidArgument("sigmas must be non-negative");
  for (int k : horizons)
    if (k < 1 || k > n_test) throw InvalidArgument("horizon " + std::to_string(k) + " outside [1, n_test]");
  if (s_tilde < 0) throw InvalidArgument("s_tilde must be non-negative");
  if (ar_order < 1 || ar_order >= n_train) throw InvalidArgument("ar_order must be in [1, n_train)");
}

const HorizonSummary& ExperimentReport::summary(double sigma, int horizon) const {
  for (const auto& s : summaries)
    if (s.sigma == sigma && s.horizon == horizon) return s;
  throw InvalidArgument("no summary for requested sigma/horizon");
}

const InstanceResult& ExperimentReport::instance(double sigma, int index) const {
  for (const auto& r : instances)
    if (r.sigma == sigma && r.instance == index) return r;
  throw InvalidArgument("no instance for requested sigma/index");
}

double mse_at_horizon(const ObservedSeries& truth, const ObservedSeries& forecast, int k) {
  if (truth.dim() != forecast.dim()) throw InvalidArgument("mse_at_horizon: dimension mismatch");
  if (k < 1 || k > truth.length() || k > forecast.length())
    throw InvalidArgument("mse_at_horizon: horizon " + std::to_string(k) + " not covered");
  const Index row = k - 1;
  return (truth.values().row(row) - forecast.values().row(row)).squaredNorm() / static_cast<double>(truth.dim());
}

namespace {

Trajectory clean_trajectory(System system, Index length) {
  // Circular motion is indexed from j = 1; the Lorenz map from x(0).
  return system == System::circular ? gen_circular(length, 1) : gen_lorenz(length);
}

InstanceResult run_instance(const ExperimentConfig& cfg, const Trajectory& clean, std::size_t sigma_index,
                            int instance) {
  InstanceResult out;
  out.sigma = cfg.sigmas[sigma_index];
  out.instance = instance;
  const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(instance);
  const std::uint64_t noise_seed = mix_seed(seed, 2 * sigma_index);
  const std::uint64_t slack_seed = mix_seed(seed, 2 * sigma_index + 1);
  try {
    const Index r = cfg.observed_dims();
    const MissingSpec spec{r, clean.dim() - r};
    const Trajectory clean_train = clean.slice(0, cfg.n_train);
    const Trajectory train = add_noise(clean_train, {out.sigma, noise_seed});
    const ObservedSeries observed = split_observed(train, spec);
    out.train = observed;
    out.truth = split_observed(clean.slice(cfg.n_train, cfg.n_test), spec);

    const ArModel ar = fit_ar(observed, cfg.ar_order, cfg.ridge);
    out.ar_forecast = forecast_ar(ar, observed, cfg.n_test);

    SlackInit init;
    init.mode = cfg.init;
    init.seed = slack_seed;
    if (cfg.init == SlackInitMode::truth_perturbed) {
      if (cfg.s_tilde != spec.missing_dims)
        throw InvalidArgument("truth-perturbed init needs s_tilde equal to the missing dimension");
      init.truth = split_missing(clean_train, spec).values();
    }
    OptimSettings optim = cfg.optim;
    optim.seed = slack_seed;
    const ArsModel model = fit_ars(observed, cfg.s_tilde, init, optim, cfg.ridge);
    out.ars_forecast = forecast_ars(model, cfg.n_test);
    out.ars_loss = model.optim.loss;
    out.ars_iterations = model.optim.iterations;
    out.ars_converged = model.optim.converged;

    if (!out.ar_forecast.values().allFinite() || !out.ars_forecast.values().allFinite())
      throw NumericOverflow("forecast became non-finite", cfg.n_test);
    for (int k : cfg.horizons) {
      const double a = mse_at_horizon(out.truth, out.ar_forecast, k);
      const double s = mse_at_horizon(out.truth, out.ars_forecast, k);
      out.mse_ar.push_back(a);
      out.mse_ars.push_back(s);
      out.relative_error.push_back(a > 0.0 ? s / a : std::numeric_limits<double>::quiet_NaN());
    }
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
    out.mse_ar.clear();
    out.mse_ars.clear();
    out.relative_error.clear();
  }
  return out;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, Execution execution) {
  cfg.validate();
  const Trajectory clean = clean_trajectory(cfg.system, cfg.n_train + cfg.n_test);
  const int per_sigma = cfg.instances;
  const int total = per_sigma * static_cast<int>(cfg.sigmas.size());

  ExperimentReport report;
  report.config = cfg;
  report.instances.resize(static_cast<std::size_t>(total));
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int task = 0; task < total; ++task) {
      report.instances[static_cast<std::size_t>(task)] =
          run_instance(cfg, clean, static_cast<std::size_t>(task / per_sigma), task % per_sigma);
    }
  } else {
    for (int task = 0; task < total; ++task) {
      report.instances[static_cast<std::size_t>(task)] =
          run_instance(cfg, clean, static_cast<std::size_t>(task / per_sigma), task % per_sigma);
    }
  }

  for (std::size_t si = 0; si < cfg.sigmas.size(); ++si) {
    int excluded = 0;
    for (int i = 0; i < per_sigma; ++i)
      if (!report.instances[si * static_cast<std::size_t>(per_sigma) + static_cast<std::size_t>(i)].ok) ++excluded;
    report.excluded.push_back(excluded);
    for (std::size_t hi = 0; hi < cfg.horizons.size(); ++hi) {
      std::vector<double> values;
      for (int i = 0; i < per_sigma; ++i) {
        const auto& inst = report.instances[si * static_cast<std::size_t>(per_sigma) + static_cast<std::size_t>(i)];
        if (inst.ok && std::isfinite(inst.relative_error[hi])) values.push_back(inst.relative_error[hi]);
      }
      HorizonSummary s;
      s.sigma = cfg.sigmas[si];
      s.horizon = cfg.horizons[hi];
      s.count = static_cast<int>(values.size());
      if (!values.empty()) {
        double sum = 0.0;
        for (double v : values) sum += v;
        s.mean = sum / static_cast<double>(values.size());
        if (values.size() > 1) {
          double ss = 0.0;
          for (double v : values) ss += (v - s.mean) * (v - s.mean);
          s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
      } else {
        s.mean = s.sd = std::numeric_limits<double>::quiet_NaN();
      }
      report.summaries.push_back(s);
    }
  }
  return report;
}

namespace {

std::string fixed2(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (v == 0.0 ? 0.0 : v);  // no "-0.00"
  return os.str();
}

std::string sigma_label(double sigma) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "σ=" << sigma;
  return os.str();
}

}  // namespace

std::vector<TableRow> relative_error_table(const ExperimentReport& report) {
  std::vector<TableRow> rows;
  const auto& cfg = report.config;
  for (double sigma : cfg.sigmas) {
    TableRow row;
    row.label = sigma_label(sigma);
    double largest = 0.0;
    for (int k : cfg.horizons) {
      const double m = report.summary(sigma, k).mean;
      if (std::isfinite(m)) largest = std::max(largest, std::abs(m));
    }
    row.exponent = largest > 0.0 ? static_cast<int>(std::floor(std::log10(largest))) : 0;
    const double scale = std::pow(10.0, -row.exponent);
    for (int k : cfg.horizons) {
      const HorizonSummary& s = report.summary(sigma, k);
      if (!std::isfinite(s.mean)) {
        row.cells.push_back("n/a");
        continue;
      }
      row.cells.push_back(fixed2(s.mean * scale) + " ± " + fixed2(s.sd * scale));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_markdown_table(const ExperimentReport& report, const std::string& title) {
  std::ostringstream os;
  os << "### " << title << "\n\n|";
  for (int k : report.config.horizons) os << " | k=" << k;
  os << " | |\n|---";
  for (std::size_t i = 0; i < report.config.horizons.size(); ++i) os << "|---";
  os << "|---|\n";
  for (const auto& row : relative_error_table(report)) {
    os << "| " << row.label;
    for (const auto& cell : row.cells) os << " | " << cell;
    os << " | (×10^" << row.exponent << ") |\n";
  }
  bool any_excluded = false;
  for (int e : report.excluded) any_excluded |= e > 0;
  if (any_excluded) {
    os << "\nExcluded failed fits:";
    for (std::size_t i = 0; i < report.excluded.size(); ++i)
      os << ' ' << sigma_label(report.config.sigmas[i]) << ": " << report.excluded[i];
    os << '\n';
  }
  return os.str();
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "system,sigma,k,instance,mse_ar,mse_ars,rel_err\n";
  const auto& cfg = report.config;
  for (const auto& inst : report.instances) {
    for (std::size_t hi = 0; hi < cfg.horizons.size(); ++hi) {
      out << to_string(cfg.system) << ',' << format_double(inst.sigma) << ',' << cfg.horizons[hi] << ','
          << inst.instance + 1 << ',';
      if (inst.ok) {
        out << format_double(inst.mse_ar[hi]) << ',' << format_double(inst.mse_ars[hi]) << ','
            << format_double(inst.relative_error[hi]) << '\n';
      } else {
        out << "nan,nan,nan\n";
      }
    }
  }
}

Figure1Data figure1_demo(std::uint64_t seed) {
  constexpr Index kTrain = 30;
  constexpr Index kAhead = 30;
  constexpr double kStep = 0.3;
  const Trajectory full = gen_circular(kTrain + kAhead, 1, 0.0, kStep);
  const MissingSpec spec{1, 1};
  Figure1Data out;
  out.train = split_observed(full.slice(0, kTrain), spec);
  out.truth = split_observed(full.slice(kTrain, kAhead), spec);
  out.ar_forecast = forecast_ar(fit_ar(out.train, 1), out.train, kAhead);

  SlackInit init;
  init.mode = SlackInitMode::standard_normal;
  init.seed = seed;
  OptimSettings settings;
  settings.seed = seed;
  const ArsModel model = fit_ars(out.train, 1, init, settings);
  out.ars_forecast = forecast_ars(model, kAhead);
  return out;
}

double observation_poly(int k, double x, const LorenzParams& p) {
  const double a = p.alpha;
  const double b = p.beta;
  const double g = p.gamma;
  switch (k) {
    case 0:
      return (1.0 - b) - (1.0 - b) * g * x;
    case 1:
      return (1.0 + a) / a - ((1.0 + a) * g / a - (1.0 - b)) * x - x * x * x;
    case 2:
      return 1.0 / a - (1.0 + a + g) / a * x - x * x * x / a;
    case 3:
      return -x / a;
    default:
      throw InvalidArgument("observation_poly: k must be in 0..3");
  }
}

OdeResidualReport lorenz_ode_residual(double dt, const LorenzParams& params, const std::vector<double>& t_points,
                                      const Eigen::Vector3d& x0) {
  if (!(dt > 0.0)) throw InvalidArgument("lorenz_ode_residual: dt must be positive");
  if (t_points.empty()) throw InvalidArgument("lorenz_ode_residual: no sample times");
  const double t_max = *std::max_element(t_points.begin(), t_points.end());
  const Index steps = static_cast<Index>(std::ceil(t_max / dt)) + 3;
  const Trajectory traj = rk4_lorenz(x0, params, dt, steps);
  const auto x = traj.values().col(0);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  OdeResidualReport report;
  report.dt = dt;
  for (double t : t_points) {
    const auto i = static_cast<Index>(std::llround(t / dt));
    if (i < 2 || i + 2 > steps)
      throw InvalidArgument("lorenz_ode_residual: t = " + format_double(t) + " too close to the trajectory edge");
    OdeResidualPoint pt;
    pt.t = static_cast<double>(i) * dt;
    pt.x1 = x[i];
    pt.derivatives[0] = x[i];
    pt.derivatives[1] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
    pt.derivatives[2] = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / (dt * dt);
    pt.derivatives[3] = (-x[i - 2] + 2.0 * x[i - 1] - 2.0 * x[i + 1] + x[i + 2]) / (2.0 * dt * dt * dt);

    // Sum of |stencil weights| per derivative order, for the roundoff estimate.
    const std::array<double, 4> weights{1.0, 1.0 / dt, 4.0 / (dt * dt), 3.0 / (dt * dt * dt)};
    double local = 0.0;
    for (Index off = -2; off <= 2; ++off) local = std::max(local, std::abs(x[i + off]));
    for (int k = 0; k < 4; ++k) {
      const double pk = observation_poly(k, pt.x1, params);
      pt.terms[static_cast<std::size_t>(k)] = pk * pt.derivatives[static_cast<std::size_t>(k)];
      pt.residual += pt.terms[static_cast<std::size_t>(k)];
      pt.max_term = std::max(pt.max_term, std::abs(pt.terms[static_cast<std::size_t>(k)]));
      pt.roundoff_floor += std::abs(pk) * eps * local * weights[static_cast<std::size_t>(k)];
    }

    const double a = params.alpha;
    const double xv = pt.x1;
    const double d1 = pt.derivatives[1];
    const double d2 = pt.derivatives[2];
    const double d3 = pt.derivatives[3];
    const double q = d2 / a + (1.0 + a) / a * d1 + (1.0 - params.beta) * xv;
    const double dq = d3 / a + (1.0 + a) / a * d2 + (1.0 - params.beta) * d1;
    const std::array<double, 5> parts{q * d1, -xv * dq, -xv * xv * xv * xv, -xv * xv * xv * d1 / a,
                                      -params.gamma * xv * q};
    for (double v : parts) {
      pt.eliminated_residual += v;
      pt.eliminated_max_term = std::max(pt.eliminated_max_term, std::abs(v));
    }
    report.points.push_back(pt);
  }
  return report;
}

void write_residual_csv(std::ostream& out, const OdeResidualReport& report) {
  out << "dt,t,x1,dx1,d2x1,d3x1,term0,term1,term2,term3,residual,max_term,roundoff_floor,eliminated_residual,"
         "eliminated_max_term\n";
  for (const auto& p : report.points) {
    out << format_double(report.dt) << ',' << format_double(p.t) << ',' << format_double(p.x1);
    for (int k = 1; k < 4; ++k) out << ',' << format_double(p.derivatives[static_cast<std::size_t>(k)]);
    for (double term : p.terms) out << ',' << format_double(term);
    out << ',' << format_double(p.residual) << ',' << format_double(p.max_term) << ','
        << format_double(p.roundoff_floor) << ',' << format_double(p.eliminated_residual) << ','
        << format_double(p.eliminated_max_term) << '\n';
  }
}

std::vector<double> linspace(double first, double last, int count) {
  if (count < 1) throw InvalidArgument("linspace: count must be positive");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] =
        count == 1 ? first : first + (last - first) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

}  // namespace ars
