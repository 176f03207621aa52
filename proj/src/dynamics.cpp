#include "ars/dynamics.hpp"

#include "ars/random.hpp"

#include <cmath>

namespace ars {

Trajectory gen_circular(Index n, std::int64_t start_index, double phase, double increment) {
  if (n < 2) throw InvalidArgument("gen_circular: n must be at least 2");
  if (!(increment > 0.0)) throw InvalidArgument("gen_circular: increment must be positive");
  Matrix states(n, 2);
  for (Index j = 0; j < n; ++j) {
    const double angle = phase + static_cast<double>(start_index + j) * increment;
    states(j, 0) = std::cos(angle);
    states(j, 1) = std::sin(angle);
  }
  return Trajectory(std::move(states), increment, start_index);
}

Matrix lorenz_taylor_matrix(const LorenzParams& p, double step) {
  Matrix field = Matrix::Zero(3, 6);
  field(0, 0) = -p.alpha;
  field(0, 1) = p.alpha;
  field(1, 0) = p.beta;
  field(1, 1) = -1.0;
  field(1, 4) = -1.0;  // -x1 x3
  field(2, 2) = -p.gamma;
  field(2, 3) = 1.0;  // x1 x2
  Matrix g = Matrix::Zero(3, 6);
  g.leftCols(3).setIdentity();
  return g + step * field;
}

Eigen::Vector3d lorenz_field(const Eigen::Vector3d& x, const LorenzParams& p) {
  return {-p.alpha * x[0] + p.alpha * x[1], p.beta * x[0] - x[1] - x[0] * x[2], -p.gamma * x[2] + x[0] * x[1]};
}

Eigen::Vector3d lorenz_taylor_map(const Eigen::Vector3d& x, const LorenzParams& params) {
  return x + kLorenzStep * lorenz_field(x, params);
}

Trajectory gen_lorenz(Index n, const LorenzParams& params, int burn_in) {
  if (n < 2) throw InvalidArgument("gen_lorenz: n must be at least 2");
  Eigen::Vector3d x(0.25, 0.25, 0.25);
  for (int i = 0; i < burn_in; ++i) {
    x = lorenz_taylor_map(x, params);
    if (!x.allFinite()) throw NumericOverflow("gen_lorenz: burn-in diverged", i + 1);
  }
  Matrix states(n, 3);
  for (Index j = 0; j < n; ++j) {
    if (!x.allFinite()) throw NumericOverflow("gen_lorenz: trajectory diverged", j);
    states.row(j) = x.transpose();
    x = lorenz_taylor_map(x, params);
  }
  return Trajectory(std::move(states), kLorenzStep, 0);
}

Trajectory rk4_lorenz(const Eigen::Vector3d& x0, const LorenzParams& params, double dt, Index steps) {
  if (!(dt > 0.0)) throw InvalidArgument("rk4_lorenz: dt must be positive");
  if (steps < 1) throw InvalidArgument("rk4_lorenz: steps must be at least 1");
  Matrix states(steps + 1, 3);
  Eigen::Vector3d x = x0;
  states.row(0) = x.transpose();
  for (Index i = 1; i <= steps; ++i) {
    const Eigen::Vector3d k1 = lorenz_field(x, params);
    const Eigen::Vector3d k2 = lorenz_field(x + 0.5 * dt * k1, params);
    const Eigen::Vector3d k3 = lorenz_field(x + 0.5 * dt * k2, params);
    const Eigen::Vector3d k4 = lorenz_field(x + dt * k3, params);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw NumericOverflow("rk4_lorenz: state became non-finite", i);
    states.row(i) = x.transpose();
  }
  return Trajectory(std::move(states), dt, 0);
}

Trajectory add_noise(const Trajectory& traj, const NoiseConfig& cfg) {
  if (!(cfg.sigma >= 0.0)) throw InvalidArgument("add_noise: sigma must be non-negative");
  if (cfg.sigma == 0.0) return traj;
  NormalStream rng(cfg.seed);
  Matrix noisy = traj.values();
  for (Index j = 0; j < noisy.rows(); ++j)
    for (Index c = 0; c < noisy.cols(); ++c) noisy(j, c) += cfg.sigma * rng.standard_normal();
  return Trajectory(std::move(noisy), traj.step(), traj.start_index());
}

namespace {

void check_split(const Trajectory& traj, const MissingSpec& spec) {
  if (spec.observed_dims < 1 || spec.missing_dims < 0)
    throw InvalidArgument("missing spec needs r >= 1 and s >= 0");
  if (spec.observed_dims + spec.missing_dims != traj.dim())
    throw InvalidArgument("missing spec r + s does not match trajectory dimension");
}

}  // namespace

ObservedSeries split_observed(const Trajectory& traj, const MissingSpec& spec) {
  check_split(traj, spec);
  return traj.leading(spec.observed_dims);
}

TimeSeries split_missing(const Trajectory& traj, const MissingSpec& spec) {
  check_split(traj, spec);
  if (spec.missing_dims == 0) throw InvalidArgument("split_missing: no missing coordinates");
  return TimeSeries(traj.values().rightCols(spec.missing_dims), traj.step(), traj.start_index());
}

}  // namespace ars
