#pragma once

#include "ars/series.hpp"

#include <cstdint>

namespace ars {

struct LorenzParams {
  double alpha = 10.0;
  double beta = 28.0;
  double gamma = 8.0 / 3.0;
};

struct NoiseConfig {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Split of a d-dimensional state into r leading observed and s trailing
/// missing coordinates.
struct MissingSpec {
  Index observed_dims = 1;
  Index missing_dims = 0;
};

inline constexpr double kCircularPhase = 5.0;
inline constexpr double kCircularIncrement = 1.0 / 20.0;
inline constexpr double kLorenzStep = 1.0 / 200.0;
inline constexpr int kLorenzBurnIn = 100;

/// Unit-circle motion: state j is (cos(phase + (start_index + j) * increment),
/// sin(...)); the increment is recorded as the step.
Trajectory gen_circular(Index n, std::int64_t start_index, double phase = kCircularPhase,
                        double increment = kCircularIncrement);

/// 3x6 matrix G of the Euler-discretized Lorenz field acting on
/// (x1, x2, x3, x1 x2, x1 x3, x2 x3).
Matrix lorenz_taylor_matrix(const LorenzParams& params, double step = kLorenzStep);

/// One step x -> x + step * f(x) of the Lorenz field.
Eigen::Vector3d lorenz_taylor_map(const Eigen::Vector3d& x, const LorenzParams& params = {});

/// Exact Lorenz vector field.
Eigen::Vector3d lorenz_field(const Eigen::Vector3d& x, const LorenzParams& params = {});

/// Iterates the Taylor map `burn_in` times from (1/4, 1/4, 1/4), then records
/// n states starting at index 0. Throws NumericOverflow on divergence.
Trajectory gen_lorenz(Index n, const LorenzParams& params = {}, int burn_in = kLorenzBurnIn);

/// Classical RK4 on the exact Lorenz field; returns steps + 1 states
/// including x0.
Trajectory rk4_lorenz(const Eigen::Vector3d& x0, const LorenzParams& params, double dt, Index steps);

/// Adds i.i.d. N(0, sigma^2) to every coordinate. sigma == 0 returns the
/// input unchanged.
Trajectory add_noise(const Trajectory& traj, const NoiseConfig& cfg);

ObservedSeries split_observed(const Trajectory& traj, const MissingSpec& spec);
/// Trailing missing coordinates (the hidden truth) of the same split.
TimeSeries split_missing(const Trajectory& traj, const MissingSpec& spec);

}  // namespace ars
