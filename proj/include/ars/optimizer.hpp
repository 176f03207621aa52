#pragma once

#include "ars/series.hpp"

#include <cstdint>
#include <functional>

namespace ars {

struct OptimSettings {
  int max_iters = 500;
  double grad_tol = 1e-8;   // stop when |g|_2 < grad_tol
  double loss_tol = 1e-10;  // stop when |f_k - f_{k+1}| < loss_tol * (|f_k| + loss_tol)
  int restarts = 3;         // extra runs from x0 + N(0, jitter^2) after the run from x0
  std::uint64_t seed = 0;
  double jitter = 0.1;
};

struct OptimResult {
  Vector argmin;
  double loss = 0.0;
  int iterations = 0;
  bool converged = false;
  int restart_index = 0;
};

using ObjectiveFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;
/// Returns f(x) and writes the gradient into the second argument.
using ValueGradientFn = std::function<double(const Vector&, Vector&)>;

/// BFGS with a strong-Wolfe line search (c1 = 1e-4, c2 = 0.9, first trial
/// step 1), best of 1 + settings.restarts runs.
OptimResult minimize(const ValueGradientFn& fg, const Vector& x0, const OptimSettings& settings = {});
OptimResult minimize(const ObjectiveFn& objective, const GradientFn& gradient, const Vector& x0,
                     const OptimSettings& settings = {});

/// max_i |analytic_i - fd_i| / max(|analytic|_inf, |fd|_inf), fd from central
/// differences. Scaling by the largest entry keeps near-zero components from
/// dominating.
double check_gradient(const ObjectiveFn& objective, const GradientFn& gradient, const Vector& x, double fd_step);

}  // namespace ars
