#pragma once

#include "ars/series.hpp"

#include <vector>

namespace ars {

/// z_{j+1} = sum_k C_k z_{j+1-k} (+ intercept).
struct ArModel {
  int order = 1;
  Index dim = 1;
  double step = 1.0;
  std::vector<Matrix> coeffs;  // C_1 .. C_p, each dim x dim
  Vector intercept;            // empty unless fitted with an intercept
  double residual_sum = 0.0;

  /// (p * dim) x (p * dim) companion matrix acting on (z_j, ..., z_{j-p+1}).
  Matrix companion() const;
};

ArModel fit_ar(const ObservedSeries& series, int order, double ridge = 0.0, bool intercept = false);

/// Iterates the fitted recursion k steps past the end of `history`.
ObservedSeries forecast_ar(const ArModel& model, const ObservedSeries& history, Index k);

}  // namespace ars
