#pragma once

// Profiled least-squares objective over the slack, shared by the linear and
// interaction-extended models.

#include "ars/regression.hpp"
#include "ars/series.hpp"

namespace ars::detail {

enum class Features { linear, interactions };

struct ProfiledEval {
  LeastSquaresSolution solution;  // coefficients in row convention
  Matrix design;
};

Matrix completed_states(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde);

/// Value of the profiled loss; if `grad` is non-null it receives the
/// gradient with respect to the flattened slack.
double profiled_value(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde, double ridge,
                      Features features, Vector* grad);

ProfiledEval profiled_solution(const Matrix& states, double ridge, Features features);

}  // namespace ars::detail
