#pragma once

#include "ars/series.hpp"

namespace ars {

/// Lagged design: row j of D is the state at j, row j of D_plus the state at
/// j + 1, for j = 0 .. n-2.
struct DesignPair {
  Matrix D;
  Matrix D_plus;
};

struct FitDiagnostics {
  double residual_sum = 0.0;
  double condition_hint = 0.0;  // sigma_min / sigma_max of D
  double ridge_used = 0.0;
};

enum class RidgePolicy {
  strict,    // singular normal equations throw SingularMatrix
  escalate,  // retry with 1e-10 * mean diag(D^T D)
};

/// Least-squares solution in row convention: targets ~ design * coefficients.
struct LeastSquaresSolution {
  Matrix coefficients;  // p x q
  Matrix residual;      // targets - design * coefficients
  double loss = 0.0;    // |residual|_F^2 + ridge |coefficients|_F^2
  double ridge_used = 0.0;
};

DesignPair build_design(const Matrix& states);
DesignPair build_design(const CompletedSeries& series);

LeastSquaresSolution solve_least_squares(const Matrix& design, const Matrix& targets, double ridge,
                                         RidgePolicy policy = RidgePolicy::strict);

/// M = (D^T D + ridge I)^{-1} D^T D_plus, so predicted row = row(D) * M. The
/// transition matrix of x_{j+1} = B x_j is B = M^T.
Matrix ols_fit(const DesignPair& pair, double ridge = 0.0);
Matrix ols_fit(const Matrix& design, const Matrix& targets, double ridge = 0.0);

/// H = D (D^T D + ridge I)^{-1} D^T.
Matrix hat_matrix(const DesignPair& pair, double ridge = 0.0);

/// tr{D_plus^T (I - H) D_plus}, evaluated as the residual norm of the
/// (ridge-penalized) least-squares fit, which is the same quantity.
double profiled_loss(const DesignPair& pair, double ridge = 0.0);

FitDiagnostics diagnose(const Matrix& design, const LeastSquaresSolution& solution);

}  // namespace ars
