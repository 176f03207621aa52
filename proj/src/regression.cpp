#include "ars/regression.hpp"

#include <cmath>

namespace ars {

DesignPair build_design(const Matrix& states) {
  const Index n = states.rows();
  if (n < 2) throw InvalidArgument("build_design: need at least 2 time points");
  return {states.topRows(n - 1), states.bottomRows(n - 1)};
}

DesignPair build_design(const CompletedSeries& series) { return build_design(series.state_matrix()); }

namespace {

struct Factorization {
  Eigen::ColPivHouseholderQR<Matrix> qr;
  double ridge = 0.0;
  bool full_rank = false;
};

Factorization factorize(const Matrix& design, double ridge) {
  Factorization f;
  f.ridge = ridge;
  if (ridge > 0.0) {
    const Index p = design.cols();
    Matrix augmented(design.rows() + p, p);
    augmented.topRows(design.rows()) = design;
    augmented.bottomRows(p) = std::sqrt(ridge) * Matrix::Identity(p, p);
    f.qr.compute(augmented);
  } else {
    f.qr.compute(design);
  }
  f.full_rank = f.qr.rank() == design.cols();
  return f;
}

double escalated_ridge(const Matrix& design) {
  const double mean_diag = design.colwise().squaredNorm().mean();
  return mean_diag > 0.0 ? 1e-10 * mean_diag : 1e-10;
}

Factorization factorize_with_policy(const Matrix& design, double ridge, RidgePolicy policy) {
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw InvalidArgument("ridge must be finite and non-negative");
  if (design.rows() == 0 || design.cols() == 0) throw InvalidArgument("empty design matrix");
  Factorization f = factorize(design, ridge);
  if (f.full_rank) return f;
  if (policy == RidgePolicy::strict) {
    throw SingularMatrix("normal equations are singular (rank " + std::to_string(f.qr.rank()) + " < " +
                         std::to_string(design.cols()) + "); use a positive ridge");
  }
  f = factorize(design, escalated_ridge(design));
  if (!f.full_rank) throw SingularMatrix("normal equations remain singular after ridge escalation");
  return f;
}

Matrix solve_coefficients(const Factorization& f, const Matrix& design, const Matrix& targets) {
  if (f.ridge > 0.0) {
    Matrix rhs = Matrix::Zero(design.rows() + design.cols(), targets.cols());
    rhs.topRows(design.rows()) = targets;
    return f.qr.solve(rhs);
  }
  return f.qr.solve(targets);
}

}  // namespace

LeastSquaresSolution solve_least_squares(const Matrix& design, const Matrix& targets, double ridge,
                                         RidgePolicy policy) {
  if (design.rows() != targets.rows()) throw InvalidArgument("design and targets differ in row count");
  const Factorization f = factorize_with_policy(design, ridge, policy);
  LeastSquaresSolution s;
  s.coefficients = solve_coefficients(f, design, targets);
  s.residual = targets - design * s.coefficients;
  s.ridge_used = f.ridge;
  s.loss = s.residual.squaredNorm() + f.ridge * s.coefficients.squaredNorm();
  return s;
}

Matrix ols_fit(const Matrix& design, const Matrix& targets, double ridge) {
  return solve_least_squares(design, targets, ridge, RidgePolicy::strict).coefficients;
}

Matrix ols_fit(const DesignPair& pair, double ridge) {
  if (pair.D.rows() != pair.D_plus.rows() || pair.D.cols() != pair.D_plus.cols())
    throw InvalidArgument("design pair shapes differ");
  return ols_fit(pair.D, pair.D_plus, ridge);
}

Matrix hat_matrix(const DesignPair& pair, double ridge) {
  const Matrix& D = pair.D;
  const Factorization f = factorize_with_policy(D, ridge, RidgePolicy::strict);
  // A P = Q R with A = D (or D augmented by sqrt(ridge) I), so
  // D^T D + ridge I = P R^T R P^T and H = W W^T with W = D P R^{-1}.
  const Index p = D.cols();
  const Matrix R = f.qr.matrixR().topLeftCorner(p, p).template triangularView<Eigen::Upper>();
  const Matrix DP = D * f.qr.colsPermutation();
  const Matrix Wt = R.transpose().triangularView<Eigen::Lower>().solve(DP.transpose());
  return Wt.transpose() * Wt;
}

double profiled_loss(const DesignPair& pair, double ridge) {
  if (pair.D.rows() != pair.D_plus.rows()) throw InvalidArgument("design pair shapes differ");
  return solve_least_squares(pair.D, pair.D_plus, ridge, RidgePolicy::strict).loss;
}

FitDiagnostics diagnose(const Matrix& design, const LeastSquaresSolution& solution) {
  FitDiagnostics d;
  d.residual_sum = solution.loss;
  d.ridge_used = solution.ridge_used;
  const Eigen::JacobiSVD<Matrix> svd(design);
  const Vector& sv = svd.singularValues();
  d.condition_hint = (sv.size() > 0 && sv(0) > 0.0) ? sv(sv.size() - 1) / sv(0) : 0.0;
  return d;
}

}  // namespace ars
