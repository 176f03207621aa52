#include "ars/ar.hpp"

#include "ars/regression.hpp"

namespace ars {

Matrix ArModel::companion() const {
  const Index p = order;
  Matrix c = Matrix::Zero(p * dim, p * dim);
  for (Index k = 0; k < p; ++k) c.block(0, k * dim, dim, dim) = coeffs[static_cast<std::size_t>(k)];
  if (p > 1) c.bottomLeftCorner((p - 1) * dim, (p - 1) * dim).setIdentity();
  return c;
}

ArModel fit_ar(const ObservedSeries& series, int order, double ridge, bool intercept) {
  if (order < 1) throw InvalidArgument("fit_ar: order must be at least 1");
  const Index n = series.length();
  const Index r = series.dim();
  const Index p = order;
  if (n <= p) throw InvalidArgument("fit_ar: series length must exceed the order");

  const Index rows = n - p;
  Matrix design(rows, p * r + (intercept ? 1 : 0));
  Matrix targets(rows, r);
  const Matrix& z = series.values();
  for (Index i = 0; i < rows; ++i) {
    const Index j = i + p - 1;  // current time
    for (Index k = 0; k < p; ++k) design.block(i, k * r, 1, r) = z.row(j - k);
    if (intercept) design(i, p * r) = 1.0;
    targets.row(i) = z.row(j + 1);
  }
  const LeastSquaresSolution sol = solve_least_squares(design, targets, ridge, RidgePolicy::strict);

  ArModel model;
  model.order = order;
  model.dim = r;
  model.step = series.step();
  for (Index k = 0; k < p; ++k) model.coeffs.push_back(sol.coefficients.block(k * r, 0, r, r).transpose());
  if (intercept) model.intercept = sol.coefficients.row(p * r).transpose();
  model.residual_sum = sol.residual.squaredNorm();
  return model;
}

ObservedSeries forecast_ar(const ArModel& model, const ObservedSeries& history, Index k) {
  if (k < 0) throw InvalidArgument("forecast_ar: horizon must be non-negative");
  if (history.dim() != model.dim) throw InvalidArgument("forecast_ar: history dimension does not match model");
  if (history.length() < model.order) throw InvalidArgument("forecast_ar: history shorter than model order");
  const Index r = model.dim;
  const Index p = model.order;
  const Matrix companion = model.companion();

  Vector state(p * r);
  for (Index lag = 0; lag < p; ++lag) state.segment(lag * r, r) = history.state(history.length() - 1 - lag);

  Matrix out(k, r);
  for (Index i = 0; i < k; ++i) {
    state = (companion * state).eval();
    if (model.intercept.size() == r) state.head(r) += model.intercept;
    out.row(i) = state.head(r).transpose();
  }
  return ObservedSeries(std::move(out), history.step(), history.start_index() + history.length());
}

}  // namespace ars
