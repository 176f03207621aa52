#include "ars/ars_model.hpp"

#include "profiled.hpp"

#include <cmath>

namespace ars {

Index interaction_dim(Index d) { return d * (d + 1) / 2; }

Vector interaction_map(const Vector& x) {
  const Index d = x.size();
  if (d < 1) throw InvalidArgument("interaction_map: empty state");
  Vector out(interaction_dim(d));
  out.head(d) = x;
  Index k = d;
  for (Index a = 0; a < d; ++a)
    for (Index b = a + 1; b < d; ++b) out[k++] = x[a] * x[b];
  return out;
}

Matrix interaction_design(const Matrix& states) {
  const Index d = states.cols();
  Matrix out(states.rows(), interaction_dim(d));
  out.leftCols(d) = states;
  Index k = d;
  for (Index a = 0; a < d; ++a)
    for (Index b = a + 1; b < d; ++b) out.col(k++) = states.col(a).cwiseProduct(states.col(b));
  return out;
}

double ars_interactions_objective(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde,
                                  double ridge) {
  return detail::profiled_value(observed, slack_flat, s_tilde, ridge, detail::Features::interactions, nullptr);
}

Vector ars_interactions_gradient(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde,
                                 double ridge) {
  Vector g;
  detail::profiled_value(observed, slack_flat, s_tilde, ridge, detail::Features::interactions, &g);
  return g;
}

ExtArsModel ars_interactions_at_slack(const ObservedSeries& observed, const Matrix& slack, double ridge) {
  if (observed.length() < 3) throw InvalidArgument("extended ARS needs at least 3 time points");
  ExtArsModel model;
  model.completed = CompletedSeries(observed, slack);
  const detail::ProfiledEval eval =
      detail::profiled_solution(model.completed.state_matrix(), ridge, detail::Features::interactions);
  model.E = eval.solution.coefficients.transpose();
  model.final_loss = eval.solution.loss;
  model.initial_loss = eval.solution.loss;
  model.ridge = ridge;
  model.underdetermined = eval.design.rows() < eval.design.cols();
  model.diagnostics = diagnose(eval.design, eval.solution);
  model.optim.argmin = flatten_slack(slack);
  model.optim.loss = eval.solution.loss;
  model.optim.converged = true;
  return model;
}

ExtArsModel fit_ars_interactions(const ObservedSeries& observed, Index s_tilde, const SlackInit& init,
                                 const OptimSettings& settings, double ridge) {
  const Index n = observed.length();
  if (n < 3) throw InvalidArgument("fit_ars_interactions: need at least 3 time points");
  if (s_tilde < 0) throw InvalidArgument("fit_ars_interactions: slack dimension must be non-negative");
  if (s_tilde == 0) return ars_interactions_at_slack(observed, Matrix(n, 0), ridge);

  const Vector x0 = flatten_slack(init_slack(n, s_tilde, init));
  const ValueGradientFn fg = [&](const Vector& x, Vector& g) {
    return detail::profiled_value(observed, x, s_tilde, ridge, detail::Features::interactions, &g);
  };
  const OptimResult optim = minimize(fg, x0, settings);
  ExtArsModel model = ars_interactions_at_slack(observed, unflatten_slack(optim.argmin, n, s_tilde), ridge);
  model.initial_loss = ars_interactions_objective(observed, x0, s_tilde, ridge);
  model.optim = optim;
  model.seed = init.seed;
  return model;
}

ObservedSeries forecast_ars_interactions(const ExtArsModel& model, Index k) {
  if (k < 0) throw InvalidArgument("forecast_ars_interactions: horizon must be non-negative");
  const CompletedSeries& c = model.completed;
  const Index n = c.length();
  const Index r = c.observed_dims();
  if (n < 1) throw InvalidArgument("forecast_ars_interactions: model has no fitted series");
  Vector state(c.dim());
  state.head(r) = c.observed.state(n - 1);
  state.tail(c.slack_dims()) = c.slack.row(n - 1).transpose();
  Matrix out(k, r);
  for (Index i = 0; i < k; ++i) {
    state = model.E * interaction_map(state);
    if (!state.allFinite()) throw NumericOverflow("forecast_ars_interactions: iterate became non-finite", i + 1);
    out.row(i) = state.head(r).transpose();
  }
  return ObservedSeries(std::move(out), c.observed.step(), c.observed.start_index() + n);
}

}  // namespace ars
