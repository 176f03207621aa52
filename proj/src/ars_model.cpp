#include "ars/ars_model.hpp"

#include "ars/random.hpp"
#include "profiled.hpp"

#include <cmath>

namespace ars {

namespace detail {

Matrix completed_states(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde) {
  if (s_tilde < 0) throw InvalidArgument("slack dimension must be non-negative");
  const Index n = observed.length();
  if (slack_flat.size() != n * s_tilde)
    throw InvalidArgument("slack vector has length " + std::to_string(slack_flat.size()) + ", expected " +
                          std::to_string(n * s_tilde));
  Matrix x(n, observed.dim() + s_tilde);
  x.leftCols(observed.dim()) = observed.values();
  x.rightCols(s_tilde) = unflatten_slack(slack_flat, n, s_tilde);
  return x;
}

ProfiledEval profiled_solution(const Matrix& states, double ridge, Features features) {
  const DesignPair pair = build_design(states);
  ProfiledEval eval;
  eval.design = features == Features::linear ? pair.D : interaction_design(pair.D);
  eval.solution = solve_least_squares(eval.design, pair.D_plus, ridge, RidgePolicy::escalate);
  return eval;
}

// With M the inner minimizer, the envelope theorem gives the gradient of the
// profiled loss as the partial derivative of |D_plus - F(D) M|^2 at fixed M:
//   d/dD_plus = 2 R,   d/dF = -2 R M^T,   R = D_plus - F(D) M.
// Slack entries appear in both D (rows 0..n-2) and D_plus (rows 1..n-1).
double profiled_value(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde, double ridge,
                      Features features, Vector* grad) {
  const Matrix states = completed_states(observed, slack_flat, s_tilde);
  const ProfiledEval eval = profiled_solution(states, ridge, features);
  if (grad == nullptr) return eval.solution.loss;

  const Index n = states.rows();
  const Index d = states.cols();
  const Index r = observed.dim();
  const Matrix& R = eval.solution.residual;
  const Matrix dF = -2.0 * R * eval.solution.coefficients.transpose();  // (n-1) x q

  Matrix dX = Matrix::Zero(n, d);
  dX.bottomRows(n - 1) += 2.0 * R;
  dX.topRows(n - 1) += dF.leftCols(d);
  if (features == Features::interactions) {
    Index col = d;
    for (Index a = 0; a < d; ++a) {
      for (Index b = a + 1; b < d; ++b, ++col) {
        dX.col(a).head(n - 1) += dF.col(col).cwiseProduct(states.col(b).head(n - 1));
        dX.col(b).head(n - 1) += dF.col(col).cwiseProduct(states.col(a).head(n - 1));
      }
    }
  }
  *grad = flatten_slack(dX.rightCols(d - r));
  return eval.solution.loss;
}

}  // namespace detail

Vector flatten_slack(const Matrix& slack) {
  Vector flat(slack.size());
  const Index s = slack.cols();
  for (Index j = 0; j < slack.rows(); ++j)
    for (Index c = 0; c < s; ++c) flat[j * s + c] = slack(j, c);
  return flat;
}

Matrix unflatten_slack(const Vector& flat, Index n, Index s_tilde) {
  if (flat.size() != n * s_tilde) throw InvalidArgument("slack vector length mismatch");
  Matrix slack(n, s_tilde);
  for (Index j = 0; j < n; ++j)
    for (Index c = 0; c < s_tilde; ++c) slack(j, c) = flat[j * s_tilde + c];
  return slack;
}

Matrix init_slack(Index n, Index s_tilde, const SlackInit& init) {
  if (n < 2) throw InvalidArgument("init_slack: n must be at least 2");
  if (s_tilde < 1) throw InvalidArgument("init_slack: slack dimension must be at least 1");
  Matrix slack = Matrix::Zero(n, s_tilde);
  if (init.mode == SlackInitMode::zeros) return slack;
  if (init.mode == SlackInitMode::truth_perturbed) {
    if (init.truth.rows() != n || init.truth.cols() != s_tilde)
      throw InvalidArgument("init_slack: truth must be " + std::to_string(n) + " x " + std::to_string(s_tilde));
    slack = init.truth;
  }
  NormalStream rng(init.seed);
  for (Index j = 0; j < n; ++j)
    for (Index c = 0; c < s_tilde; ++c) slack(j, c) += rng.standard_normal();
  return slack;
}

double ars_objective(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde, double ridge) {
  return detail::profiled_value(observed, slack_flat, s_tilde, ridge, detail::Features::linear, nullptr);
}

Vector ars_gradient(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde, double ridge) {
  Vector g;
  detail::profiled_value(observed, slack_flat, s_tilde, ridge, detail::Features::linear, &g);
  return g;
}

ArsModel ars_at_slack(const ObservedSeries& observed, const Matrix& slack, double ridge) {
  if (observed.length() < 3) throw InvalidArgument("ARS needs at least 3 time points");
  ArsModel model;
  model.completed = CompletedSeries(observed, slack);
  const detail::ProfiledEval eval =
      detail::profiled_solution(model.completed.state_matrix(), ridge, detail::Features::linear);
  model.B = eval.solution.coefficients.transpose();
  model.final_loss = eval.solution.loss;
  model.initial_loss = eval.solution.loss;
  model.ridge = ridge;
  model.diagnostics = diagnose(eval.design, eval.solution);
  model.optim.argmin = flatten_slack(slack);
  model.optim.loss = eval.solution.loss;
  model.optim.converged = true;
  return model;
}

namespace {

// Slack step of the alternating scheme: with B fixed, the residuals
// x(j+1) - B x(j) are affine in the slack.
Matrix best_slack_given_b(const ObservedSeries& observed, const Matrix& B, Index s) {
  const Index n = observed.length();
  const Index r = observed.dim();
  const Index d = r + s;
  const Matrix B_obs = B.leftCols(r);
  const Matrix B_slack = B.rightCols(s);
  Matrix A = Matrix::Zero((n - 1) * d, n * s);
  Vector b((n - 1) * d);
  for (Index j = 0; j + 1 < n; ++j) {
    A.block(j * d + r, (j + 1) * s, s, s).setIdentity();
    A.block(j * d, j * s, d, s) -= B_slack;
    Vector rhs = B_obs * observed.state(j);
    rhs.head(r) -= observed.state(j + 1);
    b.segment(j * d, d) = rhs;
  }
  const Vector flat = A.completeOrthogonalDecomposition().solve(b);
  return unflatten_slack(flat, n, s);
}

OptimResult run_alternating(const ObservedSeries& observed, const Matrix& start, double ridge,
                            const OptimSettings& settings) {
  const Index s = start.cols();
  Matrix slack = start;
  OptimResult result;
  result.loss = ars_objective(observed, flatten_slack(slack), s, ridge);
  for (int iter = 0; iter < settings.max_iters; ++iter) {
    const CompletedSeries completed(observed, slack);
    const Matrix B =
        detail::profiled_solution(completed.state_matrix(), ridge, detail::Features::linear).solution.coefficients
            .transpose();
    Matrix next = best_slack_given_b(observed, B, s);
    const double loss = ars_objective(observed, flatten_slack(next), s, ridge);
    if (!std::isfinite(loss) || loss > result.loss) break;
    const double decrease = result.loss - loss;
    slack = std::move(next);
    result.loss = loss;
    result.iterations = iter + 1;
    if (decrease < settings.loss_tol * (loss + decrease + settings.loss_tol)) {
      result.converged = true;
      break;
    }
  }
  result.argmin = flatten_slack(slack);
  return result;
}

double sample_sd(const Matrix& values) {
  const Index count = values.size();
  if (count < 2) return 0.0;
  const double mean = values.mean();
  return std::sqrt((values.array() - mean).square().sum() / static_cast<double>(count - 1));
}

}  // namespace

ArsModel fit_ars(const ObservedSeries& observed, Index s_tilde, const SlackInit& init, const OptimSettings& settings,
                 double ridge, FitMethod method, bool normalize) {
  const Index n = observed.length();
  if (n < 3) throw InvalidArgument("fit_ars: need at least 3 time points");
  if (s_tilde < 0) throw InvalidArgument("fit_ars: slack dimension must be non-negative");
  if (s_tilde == 0) return ars_at_slack(observed, Matrix(n, 0), ridge);

  const Matrix start = init_slack(n, s_tilde, init);
  const Vector x0 = flatten_slack(start);
  const double initial = ars_objective(observed, x0, s_tilde, ridge);

  OptimResult optim;
  if (method == FitMethod::bfgs) {
    const ValueGradientFn fg = [&](const Vector& x, Vector& g) {
      return detail::profiled_value(observed, x, s_tilde, ridge, detail::Features::linear, &g);
    };
    optim = minimize(fg, x0, settings);
  } else {
    optim = run_alternating(observed, start, ridge, settings);
  }

  ArsModel model = ars_at_slack(observed, unflatten_slack(optim.argmin, n, s_tilde), ridge);
  model.optim = optim;
  model.initial_loss = initial;
  model.seed = init.seed;
  if (normalize) {
    const double sd = sample_sd(model.completed.slack);
    if (sd > 0.0 && std::isfinite(sd)) model = rescale_slack(model, 1.0 / sd);
  }
  return model;
}

ObservedSeries forecast_ars(const ArsModel& model, Index k) {
  if (k < 0) throw InvalidArgument("forecast_ars: horizon must be non-negative");
  const CompletedSeries& c = model.completed;
  const Index n = c.length();
  const Index r = c.observed_dims();
  if (n < 1) throw InvalidArgument("forecast_ars: model has no fitted series");
  Vector state(c.dim());
  state.head(r) = c.observed.state(n - 1);
  state.tail(c.slack_dims()) = c.slack.row(n - 1).transpose();
  Matrix out(k, r);
  for (Index i = 0; i < k; ++i) {
    state = (model.B * state).eval();
    out.row(i) = state.head(r).transpose();
  }
  return ObservedSeries(std::move(out), c.observed.step(), c.observed.start_index() + n);
}

ArsModel rescale_slack(const ArsModel& model, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("rescale_slack: alpha must be positive");
  ArsModel out = model;
  if (alpha == 1.0) return out;
  const Index s = model.s_tilde();
  out.completed.slack *= alpha;
  // B' = S B S^{-1}, S = diag(I_r, alpha I_s).
  out.B.bottomRows(s) *= alpha;
  out.B.rightCols(s) /= alpha;
  const detail::ProfiledEval eval =
      detail::profiled_solution(out.completed.state_matrix(), model.diagnostics.ridge_used, detail::Features::linear);
  out.final_loss = eval.solution.loss;
  out.diagnostics = diagnose(eval.design, eval.solution);
  return out;
}

}  // namespace ars
