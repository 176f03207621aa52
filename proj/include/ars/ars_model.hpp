#pragma once

#include "ars/optimizer.hpp"
#include "ars/regression.hpp"
#include "ars/series.hpp"

#include <cstdint>

namespace ars {

enum class SlackInitMode { zeros, standard_normal, truth_perturbed };

struct SlackInit {
  SlackInitMode mode = SlackInitMode::standard_normal;
  std::uint64_t seed = 0;
  Matrix truth;  // n x s_tilde, used by truth_perturbed only
};

/// n x s_tilde starting slack; deterministic given the seed.
Matrix init_slack(Index n, Index s_tilde, const SlackInit& init);

/// Profiled loss min_B sum_j |x(j+1) - B x(j)|^2 at a fixed slack. Slack is
/// flattened time-major: entry j * s_tilde + c is coordinate c at time j.
double ars_objective(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde, double ridge = 0.0);
/// Exact gradient of ars_objective with respect to slack_flat.
Vector ars_gradient(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde, double ridge = 0.0);

Vector flatten_slack(const Matrix& slack);
Matrix unflatten_slack(const Vector& flat, Index n, Index s_tilde);

enum class FitMethod {
  bfgs,         // quasi-Newton on the profiled objective
  alternating,  // closed-form B step / slack step
};

struct ArsModel {
  Matrix B;  // (r + s_tilde)^2, x(j+1) = B x(j)
  CompletedSeries completed{ObservedSeries(Matrix::Zero(0, 1), 1.0), Matrix(0, 0)};
  double final_loss = 0.0;  // profiled loss at the stored slack
  double initial_loss = 0.0;
  double ridge = 0.0;
  std::uint64_t seed = 0;
  FitDiagnostics diagnostics;
  OptimResult optim;  // argmin is the raw optimizer slack, before normalization

  Index r() const { return completed.observed_dims(); }
  Index s_tilde() const { return completed.slack_dims(); }
  double step() const { return completed.observed.step(); }
};

/// Model at a fixed slack: B from least squares, no optimization.
ArsModel ars_at_slack(const ObservedSeries& observed, const Matrix& slack, double ridge = 0.0);

/// Minimizes the profiled objective over the slack; on return the slack is
/// rescaled to unit sample variance (forecast-invariant).
ArsModel fit_ars(const ObservedSeries& observed, Index s_tilde, const SlackInit& init, const OptimSettings& settings,
                 double ridge = 0.0, FitMethod method = FitMethod::bfgs, bool normalize = true);

/// Observed block of B^i (z(n), slack_n) for i = 1..k.
ObservedSeries forecast_ars(const ArsModel& model, Index k);

/// Slack times alpha, B conjugated by diag(I_r, alpha I).
ArsModel rescale_slack(const ArsModel& model, double alpha);

// Interaction-extended model: x(j+1) = E I(x(j)).

/// (x_1..x_d, x_1 x_2, .., x_1 x_d, x_2 x_3, .., x_{d-1} x_d).
Vector interaction_map(const Vector& x);
Index interaction_dim(Index d);
Matrix interaction_design(const Matrix& states);

struct ExtArsModel {
  Matrix E;  // d x d(d+1)/2
  CompletedSeries completed{ObservedSeries(Matrix::Zero(0, 1), 1.0), Matrix(0, 0)};
  double final_loss = 0.0;
  double initial_loss = 0.0;
  double ridge = 0.0;
  std::uint64_t seed = 0;
  bool underdetermined = false;  // fewer transitions than features
  FitDiagnostics diagnostics;
  OptimResult optim;

  Index r() const { return completed.observed_dims(); }
  Index s_tilde() const { return completed.slack_dims(); }
  double step() const { return completed.observed.step(); }
};

double ars_interactions_objective(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde,
                                  double ridge = 0.0);
Vector ars_interactions_gradient(const ObservedSeries& observed, const Vector& slack_flat, Index s_tilde,
                                 double ridge = 0.0);

ExtArsModel ars_interactions_at_slack(const ObservedSeries& observed, const Matrix& slack, double ridge = 0.0);
ExtArsModel fit_ars_interactions(const ObservedSeries& observed, Index s_tilde, const SlackInit& init,
                                 const OptimSettings& settings, double ridge = 0.0);
ObservedSeries forecast_ars_interactions(const ExtArsModel& model, Index k);

}  // namespace ars
