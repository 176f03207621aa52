#include "ars/ar.hpp"

#include "ars/ars_model.hpp"
#include "ars/dynamics.hpp"
#include "gen.hpp"

#include <doctest.h>

using namespace ars;

namespace {

ObservedSeries scalar(const Vector& v, std::int64_t start = 0) { return ObservedSeries(Matrix(v), 1.0, start); }

}  // namespace

TEST_CASE("AR(1) on exact geometric data") {
  Vector v(20);
  v[0] = 3.0;
  for (Index j = 1; j < v.size(); ++j) v[j] = 0.9 * v[j - 1];
  const ArModel m = fit_ar(scalar(v), 1);
  CHECK(std::abs(m.coeffs[0](0, 0) - 0.9) < 1e-10);
  CHECK(m.residual_sum < 1e-20);
}

TEST_CASE("AR(2) on a cosine follows the trigonometric recurrence") {
  const double theta = 0.23;
  Vector v(60);
  for (Index j = 0; j < v.size(); ++j) v[j] = std::cos(static_cast<double>(j) * theta);
  const ArModel m = fit_ar(scalar(v), 2);
  CHECK(std::abs(m.coeffs[0](0, 0) - 2.0 * std::cos(theta)) < 1e-8);
  CHECK(std::abs(m.coeffs[1](0, 0) + 1.0) < 1e-8);

  const ObservedSeries f = forecast_ar(m, scalar(v), 25);
  CHECK(f.start_index() == 60);
  for (Index k = 1; k <= 25; ++k)
    CHECK(std::abs(f.values()(k - 1, 0) - std::cos(static_cast<double>(59 + k) * theta)) < 1e-6);
}

TEST_CASE("AR(1) on circular motion decays") {
  // Several periods at phase step 0.3; over a short arc the fitted scalar can exceed 1.
  const ObservedSeries z = split_observed(gen_circular(30, 1, 0.0, 0.3), {1, 1});
  const ArModel m = fit_ar(z, 1);
  CHECK(std::abs(m.coeffs[0](0, 0)) < 1.0);
  const ObservedSeries f = forecast_ar(m, z, 30);
  for (Index k = 1; k < 30; ++k) CHECK(std::abs(f.values()(k, 0)) < std::abs(f.values()(k - 1, 0)));
}

TEST_CASE("AR forecasts from fixed coefficients") {
  ArModel identity;
  identity.coeffs = {Matrix::Identity(1, 1)};
  Vector v(3);
  v << 1, 2, 7;
  const ObservedSeries f = forecast_ar(identity, scalar(v), 4);
  CHECK(f.values().col(0) == Vector::Constant(4, 7.0));

  ArModel half;
  half.coeffs = {Matrix::Constant(1, 1, 0.5)};
  Vector w(2);
  w << 1, 8;
  const ObservedSeries g = forecast_ar(half, scalar(w), 3);
  CHECK(g.values()(0, 0) == 4.0);
  CHECK(g.values()(1, 0) == 2.0);
  CHECK(g.values()(2, 0) == 1.0);
  CHECK(forecast_ar(half, scalar(w), 0).length() == 0);
}

TEST_CASE("property: exact stable VAR(p) data gives back its coefficients") {
  NormalStream rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = gen::uniform_int(rng, 1, 3);
    const Index d = gen::uniform_int(rng, 1, 2);
    std::vector<Matrix> C;
    for (int k = 0; k < p; ++k) C.push_back(gen::normal_matrix(rng, d, d, 0.3 / p));
    Matrix x(p + 40, d);
    x.topRows(p) = gen::normal_matrix(rng, p, d);
    for (Index j = p; j < x.rows(); ++j) {
      Vector next = Vector::Zero(d);
      for (int k = 0; k < p; ++k) next += C[static_cast<std::size_t>(k)] * x.row(j - 1 - k).transpose();
      x.row(j) = next.transpose();
    }
    // Keep the series well scaled: stop if it decays to roundoff.
    if (x.bottomRows(5).norm() < 1e-6) continue;
    const ArModel m = fit_ar(ObservedSeries(x, 1.0), p);
    for (int k = 0; k < p; ++k)
      CHECK((m.coeffs[static_cast<std::size_t>(k)] - C[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("property: forecasts are shift-equivariant") {
  NormalStream rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector v = gen::normal_vector(rng, 30);
    const ArModel m = fit_ar(scalar(v), 2);
    const std::int64_t shift = gen::uniform_int(rng, -50, 50);
    const ObservedSeries a = forecast_ar(m, scalar(v), 10);
    const ObservedSeries b = forecast_ar(m, scalar(v, shift), 10);
    CHECK(a.values() == b.values());
    CHECK(b.start_index() == a.start_index() + shift);
  }
}

TEST_CASE("companion matrix stacks the lags") {
  ArModel m;
  m.order = 2;
  m.dim = 1;
  m.coeffs = {Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, -0.25)};
  const Matrix c = m.companion();
  CHECK(c.rows() == 2);
  CHECK(c(0, 0) == 0.5);
  CHECK(c(0, 1) == -0.25);
  CHECK(c(1, 0) == 1.0);
  CHECK(c(1, 1) == 0.0);
}

TEST_CASE("property: ARS with slack pinned to the lag reproduces the AR(2) loss") {
  NormalStream rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = gen::uniform_int(rng, 8, 40);
    const Vector v = gen::normal_vector(rng, n);
    const ArModel ar2 = fit_ar(scalar(v), 2);
    // Slack at j is z_{j-1}; the first slot has no lag and is a free value.
    Matrix slack(n, 1);
    slack(0, 0) = 0.0;
    slack.bottomRows(n - 1) = v.head(n - 1);
    const ObservedSeries z = scalar(v);
    const ObservedSeries z_tail = z.slice(1, n - 1);
    const double pinned = ars_objective(z_tail, flatten_slack(slack.bottomRows(n - 1)), 1);
    // The slack rows of the ARS loss are exactly matched by the shift.
    CHECK(std::abs(pinned - ar2.residual_sum) < 1e-9 * (1.0 + ar2.residual_sum));
  }
}

TEST_CASE("fit_ar input checks") {
  Vector v(3);
  v << 1, 2, 3;
  CHECK_THROWS_AS(fit_ar(scalar(v), 0), InvalidArgument);
  CHECK_THROWS_AS(fit_ar(scalar(v), 3), InvalidArgument);
}
