#include "ars/ars_model.hpp"

#include "ars/dynamics.hpp"
#include "gen.hpp"

#include <doctest.h>

using namespace ars;

TEST_CASE("interaction map layout") {
  Vector one(1);
  one << 5;
  CHECK(interaction_map(one) == one);

  const Vector y = interaction_map(Eigen::Vector3d(1, 2, 3));
  Vector expected(6);
  expected << 1, 2, 3, 2, 3, 6;
  CHECK(y == expected);

  CHECK(interaction_map(Vector::Ones(4)).size() == 10);
  CHECK(interaction_dim(4) == 10);

  NormalStream rng(1);
  const Matrix states = gen::normal_matrix(rng, 5, 3);
  const Matrix design = interaction_design(states);
  for (Index j = 0; j < 5; ++j) CHECK((design.row(j).transpose() - interaction_map(states.row(j).transpose())).norm() == 0.0);
}

TEST_CASE("fully observed Lorenz data returns the Taylor matrix") {
  const Trajectory lor = gen_lorenz(100);
  const ExtArsModel m = fit_ars_interactions(lor, 0, {}, {});
  CHECK(!m.underdetermined);
  CHECK((m.E - lorenz_taylor_matrix({})).cwiseAbs().maxCoeff() < 1e-8);

  const Trajectory longer = gen_lorenz(125);
  const ObservedSeries f = forecast_ars_interactions(m, 25);
  CHECK((f.values() - longer.values().bottomRows(25)).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("linear data leaves interaction coefficients at zero") {
  const Matrix R = gen::rotation(0.3, 0.98);
  const ObservedSeries z(gen::iterate(R, Eigen::Vector2d(1.0, -0.5), 40), 1.0);
  const ExtArsModel m = fit_ars_interactions(z, 0, {}, {});
  CHECK(m.E.rightCols(1).norm() < 1e-6);
  CHECK((m.E.leftCols(2) - R).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("scalar model coincides with the linear one") {
  NormalStream rng(2);
  const ObservedSeries z(gen::normal_matrix(rng, 20, 1), 1.0);
  const ExtArsModel e = fit_ars_interactions(z, 0, {}, {});
  const ArsModel a = fit_ars(z, 0, {}, {});
  CHECK(std::abs(e.final_loss - a.final_loss) < 1e-10);
}

TEST_CASE("property: interaction gradient matches central differences") {
  NormalStream rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Index r = gen::uniform_int(rng, 1, 2);
    const Index n = gen::uniform_int(rng, 10, 20);
    const ObservedSeries z(gen::normal_matrix(rng, n, r), 1.0);
    const Vector x = gen::normal_vector(rng, n);
    const double err = check_gradient([&](const Vector& v) { return ars_interactions_objective(z, v, 1); },
                                      [&](const Vector& v) { return ars_interactions_gradient(z, v, 1); }, x, 1e-6);
    CHECK(err < 1e-5);
  }
}

TEST_CASE("extended forecasts") {
  NormalStream rng(4);
  const ObservedSeries z(gen::normal_matrix(rng, 12, 1), 1.0);
  ExtArsModel m = ars_interactions_at_slack(z, gen::normal_matrix(rng, 12, 1));
  CHECK(forecast_ars_interactions(m, 0).length() == 0);
  m.E = Matrix::Zero(2, 3);
  m.E.leftCols(2) = Matrix::Identity(2, 2);
  const ObservedSeries f = forecast_ars_interactions(m, 6);
  for (Index k = 0; k < 6; ++k) CHECK(f.values()(k, 0) == z.values()(11, 0));

  m.E(0, 2) = 10.0;  // x1 x2 term blows up
  m.completed.slack.setConstant(100.0);
  CHECK_THROWS_AS(forecast_ars_interactions(m, 200), NumericOverflow);
}

TEST_CASE("short series are underdetermined") {
  NormalStream rng(5);
  const ObservedSeries z(gen::normal_matrix(rng, 5, 2), 1.0);
  const ExtArsModel m = ars_interactions_at_slack(z, gen::normal_matrix(rng, 5, 1));
  CHECK(m.underdetermined);
}
