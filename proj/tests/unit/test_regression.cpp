#include "ars/regression.hpp"

#include "gen.hpp"

#include <doctest.h>

using namespace ars;

TEST_CASE("design shift structure") {
  Matrix x(2, 1);
  x << 3, 5;
  const DesignPair p = build_design(x);
  CHECK(p.D.rows() == 1);
  CHECK(p.D(0, 0) == 3);
  CHECK(p.D_plus(0, 0) == 5);

  NormalStream rng(1);
  const Matrix y = gen::normal_matrix(rng, 4, 2);
  const DesignPair q = build_design(y);
  CHECK(q.D.rows() == 3);
  CHECK(q.D.bottomRows(2) == q.D_plus.topRows(2));

  Matrix slack(100, 1);
  slack.setZero();
  Matrix z = Matrix::Random(100, 1);
  const DesignPair c = build_design(CompletedSeries(TimeSeries(z, 0.05), slack));
  CHECK(c.D.rows() == 99);
  CHECK(c.D.cols() == 2);
  CHECK(c.D_plus.rows() == 99);
  CHECK_THROWS_AS(build_design(Matrix::Zero(1, 2)), InvalidArgument);
}

TEST_CASE("ols on small exact designs") {
  DesignPair p{Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
  p.D_plus << 2, 0, 0, 3;
  const Matrix M = ols_fit(p);
  CHECK((M - p.D_plus).norm() < 1e-14);
  CHECK((hat_matrix(p) - Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK(profiled_loss(p) < 1e-20);
}

TEST_CASE("ols recovers a rotation") {
  const Matrix R = gen::rotation(0.37);
  const Matrix x = gen::iterate(R, Vector::Ones(2), 30);
  const Matrix B = ols_fit(build_design(x)).transpose();
  CHECK((B - R).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rank deficient design") {
  NormalStream rng(3);
  Matrix D(6, 2);
  D.col(0) = gen::normal_vector(rng, 6);
  D.col(1) = D.col(0);
  const Matrix T = gen::normal_matrix(rng, 6, 2);
  CHECK_THROWS_AS(ols_fit(D, T), SingularMatrix);
  const LeastSquaresSolution s = solve_least_squares(D, T, 0.0, RidgePolicy::escalate);
  CHECK(s.ridge_used > 0.0);
  CHECK(s.coefficients.allFinite());
}

TEST_CASE("property: hat matrix is a symmetric projector of rank d") {
  NormalStream rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Index rows = gen::uniform_int(rng, 4, 30);
    const Index cols = gen::uniform_int(rng, 1, std::min<int>(5, static_cast<int>(rows) - 1));
    const DesignPair p{gen::normal_matrix(rng, rows, cols), gen::normal_matrix(rng, rows, cols)};
    const Matrix H = hat_matrix(p);
    CHECK((H * H - H).norm() < 1e-10);
    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(H.trace() - static_cast<double>(cols)) < 1e-10);
  }
}

TEST_CASE("property: profiled loss equals the brute-force residual") {
  NormalStream rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Index rows = gen::uniform_int(rng, 4, 25);
    const Index cols = gen::uniform_int(rng, 1, 3);
    const DesignPair p{gen::normal_matrix(rng, rows, cols), gen::normal_matrix(rng, rows, cols)};
    // Oracle: normal equations solved by LDLT, trace form via the explicit projector.
    const Matrix M = (p.D.transpose() * p.D).ldlt().solve(p.D.transpose() * p.D_plus);
    const double brute = (p.D_plus - p.D * M).squaredNorm();
    const Matrix I = Matrix::Identity(rows, rows);
    const double trace_form = (p.D_plus.transpose() * (I - hat_matrix(p)) * p.D_plus).trace();
    const double loss = profiled_loss(p);
    CHECK(std::abs(loss - brute) < 1e-10 * (1.0 + brute));
    CHECK(std::abs(loss - trace_form) < 1e-10 * (1.0 + brute));
    CHECK((ols_fit(p) - M).cwiseAbs().maxCoeff() < 1e-8);
    // Residual orthogonal to the column space.
    CHECK((p.D.transpose() * (p.D_plus - p.D * ols_fit(p))).norm() < 1e-8 * p.D_plus.norm());
  }
}

TEST_CASE("exactly linear data has zero profiled loss") {
  NormalStream rng(5);
  const Matrix D = gen::normal_matrix(rng, 20, 3);
  const Matrix M0 = gen::normal_matrix(rng, 3, 3);
  CHECK(profiled_loss({D, D * M0}) < 1e-10);
}

TEST_CASE("property: ridge never lowers the profiled loss") {
  NormalStream rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const DesignPair p{gen::normal_matrix(rng, 12, 3), gen::normal_matrix(rng, 12, 3)};
    double previous = profiled_loss(p);
    for (double ridge : {1e-6, 1e-3, 0.1, 1.0, 10.0}) {
      const double value = profiled_loss(p, ridge);
      CHECK(value >= previous - 1e-12);
      previous = value;
    }
  }
}

TEST_CASE("ridge solution matches the penalized normal equations") {
  NormalStream rng(14);
  const DesignPair p{gen::normal_matrix(rng, 15, 3), gen::normal_matrix(rng, 15, 3)};
  const double ridge = 0.7;
  const Matrix expected =
      (p.D.transpose() * p.D + ridge * Matrix::Identity(3, 3)).ldlt().solve(p.D.transpose() * p.D_plus);
  CHECK((ols_fit(p, ridge) - expected).cwiseAbs().maxCoeff() < 1e-12);
  const Matrix H = p.D * (p.D.transpose() * p.D + ridge * Matrix::Identity(3, 3)).ldlt().solve(p.D.transpose());
  CHECK((hat_matrix(p, ridge) - H).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("diagnostics") {
  const DesignPair p{Matrix::Identity(3, 3), Matrix::Identity(3, 3)};
  const LeastSquaresSolution s = solve_least_squares(p.D, p.D_plus, 0.0);
  const FitDiagnostics d = diagnose(p.D, s);
  CHECK(d.condition_hint == doctest::Approx(1.0));
  CHECK(d.residual_sum < 1e-20);
  CHECK(d.ridge_used == 0.0);
}
