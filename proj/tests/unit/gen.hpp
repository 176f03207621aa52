#pragma once

// Small seeded generators for property tests.

#include "ars/random.hpp"
#include "ars/series.hpp"

#include <cmath>

namespace gen {

inline ars::Matrix normal_matrix(ars::NormalStream& rng, ars::Index rows, ars::Index cols, double sd = 1.0) {
  ars::Matrix m(rows, cols);
  for (ars::Index i = 0; i < rows; ++i)
    for (ars::Index j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, sd);
  return m;
}

inline ars::Vector normal_vector(ars::NormalStream& rng, ars::Index n, double sd = 1.0) {
  return normal_matrix(rng, n, 1, sd).col(0);
}

inline int uniform_int(ars::NormalStream& rng, int lo, int hi) {
  return lo + static_cast<int>(std::floor(rng.uniform() * (hi - lo + 1)));
}

inline double uniform(ars::NormalStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

// 2x2 rotation by theta scaled by rho.
inline ars::Matrix rotation(double theta, double rho = 1.0) {
  ars::Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return rho * r;
}

// Rows x_0, B x_0, B^2 x_0, ...
inline ars::Matrix iterate(const ars::Matrix& B, const ars::Vector& x0, ars::Index n) {
  ars::Matrix out(n, x0.size());
  ars::Vector x = x0;
  for (ars::Index j = 0; j < n; ++j) {
    out.row(j) = x.transpose();
    x = (B * x).eval();
  }
  return out;
}

}  // namespace gen
