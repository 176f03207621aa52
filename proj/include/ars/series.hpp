#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace ars {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an iterated map or integrator produces a non-finite state.
struct NumericOverflow : std::runtime_error {
  NumericOverflow(const std::string& what, Index step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  Index step() const noexcept { return step_; }

 private:
  Index step_;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Uniformly sampled multivariate series. Row j holds the state at time
/// (start_index + j) * step.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(Matrix values, double step, std::int64_t start_index = 0);

  Index length() const { return values_.rows(); }
  Index dim() const { return values_.cols(); }
  double step() const { return step_; }
  std::int64_t start_index() const { return start_index_; }
  double time(Index j) const { return static_cast<double>(start_index_ + j) * step_; }

  const Matrix& values() const { return values_; }
  Vector state(Index j) const { return values_.row(j).transpose(); }

  /// Leading `cols` coordinates, same indexing.
  TimeSeries leading(Index cols) const;
  /// Rows [first, first + count), start index shifted accordingly.
  TimeSeries slice(Index first, Index count) const;

 private:
  Matrix values_{0, 1};
  double step_ = 1.0;
  std::int64_t start_index_ = 0;
};

using Trajectory = TimeSeries;
using ObservedSeries = TimeSeries;

/// CSV with header `t,x1,...,xd`; floats at 17 significant digits.
void write_csv(std::ostream& out, const TimeSeries& series);
/// Inverse of write_csv. Step is taken from the first two time stamps; a
/// single-row file falls back to `default_step`.
TimeSeries read_csv(std::istream& in, double default_step = 1.0);

std::string format_double(double value);

/// Observed coordinates paired with an imputed slack series; row j of
/// `state_matrix()` is the completed state (z(jh), slack_j).
struct CompletedSeries {
  ObservedSeries observed;
  Matrix slack;  // n x s_tilde, may have zero columns

  CompletedSeries(ObservedSeries obs, Matrix slack_values);

  Index length() const { return observed.length(); }
  Index observed_dims() const { return observed.dim(); }
  Index slack_dims() const { return slack.cols(); }
  Index dim() const { return observed.dim() + slack.cols(); }
  Matrix state_matrix() const;
};

}  // namespace ars
