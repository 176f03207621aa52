#include "ars/optimizer.hpp"

#include "ars/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace ars {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr int kMaxLineEvals = 40;

struct Trial {
  double step = 0.0;
  double value = std::numeric_limits<double>::infinity();
  double slope = 0.0;  // directional derivative
  Vector x;
  Vector grad;
};

class LineSearch {
 public:
  LineSearch(const ValueGradientFn& fg, const Vector& x, const Vector& dir, double f0, double slope0)
      : fg_(fg), x_(x), dir_(dir), f0_(f0), slope0_(slope0) {}

  // Returns a strong-Wolfe point, or the best Armijo point seen if the search
  // stalls, or nothing. An accepted point is refined by one secant step on the
  // directional derivative, which is exact on quadratics.
  std::optional<Trial> run() {
    std::optional<Trial> found = search();
    if (!found || !(found->slope != slope0_)) return found;
    const double step = found->step * slope0_ / (slope0_ - found->slope);
    if (!(step > 0.0) || !std::isfinite(step) || std::abs(step - found->step) <= 1e-10 * found->step) return found;
    Trial refined = evaluate(step);
    if (armijo(refined) && refined.value < found->value && std::abs(refined.slope) <= -kCurvature * slope0_)
      return refined;
    return found;
  }

 private:
  std::optional<Trial> search() {
    Trial prev;
    prev.step = 0.0;
    prev.value = f0_;
    prev.slope = slope0_;
    double step = 1.0;
    for (int i = 0; i < kMaxLineEvals; ++i) {
      Trial cur = evaluate(step);
      if (!armijo(cur) || (i > 0 && cur.value >= prev.value)) return zoom(prev, cur);
      if (std::abs(cur.slope) <= -kCurvature * slope0_) return cur;
      if (cur.slope >= 0.0) return zoom(cur, prev);
      prev = std::move(cur);
      step *= 2.0;
    }
    return best_;
  }

  bool armijo(const Trial& t) const { return std::isfinite(t.value) && t.value <= f0_ + kArmijo * t.step * slope0_; }

  Trial evaluate(double step) {
    Trial t;
    t.step = step;
    t.x = x_ + step * dir_;
    t.grad.resize(x_.size());
    t.value = fg_(t.x, t.grad);
    if (!std::isfinite(t.value) || !t.grad.allFinite()) {
      t.value = std::numeric_limits<double>::infinity();
      t.slope = 0.0;
      return t;
    }
    t.slope = t.grad.dot(dir_);
    if (armijo(t) && (!best_ || t.value < best_->value)) best_ = t;
    return t;
  }

  static double interpolate(const Trial& lo, const Trial& hi) {
    const double a = lo.step;
    const double b = hi.step;
    const double width = b - a;
    double candidate = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(hi.value)) {
      // Minimizer of the cubic matching value and slope at both ends.
      const double d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (a - b);
      const double disc = d1 * d1 - lo.slope * hi.slope;
      if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        candidate = b - (b - a) * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2);
      }
    }
    const double lower = std::min(a, b) + 0.1 * std::abs(width);
    const double upper = std::max(a, b) - 0.1 * std::abs(width);
    if (!std::isfinite(candidate) || candidate < lower || candidate > upper) candidate = 0.5 * (a + b);
    return candidate;
  }

  std::optional<Trial> zoom(Trial lo, Trial hi) {
    for (int i = 0; i < kMaxLineEvals; ++i) {
      if (std::abs(hi.step - lo.step) <= 1e-16 * std::max(1.0, std::abs(lo.step))) break;
      Trial cur = evaluate(interpolate(lo, hi));
      if (!armijo(cur) || cur.value >= lo.value) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -kCurvature * slope0_) return cur;
        if (cur.slope * (hi.step - lo.step) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    return best_;
  }

  const ValueGradientFn& fg_;
  const Vector& x_;
  const Vector& dir_;
  double f0_;
  double slope0_;
  std::optional<Trial> best_;
};

OptimResult run_bfgs(const ValueGradientFn& fg, const Vector& x0, const OptimSettings& s) {
  const Index n = x0.size();
  OptimResult result;
  result.argmin = x0;
  Vector g(n);
  double f = fg(x0, g);
  result.loss = f;
  if (!std::isfinite(f) || !g.allFinite()) return result;

  Matrix H = Matrix::Identity(n, n);
  bool identity = true;
  bool scaled = false;
  Vector x = x0;
  for (int iter = 0; iter < s.max_iters; ++iter) {
    if (g.norm() < s.grad_tol) {
      result.converged = true;
      break;
    }
    Vector dir = -H * g;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      H.setIdentity();
      identity = true;
      dir = -g;
      slope = -g.squaredNorm();
    }
    std::optional<Trial> step = LineSearch(fg, x, dir, f, slope).run();
    if (!step && !identity) {
      H.setIdentity();
      identity = true;
      dir = -g;
      slope = -g.squaredNorm();
      step = LineSearch(fg, x, dir, f, slope).run();
    }
    if (!step) break;  // best-so-far, not converged

    const Vector sk = step->x - x;
    const Vector yk = step->grad - g;
    const double ys = yk.dot(sk);
    if (ys > 1e-300 && std::isfinite(ys)) {
      if (!scaled) {
        H *= ys / yk.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / ys;
      const Vector Hy = H * yk;
      const double yHy = yk.dot(Hy);
      H += ((1.0 + rho * yHy) * rho) * (sk * sk.transpose()) - rho * (Hy * sk.transpose() + sk * Hy.transpose());
      identity = false;
    }

    const double decrease = f - step->value;
    x = std::move(step->x);
    g = std::move(step->grad);
    f = step->value;
    result.iterations = iter + 1;
    result.argmin = x;
    result.loss = f;
    if (std::abs(decrease) < s.loss_tol * (std::abs(f + decrease) + s.loss_tol) || g.norm() < s.grad_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace

OptimResult minimize(const ValueGradientFn& fg, const Vector& x0, const OptimSettings& settings) {
  if (settings.max_iters < 0 || settings.restarts < 0) throw InvalidArgument("optimizer counts must be non-negative");
  if (!(settings.grad_tol > 0.0) || !(settings.loss_tol > 0.0))
    throw InvalidArgument("optimizer tolerances must be positive");
  Vector g0(x0.size());
  const double f0 = fg(x0, g0);
  if (!std::isfinite(f0) || !g0.allFinite()) throw InvalidArgument("objective or gradient is not finite at x0");

  OptimResult best = run_bfgs(fg, x0, settings);
  best.restart_index = 0;
  for (int r = 1; r <= settings.restarts; ++r) {
    NormalStream rng(mix_seed(settings.seed, static_cast<std::uint64_t>(r)));
    Vector start = x0;
    for (Index i = 0; i < start.size(); ++i) start[i] += settings.jitter * rng.standard_normal();
    Vector gs(start.size());
    const double fs = fg(start, gs);
    if (!std::isfinite(fs) || !gs.allFinite()) continue;
    OptimResult candidate = run_bfgs(fg, start, settings);
    if (candidate.loss < best.loss) {
      best = std::move(candidate);
      best.restart_index = r;
    }
  }
  return best;
}

OptimResult minimize(const ObjectiveFn& objective, const GradientFn& gradient, const Vector& x0,
                     const OptimSettings& settings) {
  const ValueGradientFn fg = [&](const Vector& x, Vector& g) {
    g = gradient(x);
    return objective(x);
  };
  return minimize(fg, x0, settings);
}

double check_gradient(const ObjectiveFn& objective, const GradientFn& gradient, const Vector& x, double fd_step) {
  if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
  const Vector analytic = gradient(x);
  Vector fd(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + fd_step;
    const double up = objective(probe);
    probe[i] = x[i] - fd_step;
    const double down = objective(probe);
    probe[i] = x[i];
    fd[i] = (up - down) / (2.0 * fd_step);
  }
  const double scale = std::max(analytic.lpNorm<Eigen::Infinity>(), fd.lpNorm<Eigen::Infinity>());
  const double error = (analytic - fd).lpNorm<Eigen::Infinity>();
  return scale > 0.0 ? error / scale : error;
}

}  // namespace ars
