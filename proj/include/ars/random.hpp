#pragma once

#include <cstdint>
#include <random>

namespace ars {

/// Seeded normal sampler. mt19937_64's output sequence is fixed by the
/// standard; the normal transform is done here (Box-Muller) so samples are
/// bit-identical across standard libraries.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // (0, 1)
  double standard_normal();
  double normal(double mean, double sd) { return mean + sd * standard_normal(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Decorrelates derived seeds (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ars
