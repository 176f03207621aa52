#pragma once

#include "ars/eval.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ars {

struct EnvelopeCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Circular-motion envelope: sigma 0 below 1e-3 at every horizon; sigma
/// 0.01 below 1 at every horizon and below 0.7 at k = 5.
std::vector<EnvelopeCheck> circular_envelope(const ExperimentReport& report);
/// Lorenz envelope: sigma 0 below 5e-2 for k <= 15 and below 1 throughout;
/// sigma 0.01 below 1 throughout and below 0.1 at k = 5.
std::vector<EnvelopeCheck> lorenz_envelope(const ExperimentReport& report);

struct ResidualStudy {
  OdeResidualReport coarse;  // dt
  OdeResidualReport fine;    // dt / 2
  double worst_relative = 0.0;       // max over points of |residual| / max_term
  double median_shrink = 0.0;        // median of |res(dt)| / |res(dt/2)| above the roundoff floor
  double worst_eliminated_relative = 0.0;
  int points_above_floor = 0;
};

/// Sample times are snapped to the dt grid so both resolutions see the same t.
ResidualStudy lorenz_residual_study(double dt = 1e-4, int points = 50, double t_first = 1.0, double t_last = 10.0);
std::vector<EnvelopeCheck> residual_envelope(const ResidualStudy& study);

struct ReproduceResult {
  ExperimentReport circular;
  ExperimentReport lorenz;
  ResidualStudy residual;
  std::vector<EnvelopeCheck> checks;
  std::vector<std::string> files;

  bool all_passed() const;
};

/// Runs both experiments and the residual study, writes tables, raw CSVs,
/// SVG figures and a summary into out_dir (created if missing).
ReproduceResult reproduce(const std::string& out_dir, std::uint64_t seed = 0,
                          Execution execution = Execution::parallel);

}  // namespace ars
