#include "ars/reproduce.hpp"

#include "ars/svg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

namespace ars {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::string sigma_text(double sigma) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << sigma;
  return os.str();
}

// Pass when the mean relative error at every listed horizon is below `bound`.
EnvelopeCheck bound_check(const ExperimentReport& report, const std::string& system, double sigma, int max_k,
                          double bound) {
  EnvelopeCheck check;
  std::ostringstream name;
  name << system << " sigma=" << sigma_text(sigma) << ' ' << (max_k >= 1000 ? std::string("all k") : "k<=" + std::to_string(max_k))
       << " mean < " << bound;
  check.name = name.str();
  check.passed = true;
  std::ostringstream detail;
  for (int k : report.config.horizons) {
    if (k > max_k) continue;
    const HorizonSummary& s = report.summary(sigma, k);
    const bool ok = std::isfinite(s.mean) && s.mean < bound && s.count > 0;
    check.passed = check.passed && ok;
    detail << " k=" << k << ':' << sci(s.mean);
  }
  check.detail = detail.str().substr(1);
  return check;
}

EnvelopeCheck at_check(const ExperimentReport& report, const std::string& system, double sigma, int k, double bound) {
  EnvelopeCheck check = bound_check(report, system, sigma, k, bound);
  const HorizonSummary& s = report.summary(sigma, k);
  check.name = system + " sigma=" + sigma_text(sigma) + " k=" + std::to_string(k) + " mean < " + sigma_text(bound);
  check.passed = std::isfinite(s.mean) && s.mean < bound && s.count > 0;
  check.detail = sci(s.mean) + " ± " + sci(s.sd);
  return check;
}

constexpr int kAll = 1 << 20;

void write_file(const std::filesystem::path& path, const std::string& text, std::vector<std::string>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
  files.push_back(path.string());
}

std::string forecast_figure(const std::string& title, const InstanceResult& inst) {
  if (!inst.ok) return render_line_chart(title + " (fit failed: " + inst.error + ")", {});
  std::vector<PlotLine> lines;
  lines.push_back(plot_line(inst.train, 0, "observed x1", "#555555"));
  lines.push_back(plot_line(inst.truth, 0, "truth", "#000000"));
  lines.push_back(plot_line(inst.ar_forecast, 0, "AR(1)", "#1f77b4", true));
  lines.push_back(plot_line(inst.ars_forecast, 0, "ARS", "#d62728"));
  return render_line_chart(title, lines);
}

std::string summary_text(const ReproduceResult& result) {
  std::ostringstream os;
  for (const auto& c : result.checks) os << (c.passed ? "PASS " : "FAIL ") << c.name << " | " << c.detail << '\n';
  return os.str();
}

}  // namespace

std::vector<EnvelopeCheck> circular_envelope(const ExperimentReport& report) {
  return {bound_check(report, "circular", 0.0, kAll, 1e-3), bound_check(report, "circular", 0.01, kAll, 1.0),
          at_check(report, "circular", 0.01, 5, 0.7)};
}

std::vector<EnvelopeCheck> lorenz_envelope(const ExperimentReport& report) {
  return {bound_check(report, "lorenz", 0.0, 15, 5e-2), bound_check(report, "lorenz", 0.0, kAll, 1.0),
          bound_check(report, "lorenz", 0.01, kAll, 1.0), at_check(report, "lorenz", 0.01, 5, 0.1)};
}

ResidualStudy lorenz_residual_study(double dt, int points, double t_first, double t_last) {
  std::vector<double> times = linspace(t_first, t_last, points);
  for (double& t : times) t = static_cast<double>(std::llround(t / dt)) * dt;
  ResidualStudy study;
  const LorenzParams params;
  study.coarse = lorenz_ode_residual(dt, params, times);
  study.fine = lorenz_ode_residual(dt / 2.0, params, times);
  std::vector<double> shrink;
  for (std::size_t i = 0; i < study.coarse.points.size(); ++i) {
    const auto& c = study.coarse.points[i];
    const auto& f = study.fine.points[i];
    study.worst_relative = std::max(study.worst_relative, std::abs(c.residual) / c.max_term);
    study.worst_eliminated_relative =
        std::max(study.worst_eliminated_relative, std::abs(c.eliminated_residual) / c.eliminated_max_term);
    if (std::abs(c.residual) > 10.0 * c.roundoff_floor && std::abs(f.residual) > 0.0)
      shrink.push_back(std::abs(c.residual) / std::abs(f.residual));
  }
  study.points_above_floor = static_cast<int>(shrink.size());
  if (!shrink.empty()) {
    std::sort(shrink.begin(), shrink.end());
    const std::size_t m = shrink.size() / 2;
    study.median_shrink = shrink.size() % 2 ? shrink[m] : 0.5 * (shrink[m - 1] + shrink[m]);
  }
  return study;
}

std::vector<EnvelopeCheck> residual_envelope(const ResidualStudy& study) {
  EnvelopeCheck small{"stated ODE residual < 1e-3 of largest term", study.worst_relative < 1e-3,
                      "worst ratio " + sci(study.worst_relative)};
  // Discretization error is O(dt^2); halving dt must at least halve it.
  EnvelopeCheck shrinks{"stated ODE residual shrinks >= 2x when dt halves", study.median_shrink >= 2.0,
                        "median shrink " + sci(study.median_shrink) + " over " +
                            std::to_string(study.points_above_floor) + " points above roundoff"};
  return {small, shrinks};
}

bool ReproduceResult::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const EnvelopeCheck& c) { return c.passed; });
}

ReproduceResult reproduce(const std::string& out_dir, std::uint64_t seed, Execution execution) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  ReproduceResult result;

  result.circular = run_experiment(ExperimentConfig::circular_defaults(seed), execution);
  write_file(dir / "table1.md", render_markdown_table(result.circular, "Relative error, circular motion"),
             result.files);
  {
    std::ostringstream csv;
    write_report_csv(csv, result.circular);
    write_file(dir / "circular_raw.csv", csv.str(), result.files);
  }

  result.lorenz = run_experiment(ExperimentConfig::lorenz_defaults(seed), execution);
  write_file(dir / "table2.md", render_markdown_table(result.lorenz, "Relative error, Lorenz map"), result.files);
  {
    std::ostringstream csv;
    write_report_csv(csv, result.lorenz);
    write_file(dir / "lorenz_raw.csv", csv.str(), result.files);
  }

  const Figure1Data fig1 = figure1_demo(seed);
  {
    std::vector<PlotLine> lines{plot_line(fig1.train, 0, "observed", "#555555"),
                                plot_line(fig1.truth, 0, "truth", "#000000"),
                                plot_line(fig1.ar_forecast, 0, "AR(1)", "#1f77b4", true),
                                plot_line(fig1.ars_forecast, 0, "ARS", "#d62728")};
    write_file(dir / "figure1.svg", render_line_chart("Circular motion, 30 points, 30-step forecasts", lines),
               result.files);
    std::ostringstream csv;
    csv << "t,truth,ar,ars\n";
    for (Index j = 0; j < fig1.truth.length(); ++j)
      csv << format_double(fig1.truth.time(j)) << ',' << format_double(fig1.truth.values()(j, 0)) << ','
          << format_double(fig1.ar_forecast.values()(j, 0)) << ',' << format_double(fig1.ars_forecast.values()(j, 0))
          << '\n';
    write_file(dir / "figure1.csv", csv.str(), result.files);
  }
  write_file(dir / "figure3.svg", forecast_figure("Circular motion, sigma=0", result.circular.instance(0.0, 0)),
             result.files);
  write_file(dir / "figure4.svg", forecast_figure("Circular motion, sigma=0.01", result.circular.instance(0.01, 0)),
             result.files);
  write_file(dir / "figure5.svg", forecast_figure("Lorenz map, sigma=0", result.lorenz.instance(0.0, 0)),
             result.files);
  write_file(dir / "figure6.svg", forecast_figure("Lorenz map, sigma=0.01", result.lorenz.instance(0.01, 0)),
             result.files);

  result.residual = lorenz_residual_study();
  {
    std::ostringstream csv;
    write_residual_csv(csv, result.residual.coarse);
    std::ostringstream fine;
    write_residual_csv(fine, result.residual.fine);
    const std::string rest = fine.str();
    csv << rest.substr(rest.find('\n') + 1);
    write_file(dir / "appendix_c_residuals.csv", csv.str(), result.files);
  }

  for (auto& c : circular_envelope(result.circular)) result.checks.push_back(std::move(c));
  for (auto& c : lorenz_envelope(result.lorenz)) result.checks.push_back(std::move(c));
  for (auto& c : residual_envelope(result.residual)) result.checks.push_back(std::move(c));
  write_file(dir / "summary.txt", summary_text(result), result.files);
  return result;
}

}  // namespace ars
