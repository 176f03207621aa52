#include "ars/ar.hpp"
#include "ars/ars_model.hpp"
#include "ars/dynamics.hpp"
#include "ars/model_io.hpp"
#include "ars/reproduce.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

struct Globals {
  std::uint64_t seed = 0;
  double ridge = 0.0;
  std::string output;
  std::string format;
};

struct GenerateArgs {
  std::string system;
  ars::Index n = 100;
  double sigma = 0.0;
};

struct FitArgs {
  std::string input;
  std::string model = "ars";
  ars::Index r = 1;
  ars::Index s_tilde = 1;
  int p = 1;
  std::string init = "normal";
  int max_iters = 500;
  int restarts = 3;
};

struct ForecastArgs {
  std::string model;
  std::string history;
  ars::Index k = 0;
};

struct ReproduceArgs {
  std::string out_dir = "reproduce_out";
  bool serial = false;
};

// Thrown for bad flag combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + g.output + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + g.output + "'");
}

ars::TimeSeries load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return ars::read_csv(in);
  } catch (const ars::ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::string series_text(const Globals& g, const ars::TimeSeries& series) {
  std::ostringstream os;
  if (g.format == "json") {
    ars::Json doc = {{"h", series.step()}, {"t", ars::Json::array()}, {"x", ars::Json::array()}};
    for (ars::Index j = 0; j < series.length(); ++j) {
      doc["t"].push_back(series.time(j));
      ars::Json row = ars::Json::array();
      for (ars::Index c = 0; c < series.dim(); ++c) row.push_back(series.values()(j, c));
      doc["x"].push_back(std::move(row));
    }
    os << doc.dump(2) << '\n';
  } else {
    ars::write_csv(os, series);
  }
  return os.str();
}

int run_generate(const Globals& g, const GenerateArgs& a) {
  if (a.n < 1) throw UsageError("--n must be positive");
  if (!(a.sigma >= 0.0)) throw UsageError("--sigma must be non-negative");
  const ars::System system = ars::system_from_string(a.system);
  ars::Trajectory traj = system == ars::System::circular ? ars::gen_circular(a.n, 1) : ars::gen_lorenz(a.n);
  traj = ars::add_noise(traj, {a.sigma, g.seed});
  emit(g, series_text(g, traj));
  return 0;
}

int run_fit(const Globals& g, const FitArgs& a) {
  if (g.format == "csv") throw UsageError("fit writes a JSON model; --format csv is not supported");
  const ars::TimeSeries data = load_series(a.input);
  if (a.r < 1 || a.r > data.dim())
    throw UsageError("--r " + std::to_string(a.r) + " exceeds the " + std::to_string(data.dim()) +
                     " columns of the input");
  const ars::ObservedSeries observed = data.leading(a.r);

  ars::Json doc;
  if (a.model == "ar") {
    doc = ars::to_json(ars::fit_ar(observed, a.p, g.ridge));
  } else {
    ars::SlackInit init;
    init.seed = g.seed;
    if (a.init == "zeros") {
      init.mode = ars::SlackInitMode::zeros;
    } else if (a.init == "truth") {
      if (a.r + a.s_tilde > data.dim()) throw UsageError("--init truth needs r + s_tilde input columns");
      init.mode = ars::SlackInitMode::truth_perturbed;
      init.truth = data.values().middleCols(a.r, a.s_tilde);
    }
    ars::OptimSettings settings;
    settings.seed = g.seed;
    settings.max_iters = a.max_iters;
    settings.restarts = a.restarts;
    if (a.model == "ars") {
      doc = ars::to_json(ars::fit_ars(observed, a.s_tilde, init, settings, g.ridge));
    } else {
      doc = ars::to_json(ars::fit_ars_interactions(observed, a.s_tilde, init, settings, g.ridge));
    }
  }
  emit(g, doc.dump(2) + "\n");
  return 0;
}

int run_forecast(const Globals& g, const ForecastArgs& a) {
  if (a.k < 0) throw UsageError("--k must be non-negative");
  std::ifstream in(a.model);
  if (!in) throw std::runtime_error("cannot open '" + a.model + "'");
  ars::Json doc;
  try {
    doc = ars::Json::parse(in);
  } catch (const ars::Json::parse_error& e) {
    throw std::runtime_error(a.model + ": " + e.what());
  }
  const ars::TimeSeries history = load_series(a.history);
  ars::ObservedSeries forecast(ars::Matrix(0, history.dim()), history.step(), 0);
  try {
    forecast = ars::forecast_from_json(doc, history, a.k);
  } catch (const ars::InvalidArgument& e) {
    throw UsageError(e.what());
  }
  emit(g, series_text(g, forecast));
  return 0;
}

int run_reproduce(const Globals& g, const ReproduceArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const ars::ReproduceResult result =
      ars::reproduce(a.out_dir, g.seed, a.serial ? ars::Execution::serial : ars::Execution::parallel);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& c : result.checks) std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " | " << c.detail << '\n';
  std::cout << "wrote " << result.files.size() << " files to " << a.out_dir << " in " << seconds << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ARS forecasting: generate, fit, forecast and reproduce"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->envname("ARS_SEED");
  app.add_option("--ridge", g.ridge, "Ridge penalty for least-squares solves")->check(CLI::NonNegativeNumber);
  app.add_option("--output", g.output, "Output path (default: stdout)");
  app.add_option("--format", g.format, "Series output format")->check(CLI::IsMember({"csv", "json"}));

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic trajectory as CSV");
  generate->add_option("--system", gen.system, "circular or lorenz")
      ->required()
      ->check(CLI::IsMember({"circular", "lorenz"}));
  generate->add_option("--n", gen.n, "Number of time points");
  generate->add_option("--sigma", gen.sigma, "Observation noise standard deviation");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model to the first r columns of a CSV");
  fit_cmd->add_option("--input", fit.input, "Series CSV")->required();
  fit_cmd->add_option("--model", fit.model, "ar, ars or ars-int")->check(CLI::IsMember({"ar", "ars", "ars-int"}));
  fit_cmd->add_option("--r", fit.r, "Observed coordinates");
  fit_cmd->add_option("--s-tilde", fit.s_tilde, "Slack dimension")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--p", fit.p, "AR order")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--init", fit.init, "Slack start: normal, zeros or truth")
      ->check(CLI::IsMember({"normal", "zeros", "truth"}));
  fit_cmd->add_option("--max-iters", fit.max_iters, "BFGS iteration cap")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--restarts", fit.restarts, "Extra jittered BFGS runs")->check(CLI::NonNegativeNumber);

  ForecastArgs fc;
  auto* forecast = app.add_subcommand("forecast", "Forecast k steps past the end of a history CSV");
  forecast->add_option("--model", fc.model, "Model JSON")->required();
  forecast->add_option("--history", fc.history, "Observed series CSV")->required();
  forecast->add_option("--k", fc.k, "Forecast horizon")->required();

  ReproduceArgs rep;
  auto* reproduce = app.add_subcommand("reproduce", "Run the full experiment suite");
  reproduce->add_option("out_dir", rep.out_dir, "Output directory");
  reproduce->add_flag("--serial", rep.serial, "Run instances on one thread");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*generate) return run_generate(g, gen);
    if (*fit_cmd) return run_fit(g, fit);
    if (*forecast) return run_forecast(g, fc);
    return run_reproduce(g, rep);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
