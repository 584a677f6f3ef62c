// Command-line front end: run, ablate, verify, print-schema.

#include "acceptance.hpp"
#include "perchsim/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitSchema = 2;
constexpr int kExitNumerical = 3;

struct RunOptions {
  std::string scenario;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<std::string> variant;
};

void addRunOptions(CLI::App* cmd, RunOptions& o, bool with_variant)
{
  cmd->add_option("scenario,--scenario", o.scenario, "scenario file (defaults when omitted)");
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", o.seed, "noise seed override");
  cmd->add_option("--dt", o.dt, "time step override (s)");
  if (with_variant) cmd->add_option("--variant", o.variant, "controller variant override");
}

perch::ScenarioConfig loadConfig(const RunOptions& o)
{
  perch::ScenarioConfig cfg = o.scenario.empty() ? perch::ScenarioConfig{}
                                                 : perch::loadScenario(o.scenario);
  if (o.seed) cfg.seed = *o.seed;
  if (o.dt) cfg.dt = *o.dt;
  if (o.variant) {
    try {
      cfg.variant = perch::parseVariant(*o.variant);
    } catch (const std::invalid_argument& e) {
      throw perch::ScenarioError(e.what());
    }
  }
  cfg.validate();
  return cfg;
}

void summarize(const perch::RunResult& run)
{
  std::cout << perch::toString(run.config.variant) << ": "
            << perch::toJson(run.metrics).dump() << '\n';
}

int exitFor(const perch::RunResult& run)
{
  return run.status == perch::RunStatus::NumericalAbort ? kExitNumerical : kExitOk;
}

int cmdRun(const RunOptions& o)
{
  const perch::RunResult run = perch::runScenario(loadConfig(o));
  perch::writeRunOutputs(o.out, run);
  summarize(run);
  return exitFor(run);
}

int cmdAblate(const RunOptions& o)
{
  const perch::ScenarioConfig base = loadConfig(o);
  std::vector<std::future<perch::RunResult>> jobs;
  for (perch::Variant v : {perch::Variant::Proposed, perch::Variant::NoTransitionsRho0,
                           perch::Variant::NoTransitionsRho05, perch::Variant::NoFreeze}) {
    perch::ScenarioConfig cfg = base;
    cfg.variant = v;
    jobs.push_back(std::async(std::launch::async, [cfg] { return perch::runScenario(cfg); }));
  }
  std::vector<perch::RunResult> runs;
  for (auto& j : jobs) runs.push_back(j.get());

  const std::filesystem::path out(o.out);
  int code = kExitOk;
  for (const auto& run : runs) {
    perch::writeRunOutputs(out / std::string(perch::toString(run.config.variant)), run);
    summarize(run);
    if (exitFor(run) != kExitOk) code = exitFor(run);
  }
  const nlohmann::json report =
      perch::ablationReport(runs.front(), std::vector<perch::RunResult>(runs.begin() + 1, runs.end()));
  std::ofstream(out / "comparison.json") << report.dump(2) << '\n';
  for (const auto& cmp : report["comparisons"])
    for (const auto& check : cmp["checks"])
      std::cout << (check["passed"].get<bool>() ? "PASS " : "FAIL ")
                << cmp["b"].get<std::string>() << ": " << check["check"].get<std::string>()
                << '\n';
  if (code == kExitOk && !report["passed"].get<bool>()) code = kExitFailed;
  return code;
}

int cmdVerify()
{
  const auto results = perch::acceptance::runAll();
  perch::acceptance::print(std::cout, results);
  return perch::acceptance::allPassed(results) ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Perching tiltrotor simulator"};
  app.require_subcommand(1);

  RunOptions run_opts, ablate_opts;
  auto* run = app.add_subcommand("run", "simulate one scenario, write log.csv, events.csv, metrics.json");
  addRunOptions(run, run_opts, true);
  auto* ablate = app.add_subcommand("ablate", "run all controller variants and compare them");
  addRunOptions(ablate, ablate_opts, false);
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  auto* schema = app.add_subcommand("print-schema", "list scenario keys");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmdRun(run_opts);
    if (*ablate) return cmdAblate(ablate_opts);
    if (*verify) return cmdVerify();
    if (*schema) {
      perch::printSchema(std::cout);
      return kExitOk;
    }
  } catch (const perch::ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitOk;
}
