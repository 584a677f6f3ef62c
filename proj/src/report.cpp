#include "perchsim/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace perch {

namespace {

nlohmann::json optionalNumber(const std::optional<double>& v)
{
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

nlohmann::json number(double v)
{
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::ofstream openOut(const std::filesystem::path& p)
{
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

}  // namespace

nlohmann::json toJson(const Metrics& m)
{
  nlohmann::json j;
  j["perch_achieved"] = m.perch_achieved;
  j["perch_time"] = optionalNumber(m.perch_time);
  j["unperch_achieved"] = m.unperch_achieved;
  j["unperch_time"] = optionalNumber(m.unperch_time);
  j["z_drop"] = number(m.z_drop);
  j["min_clearance"] = optionalNumber(m.min_clearance);
  j["settling_time"] = optionalNumber(m.settling_time);
  for (Mode mode : {Mode::F, Mode::F2P, Mode::P, Mode::P2F}) {
    const std::string name(toString(mode));
    j["saturation_fraction"][name] = m.saturation_fraction[index(mode)];
    j["max_eR"][name] = m.max_attitude_error[index(mode)];
    j["mode_ticks"][name] = m.mode_ticks[index(mode)];
  }
  j["failure"] = m.failure.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.failure);
  return j;
}

nlohmann::json toJson(const ComparisonReport& r)
{
  nlohmann::json j;
  j["a"] = r.name_a;
  j["b"] = r.name_b;
  j["deltas"] = nlohmann::json::array();
  for (const auto& d : r.deltas)
    j["deltas"].push_back(
        {{"metric", d.name}, {"a", number(d.a)}, {"b", number(d.b)}, {"delta", number(d.delta)}});
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"check", c.description}, {"passed", c.passed}});
  j["passed"] = r.allPassed();
  return j;
}

void writeRunOutputs(const std::filesystem::path& dir, const RunResult& run)
{
  std::filesystem::create_directories(dir);
  {
    auto out = openOut(dir / "log.csv");
    writeCsv(out, run.logs);
  }
  {
    auto out = openOut(dir / "events.csv");
    writeEventsCsv(out, run.events);
  }
  auto out = openOut(dir / "metrics.json");
  nlohmann::json j = toJson(run.metrics);
  j["variant"] = std::string(toString(run.config.variant));
  out << j.dump(2) << '\n';
}

nlohmann::json ablationReport(const RunResult& proposed, const std::vector<RunResult>& ablations)
{
  nlohmann::json j;
  j["proposed"] = toJson(proposed.metrics);
  j["comparisons"] = nlohmann::json::array();
  bool all = true;
  for (const auto& run : ablations) {
    const ComparisonReport rep = compareAblation(proposed, run);
    all = all && rep.allPassed();
    j["comparisons"].push_back(toJson(rep));
  }
  j["passed"] = all;
  return j;
}

}  // namespace perch
