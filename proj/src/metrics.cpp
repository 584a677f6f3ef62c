#include "perchsim/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace perch {

Metrics computeMetrics(const std::vector<LogRecord>& logs)
{
  if (logs.empty()) throw std::invalid_argument("computeMetrics: empty log");
  Metrics m;

  std::array<std::size_t, 4> saturated{};
  for (const auto& r : logs) {
    const auto k = index(r.mode);
    ++m.mode_ticks[k];
    if (r.saturated) ++saturated[k];
    m.max_attitude_error[k] = std::max(m.max_attitude_error[k], r.attitude_error);
  }
  for (std::size_t k = 0; k < 4; ++k)
    m.saturation_fraction[k] =
        m.mode_ticks[k] ? static_cast<double>(saturated[k]) / m.mode_ticks[k] : 0.0;

  std::size_t release = logs.size();
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (!m.perch_achieved && logs[i].attached) {
      m.perch_achieved = true;
      m.perch_time = logs[i].t;
    } else if (m.perch_achieved && !logs[i].attached) {
      m.unperch_achieved = true;
      m.unperch_time = logs[i].t;
      release = i;
      break;
    }
  }
  if (!m.unperch_achieved) return m;

  const double z_release = logs[release].position.z();
  for (std::size_t i = release; i < logs.size(); ++i)
    m.z_drop = std::max(m.z_drop, z_release - logs[i].position.z());

  // The release tick itself is logged at rest against the wall; the window
  // opens once the retreat stroke has ended (or never began).
  std::size_t window = logs.size();
  for (std::size_t i = release + 1; i < logs.size(); ++i) {
    if (logs[i].normal_speed <= 0.0) {
      window = i;
      break;
    }
  }
  if (window == logs.size()) window = logs.size() - 1;
  double clearance = std::numeric_limits<double>::infinity();
  for (std::size_t i = window; i < logs.size(); ++i) clearance = std::min(clearance, logs[i].gap);
  m.min_clearance = clearance;

  std::size_t last_bad = logs.size();
  for (std::size_t i = release; i < logs.size(); ++i)
    if (logs[i].position_error >= kHoverTolerance) last_bad = i;
  if (last_bad == logs.size())
    m.settling_time = 0.0;
  else if (last_bad + 1 < logs.size())
    m.settling_time = logs[last_bad + 1].t - logs[release].t;
  return m;
}

std::vector<std::pair<std::string, double>> scalarMetrics(const Metrics& m)
{
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<std::string, double>> out = {
      {"perch_achieved", m.perch_achieved ? 1.0 : 0.0},
      {"perch_time", m.perch_time.value_or(nan)},
      {"unperch_achieved", m.unperch_achieved ? 1.0 : 0.0},
      {"unperch_time", m.unperch_time.value_or(nan)},
      {"z_drop", m.z_drop},
      {"min_clearance", m.min_clearance.value_or(nan)},
      {"settling_time", m.settling_time.value_or(nan)},
  };
  for (Mode mode : {Mode::F, Mode::F2P, Mode::P, Mode::P2F}) {
    out.emplace_back("saturation_fraction_" + std::string(toString(mode)),
                     m.saturation_fraction[index(mode)]);
    out.emplace_back("max_eR_" + std::string(toString(mode)), m.max_attitude_error[index(mode)]);
  }
  return out;
}

}  // namespace perch
