#pragma once

#include "perchsim/supervisor.hpp"
#include "perchsim/telemetry.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace perch {

/// Per-mode value, indexed by Mode.
using PerMode = std::array<double, 4>;

inline std::size_t index(Mode m) { return static_cast<std::size_t>(m); }

struct Metrics {
  bool perch_achieved = false;
  std::optional<double> perch_time;    ///< first attach (s)
  bool unperch_achieved = false;
  std::optional<double> unperch_time;  ///< first release after the perch (s)

  /// Largest altitude loss after release, relative to the release altitude (m).
  double z_drop = 0.0;
  /// Closest magnet-face-to-wall distance once the vehicle stops retreating
  /// after release (m, negative = re-contact). Empty without a release.
  std::optional<double> min_clearance;
  /// Settling time after release: from release to the first tick after
  /// which the position error stays below the hover tolerance (s).
  std::optional<double> settling_time;

  PerMode saturation_fraction{};
  PerMode max_attitude_error{};
  std::array<std::size_t, 4> mode_ticks{};

  std::string failure;  ///< empty for a completed run
};

/// Position-error bound used for the settling time (m).
inline constexpr double kHoverTolerance = 0.02;

/// Throws std::invalid_argument on empty logs.
Metrics computeMetrics(const std::vector<LogRecord>& logs);

/// Named scalar view used by reports; empty optionals map to NaN.
std::vector<std::pair<std::string, double>> scalarMetrics(const Metrics& m);

}  // namespace perch
