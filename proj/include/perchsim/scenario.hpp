#pragma once

#include "perchsim/control.hpp"
#include "perchsim/planner.hpp"
#include "perchsim/supervisor.hpp"
#include "perchsim/vehicle_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace perch {

/// Malformed or inconsistent scenario description.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OperatorSignal { PerchRequest, UnperchRequest };

struct OperatorEvent {
  double time = 0.0;
  OperatorSignal signal = OperatorSignal::PerchRequest;
};

/// Disturbance active on [start, end).
struct DisturbanceWindow {
  double start = 0.0;
  double end = 0.0;
  Disturbances value;
};

struct ScenarioConfig {
  Variant variant = Variant::Proposed;
  double dt = 1e-3;
  double duration = 25.0;
  std::uint64_t seed = 0;

  VehicleParams vehicle;
  WallModel wall;
  Gains gains;
  double integral_bound = 0.5;
  SwitchConfig switching;
  PerchPlanConfig plan;
  Mat3 rejection_gain = 20.0 * Mat3::Identity();
  Mat3 contact_gain = 20.0 * Mat3::Identity();

  std::vector<OperatorEvent> events{{6.0, OperatorSignal::PerchRequest},
                                    {14.0, OperatorSignal::UnperchRequest}};
  std::vector<DisturbanceWindow> disturbances;

  double position_noise = 0.0;  ///< std dev of measured position (m)
  double velocity_noise = 0.0;  ///< std dev of measured velocity (m/s)

  /// Throws ScenarioError when any invariant is violated.
  void validate() const;

  Disturbances disturbanceAt(double t) const;
};

inline constexpr int kScenarioFormatVersion = 1;

/// Text format:
///
///   perchsim-scenario 1
///   # comment
///   key = value [value ...]
///
/// `event` and `disturbance` may repeat; every other key at most once.
/// Throws ScenarioError on any schema violation.
ScenarioConfig parseScenario(std::istream& in);
ScenarioConfig loadScenario(const std::string& path);

/// Inverse of parseScenario for the keys it understands.
void writeScenario(std::ostream& out, const ScenarioConfig& cfg);

/// Human-readable key table.
void printSchema(std::ostream& out);

}  // namespace perch
