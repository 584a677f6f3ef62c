#pragma once

#include "perchsim/allocation.hpp"
#include "perchsim/control.hpp"
#include "perchsim/estimation.hpp"
#include "perchsim/metrics.hpp"
#include "perchsim/planner.hpp"
#include "perchsim/scenario.hpp"
#include "perchsim/supervisor.hpp"
#include "perchsim/telemetry.hpp"
#include "perchsim/vehicle_model.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace perch {

enum class RunStatus { Completed, GroundContact, NumericalAbort };

struct RunResult {
  ScenarioConfig config;
  std::vector<LogRecord> logs;
  std::vector<Event> events;
  Metrics metrics;
  RunStatus status = RunStatus::Completed;
};

/// Fixed-step closed loop. Each tick runs, in order:
///   planner sample -> observers (close the previous step) -> supervisor
///   -> mode wiring -> control -> allocation -> actuators -> contact
///   -> log -> integrate.
/// Observers run before the supervisor so switching sees the estimate of
/// the current tick.
class Simulation {
 public:
  /// Throws ScenarioError if the configuration is invalid.
  explicit Simulation(ScenarioConfig cfg);
  /// Start from `initial` instead of the hover waypoint; actuators are
  /// trimmed to hover at the initial attitude.
  Simulation(ScenarioConfig cfg, const VehicleState& initial);

  /// Advance one tick. Returns false once the run has ended.
  bool step();
  bool finished() const { return finished_; }
  double time() const { return static_cast<double>(tick_) * cfg_.dt; }

  const VehicleState& state() const { return state_; }
  const SupervisorState& supervisor() const { return sup_; }
  const EstimatorState& rejectionEstimator() const { return rejection_; }
  const EstimatorState& contactEstimator() const { return contact_est_; }
  const ContactState& contact() const { return contact_; }
  const std::vector<LogRecord>& logs() const { return logs_; }
  const std::vector<Event>& events() const { return events_; }

  /// Runs to the end if needed and computes metrics.
  RunResult finish();

 private:
  Simulation(ScenarioConfig cfg, const std::optional<VehicleState>& initial);
  void applyPolicy(const PolicyDescriptor& policy, const Setpoint& current, double t);
  VehicleState measured();
  void record(double t, EventKind kind, std::string detail = {});

  ScenarioConfig cfg_;
  Allocator allocator_;
  std::array<Setpoint, 3> waypoints_;
  Plan plan_;
  std::mt19937_64 rng_;

  VehicleState state_;
  ActuatorState actuators_;
  ActuatorCommand last_command_;
  ContactState contact_;
  SupervisorState sup_;
  PolicyDescriptor policy_;
  EstimatorState rejection_;
  EstimatorState contact_est_;
  AttitudeIntegral integral_;
  Vec3 last_world_force_ = Vec3::Zero();

  std::size_t tick_ = 0;
  std::size_t total_ticks_ = 0;
  std::size_t next_event_ = 0;
  bool released_once_ = false;
  bool in_recontact_ = false;
  bool finished_ = false;
  RunStatus status_ = RunStatus::Completed;

  std::vector<LogRecord> logs_;
  std::vector<Event> events_;
};

RunResult runScenario(const ScenarioConfig& cfg);
RunResult runScenario(const ScenarioConfig& cfg, const VehicleState& initial);

/// Side-by-side metric comparison with optional pass/fail checks.
struct ComparisonCheck {
  std::string description;
  bool passed = false;
};

struct MetricDelta {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  double delta = 0.0;  ///< b - a
};

struct ComparisonReport {
  std::string name_a;
  std::string name_b;
  std::vector<MetricDelta> deltas;
  std::vector<ComparisonCheck> checks;

  bool allPassed() const;
};

ComparisonReport compare(const RunResult& a, const RunResult& b);

/// Adds the ablation inequalities that apply to `b`'s variant when `a` is
/// the proposed controller.
ComparisonReport compareAblation(const RunResult& proposed, const RunResult& ablation);

}  // namespace perch
