#pragma once

#include "perchsim/allocation.hpp"
#include "perchsim/supervisor.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace perch {

/// Shortest round-trip decimal form; identical bits give identical text.
std::string formatNumber(double v);

/// One row per control tick.
struct LogRecord {
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double pitch = 0.0;
  Eigen::Vector4d quaternion{1.0, 0.0, 0.0, 0.0};  ///< w, x, y, z
  Vec3 body_rate = Vec3::Zero();
  Mode mode = Mode::F;
  bool attached = false;
  double perch_target = 0.0;
  double perch = 0.0;
  RotorArray thrust = RotorArray::Zero();
  RotorArray thrust_cmd = RotorArray::Zero();
  RotorArray tilt = RotorArray::Zero();
  Vec3 disturbance_estimate = Vec3::Zero();
  double contact_estimate = 0.0;
  double contact_true = 0.0;
  double attitude_error = 0.0;
  double position_error = 0.0;
  bool saturated = false;

  // Not part of the CSV; used by metrics.
  double gap = 0.0;
  double normal_speed = 0.0;
  double max_thrust = 1.0;

  /// Normalized thrust T / T_max, the stand-in for a PWM duty.
  RotorArray normalizedThrust() const { return thrust / max_thrust; }
};

enum class EventKind {
  Signal,
  ModeChange,
  PerchTargetEdge,
  Attach,
  Release,
  ForcedDetach,
  WallRecontact,
  GroundContact,
  NumericalAbort,
};

std::string_view toString(EventKind k);

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::Signal;
  std::string detail;
};

/// Fixed CSV column order.
const std::vector<std::string>& csvColumns();

void writeCsvHeader(std::ostream& out);
void writeCsvRow(std::ostream& out, const LogRecord& r);
void writeCsv(std::ostream& out, const std::vector<LogRecord>& logs);
std::string toCsv(const std::vector<LogRecord>& logs);

void writeEventsCsv(std::ostream& out, const std::vector<Event>& events);

/// 64-bit FNV-1a, used for golden-file checks of CSV output.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace perch
