#pragma once

#include "perchsim/control.hpp"
#include "perchsim/geometry.hpp"
#include "perchsim/vehicle_model.hpp"

#include <array>
#include <vector>

namespace perch {

struct PerchPlanConfig {
  double standoff = 0.5;       ///< face-to-wall distance at the standoff pose (m)
  double penetration = 0.1;    ///< depth of the contact pose behind the surface (m)
  double approach_duration = 4.0;   ///< hover -> standoff (s)
  double insertion_duration = 3.0;  ///< standoff -> contact (s)
  double retreat_duration = 3.0;    ///< contact -> standoff (s)
  double approach_start = 1.0;      ///< time the hover -> standoff segment begins (s)
  Vec3 hover_position{0.0, 0.0, 1.0};
  Mat3 hover_rotation = Mat3::Identity();

  void validate() const;
};

/// Per-axis quintic p(t) = sum c_k t^k on [0, T].
struct TranslationSegment {
  Eigen::Matrix<double, 3, 6> coeffs = Eigen::Matrix<double, 3, 6>::Zero();
  double duration = 0.0;

  Vec3 position(double t) const;
  Vec3 velocity(double t) const;
  Vec3 acceleration(double t) const;
  Vec3 jerk(double t) const;
  /// Closed-form integral of |jerk|^2 over the segment.
  double jerkCost() const;
};

/// R(t) = R0 exp(phi(t)) with a per-component cubic phi, phi(0) = 0 and
/// phi(T) = Log(R0^T Rf).
struct RotationSegment {
  Mat3 start = Mat3::Identity();
  Mat3 end = Mat3::Identity();
  Eigen::Matrix<double, 3, 4> coeffs = Eigen::Matrix<double, 3, 4>::Zero();
  double duration = 0.0;

  Vec3 logVector(double t) const;
  Mat3 rotation(double t) const;
  Vec3 bodyRate(double t) const;
};

/// Quintic matching position, velocity and acceleration at both ends.
/// Throws std::invalid_argument for T <= 0.
TranslationSegment minJerkSegment(const Vec3& p0, const Vec3& v0, const Vec3& a0,
                                  const Vec3& pf, const Vec3& vf, const Vec3& af, double T);

/// Cubic on the log vector between two attitudes with body rates at both
/// ends. Throws std::invalid_argument for T <= 0 or nearly antipodal ends.
RotationSegment minAccelRotation(const Mat3& R0, const Mat3& Rf, const Vec3& w0, const Vec3& wf,
                                 double T);

/// Attitude with the magnet face (body -z) toward the wall and the hover
/// heading kept as close as possible.
Mat3 perchOrientation(const WallModel& wall, const Mat3& hover_rotation);

/// Hover, standoff and contact setpoints, in that order.
std::array<Setpoint, 3> perchSetpoints(const WallModel& wall, const PerchPlanConfig& cfg);

/// Piecewise trajectory. Each piece starts at an absolute time and runs a
/// translation and a rotation segment of equal duration; after the last
/// piece ends the terminal pose is held with zero rates.
class Plan {
 public:
  explicit Plan(const Setpoint& initial);

  /// Drop pieces that start at or after `t` and append a segment from
  /// `origin` to `target` (rest at the end) lasting `duration`.
  void replan(double t, const Setpoint& origin, const Setpoint& target, double duration);

  Setpoint sample(double t) const;
  std::size_t pieces() const { return pieces_.size(); }

 private:
  struct Piece {
    double start;
    TranslationSegment translation;
    RotationSegment rotation;
  };
  Setpoint initial_;
  std::vector<Piece> pieces_;
};

}  // namespace perch
