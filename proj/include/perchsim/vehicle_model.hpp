#pragma once

#include "perchsim/allocation.hpp"
#include "perchsim/geometry.hpp"

#include <stdexcept>
#include <string>

namespace perch {

struct VehicleParams {
  double mass = 1.65;
  Mat3 inertia = Eigen::Vector3d(8e-3, 8e-3, 1.4e-2).asDiagonal();
  double gravity = 9.81;
  RotorGeometry rotors = RotorGeometry::symmetricX();
  double max_thrust = 8.0;        ///< per rotor (N)
  double rotor_time_constant = 0.05;
  double max_tilt_rate = 8.0;     ///< rad/s
  double perch_servo_travel = 0.2;  ///< full 0 -> 1 travel time (s)

  /// Throws std::invalid_argument on non-physical values.
  void validate() const;
};

struct VehicleState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
  Vec3 body_rate = Vec3::Zero();
};

/// Lagged actuator outputs. `perch` is the normalized perch-servo angle,
/// 0 at the unperch stop and 1 at the perch stop.
struct ActuatorState {
  RotorSetting rotors;
  double perch = 0.0;
};

struct Disturbances {
  Vec3 force = Vec3::Zero();         ///< world frame (N)
  Vec3 angular_accel = Vec3::Zero(); ///< body frame (rad/s^2)
};

struct WallModel {
  Vec3 point{1.0, 0.0, 1.0};
  Vec3 normal{-1.0, 0.0, 0.0};  ///< unit, points into free space
  double magnet_capacity = 40.0;  ///< pull-off force at full engagement (N)
  double magnet_range = 0.05;     ///< near-field attraction range (m)
  double attach_tolerance = 1e-3; ///< (m)
  Vec3 interface_offset{0.0, 0.0, -0.05};  ///< magnet face in body frame (m)

  /// Signed distance of the magnet face to the wall plane.
  double gap(const VehicleState& s) const
  {
    return normal.dot(s.position + s.rotation * interface_offset - point);
  }
  void validate() const;
};

struct ContactState {
  bool attached = false;
  double gap = 0.0;
  double normal_force = 0.0;  ///< ground-truth interface force, compression positive (N)
  double pull = 0.0;          ///< static pull-off demand while attached (N)
  Vec3 near_field_force = Vec3::Zero();  ///< world frame (N)
  bool reattach_blocked = false;  ///< set by a forced detach until the face clears the wall
  Vec3 anchor_position = Vec3::Zero();
  Mat3 anchor_rotation = Mat3::Identity();
};

/// What happened on a contact update.
enum class ContactEvent { None, Attach, Release, ForcedDetach };

struct ContactUpdate {
  ContactState contact;
  ContactEvent event = ContactEvent::None;
};

struct StateDerivative {
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  Vec3 body_rate = Vec3::Zero();  ///< rotation rate used in dR/dt = R hat(w)
  Vec3 angular_accel = Vec3::Zero();
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Perch-servo engagement thresholds on the normalized angle.
inline constexpr double kPerchEngaged = 0.95;
inline constexpr double kPerchReleased = 0.05;

StateDerivative derivative(const VehicleState& state, const ActuatorState& act,
                           const Disturbances& dist, const ContactState& contact,
                           const VehicleParams& params);

/// First-order thrust lag, rate-limited tilt servos, constant-rate perch servo.
ActuatorState stepActuators(const ActuatorState& act, const ActuatorCommand& cmd, double dt,
                            const VehicleParams& params);

/// Attach/hold/release logic of the magnetic interface.
/// `applied_world_force` is the actuator force rotated into the world frame.
ContactUpdate updateContact(const VehicleState& state, const ActuatorState& act,
                            const Vec3& applied_world_force, const ContactState& contact,
                            const WallModel& wall, const VehicleParams& params);

/// One RK4 step. Attached states pass through unchanged. Throws
/// NumericalError if the result is not finite.
VehicleState integrate(const VehicleState& state, const ActuatorState& act,
                       const Disturbances& dist, const ContactState& contact,
                       const VehicleParams& params, double dt);

double kineticEnergy(const VehicleState& state, const VehicleParams& params);

}  // namespace perch
