#pragma once

#include "perchsim/geometry.hpp"

#include <array>

namespace perch {

inline constexpr int kNumRotors = 4;

using RotorArray = Eigen::Matrix<double, kNumRotors, 1>;
using AllocationMatrix = Eigen::Matrix<double, 6, 2 * kNumRotors>;
using AllocationInverse = Eigen::Matrix<double, 2 * kNumRotors, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Body-frame force (N) and torque (N m).
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();

  Vector6 stacked() const
  {
    Vector6 w;
    w << force, torque;
    return w;
  }
  static Wrench fromStacked(const Vector6& w) { return {w.head<3>(), w.tail<3>()}; }
};

/// Tiltrotor arm layout. Rotor i tilts about its arm direction; at tilt
/// angle nu the thrust axis is cos(nu) z + sin(nu) lateral(i), with
/// lateral(i) = z x arm(i).
struct RotorGeometry {
  std::array<Vec3, kNumRotors> position;
  std::array<double, kNumRotors> spin;
  double drag_ratio = 0.016;  ///< yaw moment per unit thrust (m)

  Vec3 arm(int i) const { return Vec3(position[i].x(), position[i].y(), 0.0).normalized(); }
  Vec3 lateral(int i) const { return kE3.cross(arm(i)); }

  /// X layout with rotors at 45, 135, 225, 315 degrees and alternating spin.
  static RotorGeometry symmetricX(double arm_length = 0.13, double drag_ratio = 0.016);
};

/// Thrusts and tilt angles of all rotors.
struct RotorSetting {
  RotorArray thrust = RotorArray::Zero();
  RotorArray tilt = RotorArray::Zero();
};

struct ActuatorCommand {
  RotorSetting rotors;
  double perch_target = 0.0;  ///< 0 = unperch, 1 = perch
  std::array<bool, kNumRotors> saturated{};

  bool anySaturated() const
  {
    for (bool s : saturated)
      if (s) return true;
    return false;
  }
};

/// Maps decomposed components x = [T cos(nu); T sin(nu)] (vertical block
/// first, lateral block second) to the stacked body wrench. Throws
/// std::invalid_argument when the layout cannot produce all six axes.
AllocationMatrix buildAllocation(const RotorGeometry& geometry);

/// Minimum-norm right inverse A^T (A A^T)^-1.
AllocationInverse allocationPseudoInverse(const AllocationMatrix& A);

class Allocator {
 public:
  Allocator(const RotorGeometry& geometry, double max_thrust);

  /// Min-norm allocation with clamp-and-flag saturation. Rotors whose
  /// recovered thrust is below 1e-6 N keep the tilt in `previous_tilt`.
  ActuatorCommand allocate(const Wrench& w, const RotorArray& previous_tilt) const;
  ActuatorCommand allocate(const Wrench& w) const { return allocate(w, RotorArray::Zero()); }

  /// Decomposed components for a wrench, before recovery and clamping.
  Eigen::Matrix<double, 2 * kNumRotors, 1> components(const Wrench& w) const;

  const RotorGeometry& geometry() const { return geometry_; }
  const AllocationMatrix& matrix() const { return matrix_; }
  double maxThrust() const { return max_thrust_; }

 private:
  RotorGeometry geometry_;
  AllocationMatrix matrix_;
  AllocationInverse pinv_;
  double max_thrust_;
};

/// Exact wrench produced by a rotor setting, summed rotor by rotor.
Wrench forwardWrench(const RotorSetting& rotors, const RotorGeometry& geometry);

}  // namespace perch
