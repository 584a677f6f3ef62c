#include "perchsim/allocation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace perch {

RotorGeometry RotorGeometry::symmetricX(double arm_length, double drag_ratio)
{
  RotorGeometry g;
  g.drag_ratio = drag_ratio;
  for (int i = 0; i < kNumRotors; ++i) {
    const double angle = std::numbers::pi / 4.0 + i * std::numbers::pi / 2.0;
    g.position[i] = arm_length * Vec3(std::cos(angle), std::sin(angle), 0.0);
    g.spin[i] = (i % 2 == 0) ? 1.0 : -1.0;
  }
  return g;
}

AllocationMatrix buildAllocation(const RotorGeometry& geometry)
{
  AllocationMatrix A;
  for (int i = 0; i < kNumRotors; ++i) {
    const Vec3& r = geometry.position[i];
    if (Vec3(r.x(), r.y(), 0.0).norm() < 1e-9)
      throw std::invalid_argument("buildAllocation: rotor on the yaw axis has no tilt direction");
    const double yaw = geometry.spin[i] * geometry.drag_ratio;
    const Vec3 up = kE3;
    const Vec3 side = geometry.lateral(i);
    A.col(i) << up, r.cross(up) + yaw * up;
    A.col(kNumRotors + i) << side, r.cross(side) + yaw * side;
  }
  Eigen::JacobiSVD<AllocationMatrix> svd(A);
  const auto& sv = svd.singularValues();
  if (sv(5) < 1e-9 * std::max(1.0, sv(0)))
    throw std::invalid_argument("buildAllocation: rotor layout is rank deficient");
  return A;
}

AllocationInverse allocationPseudoInverse(const AllocationMatrix& A)
{
  const Eigen::Matrix<double, 6, 6> gram = A * A.transpose();
  return A.transpose() * gram.ldlt().solve(Eigen::Matrix<double, 6, 6>::Identity());
}

Allocator::Allocator(const RotorGeometry& geometry, double max_thrust)
    : geometry_(geometry),
      matrix_(buildAllocation(geometry)),
      pinv_(allocationPseudoInverse(matrix_)),
      max_thrust_(max_thrust)
{
}

Eigen::Matrix<double, 2 * kNumRotors, 1> Allocator::components(const Wrench& w) const
{
  return pinv_ * w.stacked();
}

ActuatorCommand Allocator::allocate(const Wrench& w, const RotorArray& previous_tilt) const
{
  const auto x = components(w);
  ActuatorCommand cmd;
  for (int i = 0; i < kNumRotors; ++i) {
    const double vertical = x(i);
    const double lateral = x(kNumRotors + i);
    double thrust = std::hypot(vertical, lateral);
    cmd.rotors.tilt(i) = thrust < 1e-6 ? previous_tilt(i) : std::atan2(lateral, vertical);
    if (thrust > max_thrust_) {
      thrust = max_thrust_;
      cmd.saturated[i] = true;
    }
    cmd.rotors.thrust(i) = thrust;
  }
  return cmd;
}

Wrench forwardWrench(const RotorSetting& rotors, const RotorGeometry& geometry)
{
  Wrench w;
  for (int i = 0; i < kNumRotors; ++i) {
    const double t = rotors.thrust(i);
    const double nu = rotors.tilt(i);
    const Vec3 f = t * (std::cos(nu) * kE3 + std::sin(nu) * geometry.lateral(i));
    w.force += f;
    w.torque += geometry.position[i].cross(f) + geometry.spin[i] * geometry.drag_ratio * f;
  }
  return w;
}

}  // namespace perch
