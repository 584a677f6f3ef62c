#include "perchsim/control.hpp"

#include <algorithm>
#include <stdexcept>

namespace perch {

namespace {

bool symmetricPositiveDefinite(const Mat3& m)
{
  return (m - m.transpose()).norm() <= 1e-12 && m.llt().info() == Eigen::Success;
}

}  // namespace

void Gains::validate() const
{
  for (const Mat3* m : {&position, &velocity, &attitude, &body_rate, &attitude_integral})
    if (!symmetricPositiveDefinite(*m))
      throw std::invalid_argument("control gains must be symmetric positive definite");
}

TrackingErrors trackingErrors(const VehicleState& state, const Setpoint& sp)
{
  return {sp.position - state.position, rotationError(state.rotation, sp.rotation)};
}

NominalOutput nominalWrench(const VehicleState& state, const Setpoint& sp, const Gains& gains,
                            const AttitudeIntegral& integral, const VehicleParams& params,
                            double dt)
{
  NominalOutput out;
  out.errors = trackingErrors(state, sp);
  const Mat3& R = state.rotation;
  const Vec3 ev = sp.velocity - state.velocity;
  const Vec3 accel = params.gravity * kE3 + gains.position * out.errors.position +
                     gains.velocity * ev + sp.acceleration;
  out.wrench.force = params.mass * R.transpose() * accel;

  const Mat3 psi = R.transpose() * sp.rotation;
  const Vec3 ew = psi * sp.body_rate - state.body_rate;
  out.integral = integral;
  out.integral.value = (integral.value + out.errors.attitude * dt)
                           .cwiseMax(-integral.bound)
                           .cwiseMin(integral.bound);
  out.wrench.torque = params.inertia * (gains.attitude * out.errors.attitude +
                                        gains.body_rate * ew +
                                        gains.attitude_integral * out.integral.value);
  return out;
}

Wrench perchWrench(double fraction, const VehicleState& state, const VehicleParams& params)
{
  if (fraction < 0.0 || fraction >= 1.0)
    throw std::invalid_argument("perch thrust fraction must lie in [0, 1)");
  Wrench w;
  w.force = fraction * params.mass * params.gravity * state.rotation.transpose() * kE3;
  return w;
}

}  // namespace perch
