#include "perchsim/estimation.hpp"

namespace perch {

EstimatorState EstimatorState::start(const Vec3& velocity, double mass, const Mat3& gain)
{
  EstimatorState est;
  est.gain = gain;
  est.initial_momentum = mass * velocity;
  return est;
}

EstimatorState updateEstimator(const EstimatorState& est, const Vec3& velocity,
                               const Vec3& applied_world_force, double mass, double gravity,
                               double dt)
{
  if (est.frozen) return est;

  EstimatorState next = est;
  const Vec3 known = applied_world_force - mass * gravity * kE3;
  // residual excluding the new estimate's share of the trapezoid
  const Vec3 residual = mass * velocity - est.initial_momentum - est.accumulator -
                        (known + 0.5 * est.estimate) * dt;
  const Mat3 lhs = Mat3::Identity() + 0.5 * dt * est.gain;
  next.estimate = lhs.partialPivLu().solve(est.gain * residual);
  next.accumulator = est.accumulator + (known + 0.5 * (est.estimate + next.estimate)) * dt;
  return next;
}

EstimatorState updateEstimator(const EstimatorState& est, const VehicleState& state,
                               const Vec3& body_force, const VehicleParams& params, double dt)
{
  return updateEstimator(est, state.velocity, state.rotation * body_force, params.mass,
                         params.gravity, dt);
}

EstimatorState freeze(const EstimatorState& est)
{
  EstimatorState out = est;
  out.frozen = true;
  return out;
}

EstimatorState unfreeze(const EstimatorState& est, const Vec3& velocity, double mass)
{
  EstimatorState out = est;
  out.frozen = false;
  // estimate = K (m v - p0 - acc) holds with p0 = m v and acc = -K^-1 estimate
  out.initial_momentum = mass * velocity;
  out.accumulator = -est.gain.ldlt().solve(est.estimate);
  return out;
}

EstimatorState resetEstimator(const EstimatorState& est, const Vec3& velocity, double mass)
{
  EstimatorState out = est;
  out.frozen = false;
  out.estimate.setZero();
  out.accumulator.setZero();
  out.initial_momentum = mass * velocity;
  return out;
}

}  // namespace perch
