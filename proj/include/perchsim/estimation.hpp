#pragma once

#include "perchsim/geometry.hpp"
#include "perchsim/vehicle_model.hpp"

namespace perch {

/// Momentum-based external force observer.
///
///   estimate = K (m v - p0 - integral(R f - m g e3 + estimate) dt)
///
/// The estimate obeys d/dt estimate = K (true force - estimate) on the
/// continuous plant. All quantities are world-frame forces in newtons.
struct EstimatorState {
  Vec3 estimate = Vec3::Zero();
  Vec3 accumulator = Vec3::Zero();     ///< N s
  Vec3 initial_momentum = Vec3::Zero();  ///< kg m/s
  Mat3 gain = 20.0 * Mat3::Identity();   ///< 1/s, symmetric positive definite
  bool frozen = false;

  /// Observer at rest for a vehicle moving with `velocity`.
  static EstimatorState start(const Vec3& velocity, double mass, const Mat3& gain);
};

/// One observer step over `dt`. `applied_world_force` is the force the
/// controller commanded during the step, rotated to world frame. The
/// estimate term of the integral uses the trapezoid rule (implicit in the
/// new estimate), which keeps the discrete decay rate matched to exp(-K t).
EstimatorState updateEstimator(const EstimatorState& est, const Vec3& velocity,
                               const Vec3& applied_world_force, double mass, double gravity,
                               double dt);

/// Convenience overload taking the body-frame command and the vehicle state.
EstimatorState updateEstimator(const EstimatorState& est, const VehicleState& state,
                               const Vec3& body_force, const VehicleParams& params, double dt);

EstimatorState freeze(const EstimatorState& est);

/// Resume updates; the momentum reference is re-based so the estimate
/// continues from its held value.
EstimatorState unfreeze(const EstimatorState& est, const Vec3& velocity, double mass);

/// Zero the estimate and re-base on the current momentum, leaving it active.
EstimatorState resetEstimator(const EstimatorState& est, const Vec3& velocity, double mass);

/// Surface-normal component of an external-force estimate. Positive when
/// the wall pushes the vehicle out along the normal (compression).
inline double contactNormalForce(const EstimatorState& est, const WallModel& wall)
{
  return wall.normal.dot(est.estimate);
}

}  // namespace perch
