#pragma once

#include "perchsim/allocation.hpp"
#include "perchsim/estimation.hpp"
#include "perchsim/vehicle_model.hpp"

namespace perch {

struct Gains {
  Mat3 position = 10.0 * Mat3::Identity();      ///< 1/s^2
  Mat3 velocity = 6.0 * Mat3::Identity();       ///< 1/s
  Mat3 attitude = 60.0 * Mat3::Identity();      ///< 1/s^2
  Mat3 body_rate = 15.0 * Mat3::Identity();     ///< 1/s
  Mat3 attitude_integral = 3.0 * Mat3::Identity();  ///< 1/s^3

  void validate() const;
};

struct Setpoint {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
  Vec3 body_rate = Vec3::Zero();
};

struct AttitudeIntegral {
  Vec3 value = Vec3::Zero();  ///< rad s
  double bound = 0.5;
};

struct TrackingErrors {
  Vec3 position = Vec3::Zero();
  Vec3 attitude = Vec3::Zero();
};

struct NominalOutput {
  Wrench wrench;
  AttitudeIntegral integral;
  TrackingErrors errors;
};

/// Free-flight feedback without disturbance rejection: gravity feedforward
/// plus PD on position and PID on the SO(3) log error.
NominalOutput nominalWrench(const VehicleState& state, const Setpoint& sp, const Gains& gains,
                            const AttitudeIntegral& integral, const VehicleParams& params,
                            double dt);

/// Body-frame force cancelling an estimated world-frame disturbance.
inline Vec3 rejectionForce(const EstimatorState& est, const Mat3& rotation)
{
  return -rotation.transpose() * est.estimate;
}

/// Perched command: a fraction of the weight carried by the rotors, zero torque.
Wrench perchWrench(double fraction, const VehicleState& state, const VehicleParams& params);

TrackingErrors trackingErrors(const VehicleState& state, const Setpoint& sp);

}  // namespace perch
