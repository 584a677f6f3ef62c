#include "perchsim/allocation.hpp"
#include "perchsim/control.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace perch;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

VehicleState at(const Setpoint& sp)
{
  VehicleState s;
  s.position = sp.position;
  s.velocity = sp.velocity;
  s.rotation = sp.rotation;
  s.body_rate = sp.body_rate;
  return s;
}

// Closed-loop hover with a constant world force. Returns final |e_p|.
double hoverUnderBias(const Vec3& bias, bool reject, double* max_integral = nullptr)
{
  const VehicleParams p;
  const Gains g;
  Allocator alloc(p.rotors, p.max_thrust);
  Setpoint sp;
  sp.position = Vec3(0, 0, 1);
  VehicleState s = at(sp);
  ActuatorState act;
  act.rotors = alloc.allocate({p.mass * p.gravity * kE3, Vec3::Zero()}).rotors;
  EstimatorState est = EstimatorState::start(s.velocity, p.mass, 20.0 * Mat3::Identity());
  AttitudeIntegral integral;
  Disturbances dist;
  dist.force = bias;
  const double dt = 1e-3;
  Vec3 last_force = s.rotation * forwardWrench(act.rotors, p.rotors).force;
  double worst_integral = 0.0;
  for (int k = 0; k < 8000; ++k) {
    if (k > 0) est = updateEstimator(est, s.velocity, last_force, p.mass, p.gravity, dt);
    const NominalOutput nom = nominalWrench(s, sp, g, integral, p, dt);
    integral = nom.integral;
    worst_integral = std::max(worst_integral, integral.value.cwiseAbs().maxCoeff());
    Wrench w = nom.wrench;
    if (reject) w.force += rejectionForce(est, s.rotation);
    const ActuatorCommand cmd = alloc.allocate(w, act.rotors.tilt);
    act = stepActuators(act, cmd, dt, p);
    last_force = s.rotation * w.force;
    s = integrate(s, act, dist, {}, p, dt);
  }
  if (max_integral) *max_integral = worst_integral;
  return (sp.position - s.position).norm();
}

}  // namespace

TEST(Nominal, HoverFeedforward)
{
  const VehicleParams p;
  Setpoint sp;
  const NominalOutput out = nominalWrench(at(sp), sp, Gains{}, {}, p, 1e-3);
  EXPECT_LT((out.wrench.force - Vec3(0, 0, p.mass * p.gravity)).norm(), 1e-12);
  EXPECT_NEAR(out.wrench.force.z(), 16.19, 0.01);
  EXPECT_EQ(out.wrench.torque, Vec3::Zero());
}

TEST(Nominal, PitchedHoverFeedforward)
{
  const VehicleParams p;
  Setpoint sp;
  sp.rotation = rotY(kHalfPi);
  const NominalOutput out = nominalWrench(at(sp), sp, Gains{}, {}, p, 1e-3);
  EXPECT_LT((out.wrench.force - Vec3(-p.mass * p.gravity, 0, 0)).norm(), 1e-12);
  EXPECT_LT(out.wrench.torque.norm(), 1e-12);
}

TEST(Nominal, PositionGain)
{
  const VehicleParams p;
  Setpoint sp;
  sp.position = Vec3(0.1, 0, 0);
  VehicleState s;
  const NominalOutput out = nominalWrench(s, sp, Gains{}, {}, p, 1e-3);
  EXPECT_LT((out.wrench.force - Vec3(1.65, 0, p.mass * p.gravity)).norm(), 1e-12);
}

TEST(Nominal, AffineInTranslationalErrors)
{
  const VehicleParams p;
  const Gains g;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rv = [&] { return Vec3(u(rng), u(rng), u(rng)); };
  for (int i = 0; i < 50; ++i) {
    VehicleState s;
    s.rotation = Eigen::Quaterniond::UnitRandom().toRotationMatrix();
    auto force = [&](const Vec3& ep, const Vec3& ev, const Vec3& a) {
      Setpoint sp;
      sp.position = ep;
      sp.velocity = ev;
      sp.acceleration = a;
      sp.rotation = s.rotation;
      return nominalWrench(s, sp, g, {}, p, 1e-3).wrench.force;
    };
    const Vec3 e1 = rv(), e2 = rv(), v1 = rv(), v2 = rv(), a1 = rv(), a2 = rv();
    const Vec3 f0 = force(Vec3::Zero(), Vec3::Zero(), Vec3::Zero());
    const Vec3 lhs = force(e1 + e2, v1 + v2, a1 + a2) - f0;
    const Vec3 rhs = (force(e1, v1, a1) - f0) + (force(e2, v2, a2) - f0);
    EXPECT_LT((lhs - rhs).norm(), 1e-12);
  }
}

TEST(Nominal, IntegralIsClamped)
{
  const VehicleParams p;
  Setpoint sp;
  sp.rotation = rotX(1.0);
  AttitudeIntegral integral;
  integral.bound = 0.2;
  for (int i = 0; i < 10000; ++i)
    integral = nominalWrench(VehicleState{}, sp, Gains{}, integral, p, 1e-3).integral;
  EXPECT_LE(integral.value.cwiseAbs().maxCoeff(), 0.2);
  EXPECT_EQ(integral.value.x(), 0.2);
}

TEST(Rejection, Examples)
{
  EstimatorState est;
  EXPECT_EQ(rejectionForce(est, Mat3::Identity()), Vec3::Zero());
  est.estimate = Vec3(0, 0, -5);
  EXPECT_EQ(rejectionForce(est, Mat3::Identity()), Vec3(0, 0, 5));
  est.estimate = Vec3(1, 0, 0);
  EXPECT_LT((rejectionForce(est, rotY(kHalfPi)) - Vec3(0, 0, -1)).norm(), 1e-15);
}

TEST(Rejection, ImprovesSteadyStateError)
{
  const Vec3 bias(2.0, -1.0, -3.0);
  double integral_peak = 0.0;
  const double without = hoverUnderBias(bias, false);
  const double with = hoverUnderBias(bias, true, &integral_peak);
  EXPECT_GT(without, 0.05);
  EXPECT_LT(with, 0.1 * without);
  EXPECT_LE(integral_peak, AttitudeIntegral{}.bound);
}

TEST(Perch, Examples)
{
  const VehicleParams p;
  VehicleState s;
  const Wrench zero = perchWrench(0.0, s, p);
  EXPECT_EQ(zero.stacked(), Vector6::Zero());
  const Wrench half = perchWrench(0.5, s, p);
  EXPECT_NEAR(half.force.z(), 8.09, 0.01);
  EXPECT_EQ(half.torque, Vec3::Zero());
  s.rotation = rotY(kHalfPi);
  const Wrench pitched = perchWrench(0.5, s, p);
  EXPECT_LT((pitched.force - Vec3(-0.5 * p.mass * p.gravity, 0, 0)).norm(), 1e-12);
  EXPECT_LT((s.rotation * pitched.force - Vec3(0, 0, 0.5 * p.mass * p.gravity)).norm(), 1e-12);
  EXPECT_THROW(perchWrench(1.0, s, p), std::invalid_argument);
  EXPECT_THROW(perchWrench(-0.1, s, p), std::invalid_argument);
}

TEST(Gains, Validation)
{
  Gains g;
  EXPECT_NO_THROW(g.validate());
  g.attitude(0, 0) = -1.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}
