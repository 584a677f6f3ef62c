#include "perchsim/allocation.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace perch;

namespace {

const double kHoverForce = 1.65 * 9.81;

Wrench randomWrench(std::mt19937_64& rng, double fmax, double tmax)
{
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Vec3 f = Vec3(n(rng), n(rng), n(rng)).normalized() * fmax * std::cbrt(u(rng));
  const Vec3 t = Vec3(n(rng), n(rng), n(rng)).normalized() * tmax * std::cbrt(u(rng));
  return {f, t};
}

}  // namespace

TEST(BuildAllocation, FullRankForSymmetricX)
{
  const Eigen::MatrixXd A = buildAllocation(RotorGeometry::symmetricX(0.13));
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  EXPECT_EQ(svd.rank(), 6);
  EXPECT_GT(svd.singularValues().minCoeff(), 1e-3);
}

TEST(BuildAllocation, YawFromLateralOnlyWithoutDrag)
{
  const AllocationMatrix A = buildAllocation(RotorGeometry::symmetricX(0.13, 0.0));
  for (int i = 0; i < kNumRotors; ++i) {
    EXPECT_EQ(A(5, i), 0.0) << "vertical column " << i;
    EXPECT_NE(A(5, kNumRotors + i), 0.0) << "lateral column " << i;
  }
}

TEST(BuildAllocation, ColumnsMatchRotorPhysics)
{
  const RotorGeometry g = RotorGeometry::symmetricX();
  const AllocationMatrix A = buildAllocation(g);
  for (int i = 0; i < kNumRotors; ++i) {
    // Unit vertical thrust on rotor i alone.
    RotorSetting s;
    s.thrust(i) = 1.0;
    EXPECT_LT((forwardWrench(s, g).stacked() - A.col(i)).norm(), 1e-15);
    s.tilt(i) = std::numbers::pi / 2;
    EXPECT_LT((forwardWrench(s, g).stacked() - A.col(kNumRotors + i)).norm(), 1e-15);
  }
}

TEST(BuildAllocation, DegenerateGeometryThrows)
{
  RotorGeometry g = RotorGeometry::symmetricX();
  for (auto& p : g.position) p = Vec3(0.1, 0.0, 0.0);
  EXPECT_THROW(buildAllocation(g), std::invalid_argument);
  for (auto& p : g.position) p = Vec3::Zero();
  EXPECT_THROW(buildAllocation(g), std::invalid_argument);
}

TEST(Allocate, ZeroWrench)
{
  Allocator a(RotorGeometry::symmetricX(), 8.0);
  const ActuatorCommand c = a.allocate(Wrench{});
  EXPECT_EQ(c.rotors.thrust, RotorArray::Zero());
  EXPECT_FALSE(c.anySaturated());
}

TEST(Allocate, Hover)
{
  Allocator a(RotorGeometry::symmetricX(), 8.0);
  const ActuatorCommand c = a.allocate({Vec3(0, 0, kHoverForce), Vec3::Zero()});
  for (int i = 0; i < kNumRotors; ++i) {
    EXPECT_NEAR(c.rotors.thrust(i), 4.05, 0.01);
    EXPECT_NEAR(c.rotors.thrust(i), kHoverForce / 4, 1e-12);
    EXPECT_NEAR(c.rotors.tilt(i), 0.0, 1e-12);
  }
}

TEST(Allocate, LateralWeightAtNinetyDegreePitch)
{
  const RotorGeometry g = RotorGeometry::symmetricX();
  Allocator a(g, 8.0);
  const Wrench w{Vec3(-kHoverForce, 0, 0), Vec3::Zero()};
  const ActuatorCommand c = a.allocate(w);
  EXPECT_FALSE(c.anySaturated());
  EXPECT_LT(c.rotors.thrust.maxCoeff(), 8.0);
  EXPECT_LT((forwardWrench(c.rotors, g).stacked() - w.stacked()).norm(), 1e-9);
}

TEST(Allocate, RoundTripAndMinNorm)
{
  const RotorGeometry g = RotorGeometry::symmetricX();
  Allocator a(g, 8.0);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    const Wrench w = randomWrench(rng, 10.0, 0.5);
    const ActuatorCommand c = a.allocate(w);
    ASSERT_FALSE(c.anySaturated());
    EXPECT_LT((forwardWrench(c.rotors, g).stacked() - w.stacked()).cwiseAbs().maxCoeff(), 1e-9);
    if (i < 100) {
      const Eigen::VectorXd x = oracle::minNormSolve(a.matrix(), w.stacked());
      EXPECT_LT((a.components(w) - x).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Allocate, PseudoInverseIsRightInverse)
{
  const AllocationMatrix A = buildAllocation(RotorGeometry::symmetricX());
  const AllocationInverse P = allocationPseudoInverse(A);
  EXPECT_LT((A * P - Eigen::Matrix<double, 6, 6>::Identity()).norm(), 1e-12);
  Eigen::MatrixXd pinv = Eigen::MatrixXd(A).completeOrthogonalDecomposition().pseudoInverse();
  EXPECT_LT((Eigen::MatrixXd(P) - pinv).norm(), 1e-10);
}

TEST(Allocate, SaturationClampsAndFlags)
{
  Allocator a(RotorGeometry::symmetricX(), 8.0);
  const ActuatorCommand c = a.allocate({Vec3(0, 0, 40.0), Vec3::Zero()});
  for (int i = 0; i < kNumRotors; ++i) {
    EXPECT_EQ(c.rotors.thrust(i), 8.0);
    EXPECT_TRUE(c.saturated[i]);
  }
}

TEST(Allocate, HoldsTiltAtZeroThrust)
{
  Allocator a(RotorGeometry::symmetricX(), 8.0);
  RotorArray prev;
  prev << 0.1, -0.2, 0.3, -0.4;
  const ActuatorCommand c = a.allocate(Wrench{}, prev);
  EXPECT_EQ(c.rotors.tilt, prev);
}

TEST(Allocate, ContinuousAwayFromZeroThrust)
{
  Allocator a(RotorGeometry::symmetricX(), 8.0);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 100; ++i) {
    Wrench w = randomWrench(rng, 5.0, 0.2);
    w.force.z() += kHoverForce;
    Wrench w2 = w;
    w2.force.x() += 1e-8;
    const ActuatorCommand c1 = a.allocate(w), c2 = a.allocate(w2);
    EXPECT_LT((c1.rotors.thrust - c2.rotors.thrust).norm(), 1e-7);
    EXPECT_LT((c1.rotors.tilt - c2.rotors.tilt).norm(), 1e-7);
  }
}

TEST(ForwardWrench, Examples)
{
  const RotorGeometry g = RotorGeometry::symmetricX();
  EXPECT_EQ(forwardWrench(RotorSetting{}, g).stacked(), Vector6::Zero());
  RotorSetting s;
  s.thrust.setConstant(4.05);
  const Wrench w = forwardWrench(s, g);
  EXPECT_LT((w.force - Vec3(0, 0, 16.2)).norm(), 1e-9);
  EXPECT_LT(w.torque.norm(), 1e-9);
}
