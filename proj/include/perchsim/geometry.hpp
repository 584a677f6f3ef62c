#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace perch {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;

/// World up axis.
inline const Vec3 kE3 = Vec3::UnitZ();

/// Cross-product matrix: hat(v) * w == v.cross(w).
template <typename Derived>
Matrix3<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& v)
{
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using S = typename Derived::Scalar;
  Matrix3<S> m;
  m << S(0), -v(2), v(1),
       v(2), S(0), -v(0),
       -v(1), v(0), S(0);
  return m;
}

/// Inverse of hat. Throws std::invalid_argument if the symmetric part of m
/// exceeds `tol` in Frobenius norm.
template <typename Derived>
Vector3<typename Derived::Scalar> vee(const Eigen::MatrixBase<Derived>& m,
                                      typename Derived::Scalar tol = 1e-9)
{
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(Derived, 3, 3);
  using S = typename Derived::Scalar;
  if ((m + m.transpose()).norm() * S(0.5) > tol)
    throw std::invalid_argument("vee: matrix is not skew-symmetric");
  return Vector3<S>(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) * S(0.5);
}

/// Rodrigues exponential. Series expansion below |v| < 1e-8.
template <typename Derived>
Matrix3<typename Derived::Scalar> expSO3(const Eigen::MatrixBase<Derived>& v)
{
  using S = typename Derived::Scalar;
  const S theta = v.norm();
  const Matrix3<S> K = hat(v);
  S a, b;
  if (theta < S(1e-8)) {
    a = S(1) - theta * theta / S(6);
    b = S(0.5) - theta * theta / S(24);
  } else {
    a = std::sin(theta) / theta;
    b = (S(1) - std::cos(theta)) / (theta * theta);
  }
  return Matrix3<S>::Identity() + a * K + b * K * K;
}

/// Principal logarithm, |result| <= pi.
///
/// Near pi the sin(theta) denominator is useless, so the axis is pulled from
/// the symmetric part (R + R^T)/2 = I + (1 - cos) a a^T using the largest
/// diagonal entry; the sign is fixed by the skew part when it carries
/// information and otherwise by making the first nonzero component positive.
template <typename Derived>
Vector3<typename Derived::Scalar> logSO3(const Eigen::MatrixBase<Derived>& R)
{
  using S = typename Derived::Scalar;
  const S pi = std::numbers::pi_v<S>;
  const S cos_theta = std::clamp((R.trace() - S(1)) * S(0.5), S(-1), S(1));
  const Vector3<S> skew(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  const S theta = std::acos(cos_theta);

  if (theta < S(1e-8)) {
    // theta / sin(theta) ~ 1 + theta^2 / 6
    return skew * S(0.5) * (S(1) + theta * theta / S(6));
  }
  if (pi - theta > S(1e-4)) {
    // atan2 keeps the angle accurate where acos is ill-conditioned.
    const S sin_theta = skew.norm() * S(0.5);
    return skew * (std::atan2(sin_theta, cos_theta) / (S(2) * sin_theta));
  }

  const Matrix3<S> B = (R + R.transpose()) * S(0.5) - cos_theta * Matrix3<S>::Identity();
  Eigen::Index k = 0;
  B.diagonal().maxCoeff(&k);
  Vector3<S> axis = B.col(k) / std::sqrt(std::max(B(k, k), S(1e-300)));
  axis.normalize();
  const S along = axis.dot(skew);
  if (std::abs(along) > S(1e-12)) {
    if (along < S(0)) axis = -axis;
  } else {
    for (int i = 0; i < 3; ++i) {
      if (std::abs(axis(i)) > S(1e-12)) {
        if (axis(i) < S(0)) axis = -axis;
        break;
      }
    }
  }
  // Refine the angle from both trace and skew magnitude.
  const S sin_theta = std::abs(along) * S(0.5);
  return axis * std::atan2(sin_theta, cos_theta);
}

/// Attitude error (Log(R^T Rd))^vee, expressed in the body frame of R.
template <typename DerivedA, typename DerivedB>
Vector3<typename DerivedA::Scalar> rotationError(const Eigen::MatrixBase<DerivedA>& R,
                                                 const Eigen::MatrixBase<DerivedB>& Rd)
{
  return logSO3((R.transpose() * Rd).eval());
}

/// Z-Y-X Euler pitch in [-pi/2, pi/2]. Only used for logging.
template <typename Derived>
typename Derived::Scalar pitchOf(const Eigen::MatrixBase<Derived>& R)
{
  using S = typename Derived::Scalar;
  // R(2,0) = -sin(pitch); clamp guards the gimbal-lock neighbourhood.
  return std::asin(std::clamp(-R(2, 0), S(-1), S(1)));
}

/// Right Jacobian of SO(3): exp(phi + d) ~ exp(phi) exp(Jr(phi) d).
template <typename Derived>
Matrix3<typename Derived::Scalar> rightJacobianSO3(const Eigen::MatrixBase<Derived>& phi)
{
  using S = typename Derived::Scalar;
  const S theta = phi.norm();
  const Matrix3<S> K = hat(phi);
  S a, b;
  if (theta < S(1e-6)) {
    a = S(0.5) - theta * theta / S(24);
    b = S(1) / S(6) - theta * theta / S(120);
  } else {
    a = (S(1) - std::cos(theta)) / (theta * theta);
    b = (theta - std::sin(theta)) / (theta * theta * theta);
  }
  return Matrix3<S>::Identity() - a * K + b * K * K;
}

template <typename Derived>
Matrix3<typename Derived::Scalar> rightJacobianInverseSO3(const Eigen::MatrixBase<Derived>& phi)
{
  using S = typename Derived::Scalar;
  const S theta = phi.norm();
  const Matrix3<S> K = hat(phi);
  S c;
  if (theta < S(1e-6)) {
    c = S(1) / S(12) + theta * theta / S(720);
  } else {
    c = S(1) / (theta * theta) - (S(1) + std::cos(theta)) / (S(2) * theta * std::sin(theta));
  }
  return Matrix3<S>::Identity() + S(0.5) * K + c * K * K;
}

/// One Newton step of the polar decomposition; pulls a nearly orthonormal
/// matrix back onto SO(3).
template <typename Derived>
Matrix3<typename Derived::Scalar> renormalize(const Eigen::MatrixBase<Derived>& R)
{
  using S = typename Derived::Scalar;
  const Matrix3<S> Rm = R;
  return S(0.5) * Rm * (S(3) * Matrix3<S>::Identity() - Rm.transpose() * Rm);
}

inline Mat3 rotX(double a) { return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix(); }
inline Mat3 rotY(double a) { return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix(); }
inline Mat3 rotZ(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

}  // namespace perch
