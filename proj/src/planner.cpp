#include "perchsim/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace perch {

void PerchPlanConfig::validate() const
{
  if (!(standoff > 0.0)) throw std::invalid_argument("standoff distance must be positive");
  if (!(penetration >= 0.0)) throw std::invalid_argument("penetration depth must be non-negative");
  if (!(approach_duration > 0.0) || !(insertion_duration > 0.0) || !(retreat_duration > 0.0))
    throw std::invalid_argument("segment durations must be positive");
  if (!(approach_start >= 0.0)) throw std::invalid_argument("approach start must be non-negative");
}

namespace {

template <int N>
double horner(const Eigen::Matrix<double, 1, N>& c, double t)
{
  double acc = 0.0;
  for (int k = N - 1; k >= 0; --k) acc = acc * t + c(k);
  return acc;
}

}  // namespace

Vec3 TranslationSegment::position(double t) const
{
  Vec3 out;
  for (int i = 0; i < 3; ++i) out(i) = horner<6>(coeffs.row(i), t);
  return out;
}

Vec3 TranslationSegment::velocity(double t) const
{
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const auto c = coeffs.row(i);
    out(i) = c(1) + t * (2 * c(2) + t * (3 * c(3) + t * (4 * c(4) + t * 5 * c(5))));
  }
  return out;
}

Vec3 TranslationSegment::acceleration(double t) const
{
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const auto c = coeffs.row(i);
    out(i) = 2 * c(2) + t * (6 * c(3) + t * (12 * c(4) + t * 20 * c(5)));
  }
  return out;
}

Vec3 TranslationSegment::jerk(double t) const
{
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    const auto c = coeffs.row(i);
    out(i) = 6 * c(3) + t * (24 * c(4) + t * 60 * c(5));
  }
  return out;
}

double TranslationSegment::jerkCost() const
{
  // jerk = a + b t + c t^2 per axis
  const double T = duration;
  double cost = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double a = 6 * coeffs(i, 3), b = 24 * coeffs(i, 4), c = 60 * coeffs(i, 5);
    cost += a * a * T + a * b * T * T + (b * b + 2 * a * c) * T * T * T / 3.0 +
            b * c * std::pow(T, 4) / 2.0 + c * c * std::pow(T, 5) / 5.0;
  }
  return cost;
}

TranslationSegment minJerkSegment(const Vec3& p0, const Vec3& v0, const Vec3& a0,
                                  const Vec3& pf, const Vec3& vf, const Vec3& af, double T)
{
  if (!(T > 0.0)) throw std::invalid_argument("minJerkSegment: duration must be positive");
  TranslationSegment seg;
  seg.duration = T;
  const double T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
  // Remaining three coefficients from the terminal conditions.
  Mat3 M;
  M << T3, T4, T5,
       3 * T2, 4 * T3, 5 * T4,
       6 * T, 12 * T2, 20 * T3;
  const auto lu = M.partialPivLu();
  for (int i = 0; i < 3; ++i) {
    const double c0 = p0(i), c1 = v0(i), c2 = 0.5 * a0(i);
    const Vec3 rhs(pf(i) - (c0 + c1 * T + c2 * T2), vf(i) - (c1 + 2 * c2 * T), af(i) - 2 * c2);
    const Vec3 hi = lu.solve(rhs);
    seg.coeffs.row(i) << c0, c1, c2, hi(0), hi(1), hi(2);
  }
  return seg;
}

Vec3 RotationSegment::logVector(double t) const
{
  Vec3 out;
  for (int i = 0; i < 3; ++i) out(i) = horner<4>(coeffs.row(i), t);
  return out;
}

Mat3 RotationSegment::rotation(double t) const
{
  if (t >= duration) return end;
  return start * expSO3(logVector(t));
}

Vec3 RotationSegment::bodyRate(double t) const
{
  Vec3 rate;
  for (int i = 0; i < 3; ++i) {
    const auto c = coeffs.row(i);
    rate(i) = c(1) + t * (2 * c(2) + t * 3 * c(3));
  }
  return rightJacobianSO3(logVector(t)) * rate;
}

RotationSegment minAccelRotation(const Mat3& R0, const Mat3& Rf, const Vec3& w0, const Vec3& wf,
                                 double T)
{
  if (!(T > 0.0)) throw std::invalid_argument("minAccelRotation: duration must be positive");
  const Vec3 phi = logSO3((R0.transpose() * Rf).eval());
  if (phi.norm() >= std::numbers::pi - 1e-6)
    throw std::invalid_argument("minAccelRotation: endpoints are antipodal");
  RotationSegment seg;
  seg.start = R0;
  seg.end = Rf;
  seg.duration = T;
  // Log-vector rates that reproduce the requested body rates at each end.
  const Vec3 d0 = w0;
  const Vec3 df = rightJacobianInverseSO3(phi) * wf;
  const double T2 = T * T, T3 = T2 * T;
  for (int i = 0; i < 3; ++i) {
    const double c2 = (3 * phi(i) - (2 * d0(i) + df(i)) * T) / T2;
    const double c3 = (-2 * phi(i) + (d0(i) + df(i)) * T) / T3;
    seg.coeffs.row(i) << 0.0, d0(i), c2, c3;
  }
  return seg;
}

Mat3 perchOrientation(const WallModel& wall, const Mat3& hover_rotation)
{
  const Vec3 z = wall.normal.normalized();
  Vec3 y = hover_rotation.col(1) - hover_rotation.col(1).dot(z) * z;
  if (y.norm() < 1e-6) {
    // heading axis along the normal; fall back to the hover x axis
    const Vec3 x = hover_rotation.col(0) - hover_rotation.col(0).dot(z) * z;
    y = z.cross(x.normalized());
  }
  y.normalize();
  Mat3 R;
  R.col(0) = y.cross(z);
  R.col(1) = y;
  R.col(2) = z;
  return R;
}

std::array<Setpoint, 3> perchSetpoints(const WallModel& wall, const PerchPlanConfig& cfg)
{
  std::array<Setpoint, 3> sp;
  sp[0].position = cfg.hover_position;
  sp[0].rotation = cfg.hover_rotation;

  const Mat3 R = perchOrientation(wall, cfg.hover_rotation);
  // body position that puts the magnet face at `face`
  const Vec3 face_offset = R * wall.interface_offset;
  const Vec3 site = wall.point;
  sp[1].position = site + cfg.standoff * wall.normal - face_offset;
  sp[1].rotation = R;
  sp[2].position = site - cfg.penetration * wall.normal - face_offset;
  sp[2].rotation = R;
  return sp;
}

Plan::Plan(const Setpoint& initial) : initial_(initial)
{
  initial_.velocity.setZero();
  initial_.acceleration.setZero();
  initial_.body_rate.setZero();
}

void Plan::replan(double t, const Setpoint& origin, const Setpoint& target, double duration)
{
  std::erase_if(pieces_, [t](const Piece& p) { return p.start >= t; });
  Piece piece{t,
              minJerkSegment(origin.position, origin.velocity, origin.acceleration,
                             target.position, Vec3::Zero(), Vec3::Zero(), duration),
              minAccelRotation(origin.rotation, target.rotation, origin.body_rate, Vec3::Zero(),
                               duration)};
  pieces_.push_back(std::move(piece));
}

Setpoint Plan::sample(double t) const
{
  auto it = std::find_if(pieces_.rbegin(), pieces_.rend(),
                         [t](const Piece& p) { return p.start <= t; });
  if (it == pieces_.rend()) return initial_;

  const double local = t - it->start;
  Setpoint sp;
  if (local >= it->translation.duration) {
    const double T = it->translation.duration;
    sp.position = it->translation.position(T);
    sp.rotation = it->rotation.end;
    return sp;
  }
  sp.position = it->translation.position(local);
  sp.velocity = it->translation.velocity(local);
  sp.acceleration = it->translation.acceleration(local);
  sp.rotation = it->rotation.rotation(local);
  sp.body_rate = it->rotation.bodyRate(local);
  return sp;
}

}  // namespace perch
