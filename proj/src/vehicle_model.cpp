#include "perchsim/vehicle_model.hpp"

#include <algorithm>
#include <cmath>

namespace perch {

void VehicleParams::validate() const
{
  if (!(mass > 0.0)) throw std::invalid_argument("vehicle mass must be positive");
  if ((inertia - inertia.transpose()).norm() > 1e-12)
    throw std::invalid_argument("inertia must be symmetric");
  if (inertia.llt().info() != Eigen::Success)
    throw std::invalid_argument("inertia must be positive definite");
  if (!(max_thrust > 0.0)) throw std::invalid_argument("max thrust must be positive");
  if (!(rotor_time_constant > 0.0))
    throw std::invalid_argument("rotor time constant must be positive");
  if (!(max_tilt_rate > 0.0)) throw std::invalid_argument("tilt rate limit must be positive");
  if (!(perch_servo_travel > 0.0))
    throw std::invalid_argument("perch servo travel time must be positive");
  double spin_sum = 0.0;
  for (int i = 0; i < kNumRotors; ++i) {
    spin_sum += rotors.spin[i];
    if (rotors.spin[i] == rotors.spin[(i + 1) % kNumRotors])
      throw std::invalid_argument("rotor spin directions must alternate");
  }
  if (spin_sum != 0.0) throw std::invalid_argument("rotor spins must cancel");
}

void WallModel::validate() const
{
  if (std::abs(normal.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("wall normal must be a unit vector");
  if (!(magnet_capacity > 0.0)) throw std::invalid_argument("magnet capacity must be positive");
  if (!(magnet_range > 0.0)) throw std::invalid_argument("magnet range must be positive");
  if (!(attach_tolerance >= 0.0))
    throw std::invalid_argument("attach tolerance must be non-negative");
}

StateDerivative derivative(const VehicleState& state, const ActuatorState& act,
                           const Disturbances& dist, const ContactState& contact,
                           const VehicleParams& params)
{
  StateDerivative d;
  if (contact.attached) return d;

  const Wrench w = forwardWrench(act.rotors, params.rotors);
  const Vec3& omega = state.body_rate;
  d.velocity = state.velocity;
  d.acceleration = (state.rotation * w.force + contact.near_field_force + dist.force) / params.mass -
                   params.gravity * kE3;
  d.body_rate = omega;
  d.angular_accel =
      params.inertia.ldlt().solve(w.torque - omega.cross(params.inertia * omega)) +
      dist.angular_accel;
  return d;
}

ActuatorState stepActuators(const ActuatorState& act, const ActuatorCommand& cmd, double dt,
                            const VehicleParams& params)
{
  ActuatorState next = act;
  // Exact discretization of the first-order lag over one step.
  const double alpha = -std::expm1(-dt / params.rotor_time_constant);
  const double max_step = params.max_tilt_rate * dt;
  for (int i = 0; i < kNumRotors; ++i) {
    const double t = act.rotors.thrust(i) + alpha * (cmd.rotors.thrust(i) - act.rotors.thrust(i));
    next.rotors.thrust(i) = std::clamp(t, 0.0, params.max_thrust);
    const double dnu = cmd.rotors.tilt(i) - act.rotors.tilt(i);
    next.rotors.tilt(i) = act.rotors.tilt(i) + std::clamp(dnu, -max_step, max_step);
  }
  const double perch_step = dt / params.perch_servo_travel;
  next.perch = act.perch + std::clamp(cmd.perch_target - act.perch, -perch_step, perch_step);
  next.perch = std::clamp(next.perch, 0.0, 1.0);
  return next;
}

namespace {

double holdingFraction(double perch)
{
  if (perch >= kPerchEngaged) return 1.0;
  return std::clamp((perch - kPerchReleased) / (kPerchEngaged - kPerchReleased), 0.0, 1.0);
}

}  // namespace

ContactUpdate updateContact(const VehicleState& state, const ActuatorState& act,
                            const Vec3& applied_world_force, const ContactState& contact,
                            const WallModel& wall, const VehicleParams& params)
{
  ContactUpdate out{contact, ContactEvent::None};
  ContactState& c = out.contact;
  c.near_field_force.setZero();
  const Vec3 weight = params.mass * params.gravity * kE3;

  if (c.attached) {
    const double hold = holdingFraction(act.perch);
    c.gap = 0.0;
    c.pull = std::max(0.0, wall.normal.dot(applied_world_force - weight));
    c.normal_force = wall.magnet_capacity * hold + wall.normal.dot(weight - applied_world_force);
    if (act.perch <= kPerchReleased) {
      c.attached = false;
      out.event = ContactEvent::Release;
    } else if (c.pull > wall.magnet_capacity * hold) {
      c.attached = false;
      out.event = ContactEvent::ForcedDetach;
    }
    if (!c.attached) {
      c.normal_force = 0.0;
      c.pull = 0.0;
      c.reattach_blocked = out.event == ContactEvent::ForcedDetach;
    }
    return out;
  }

  c.gap = wall.gap(state);
  c.normal_force = 0.0;
  c.pull = 0.0;
  const bool engaged = act.perch >= kPerchEngaged;
  if (c.reattach_blocked && (c.gap > wall.attach_tolerance || !engaged)) c.reattach_blocked = false;
  if (engaged && !c.reattach_blocked && c.gap <= wall.attach_tolerance) {
    c.attached = true;
    c.anchor_position = state.position - c.gap * wall.normal;
    c.anchor_rotation = state.rotation;
    c.gap = 0.0;
    c.normal_force = wall.magnet_capacity + wall.normal.dot(weight - applied_world_force);
    out.event = ContactEvent::Attach;
  } else if (engaged && c.gap > 0.0 && c.gap < wall.magnet_range) {
    c.near_field_force = -wall.magnet_capacity * (1.0 - c.gap / wall.magnet_range) * wall.normal;
  }
  return out;
}

namespace {

struct Stage {
  Vec3 p, v, w;
  Mat3 R;
};

bool finite(const VehicleState& s)
{
  return s.position.allFinite() && s.velocity.allFinite() && s.rotation.allFinite() &&
         s.body_rate.allFinite();
}

}  // namespace

VehicleState integrate(const VehicleState& state, const ActuatorState& act,
                       const Disturbances& dist, const ContactState& contact,
                       const VehicleParams& params, double dt)
{
  if (contact.attached) {
    VehicleState locked;
    locked.position = contact.anchor_position;
    locked.rotation = contact.anchor_rotation;
    return locked;
  }

  auto eval = [&](const Stage& s) {
    VehicleState vs{s.p, s.v, s.R, s.w};
    return derivative(vs, act, dist, contact, params);
  };

  const Stage s1{state.position, state.velocity, state.body_rate, state.rotation};
  const StateDerivative k1 = eval(s1);
  const Stage s2{s1.p + 0.5 * dt * k1.velocity, s1.v + 0.5 * dt * k1.acceleration,
                 s1.w + 0.5 * dt * k1.angular_accel, s1.R * expSO3((0.5 * dt * k1.body_rate).eval())};
  const StateDerivative k2 = eval(s2);
  const Stage s3{s1.p + 0.5 * dt * k2.velocity, s1.v + 0.5 * dt * k2.acceleration,
                 s1.w + 0.5 * dt * k2.angular_accel, s1.R * expSO3((0.5 * dt * k2.body_rate).eval())};
  const StateDerivative k3 = eval(s3);
  const Stage s4{s1.p + dt * k3.velocity, s1.v + dt * k3.acceleration,
                 s1.w + dt * k3.angular_accel, s1.R * expSO3((dt * k3.body_rate).eval())};
  const StateDerivative k4 = eval(s4);

  VehicleState next;
  next.position = state.position +
                  dt / 6.0 * (k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity);
  next.velocity = state.velocity + dt / 6.0 * (k1.acceleration + 2.0 * k2.acceleration +
                                               2.0 * k3.acceleration + k4.acceleration);
  next.body_rate = state.body_rate + dt / 6.0 * (k1.angular_accel + 2.0 * k2.angular_accel +
                                                 2.0 * k3.angular_accel + k4.angular_accel);
  const Vec3 mean_rate =
      (k1.body_rate + 2.0 * k2.body_rate + 2.0 * k3.body_rate + k4.body_rate) / 6.0;
  next.rotation = renormalize(state.rotation * expSO3((dt * mean_rate).eval()));

  if (!finite(next)) throw NumericalError("integrate: non-finite vehicle state");
  return next;
}

double kineticEnergy(const VehicleState& state, const VehicleParams& params)
{
  return 0.5 * params.mass * state.velocity.squaredNorm() +
         0.5 * state.body_rate.dot(params.inertia * state.body_rate);
}

}  // namespace perch
