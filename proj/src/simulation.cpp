#include "perchsim/simulation.hpp"

#include <cmath>
#include <limits>

namespace perch {

namespace {

std::string_view signalName(OperatorSignal s)
{
  return s == OperatorSignal::PerchRequest ? "S_f2p" : "S_p2f";
}

Eigen::Vector4d quaternionWxyz(const Mat3& R)
{
  Eigen::Quaterniond q(R);
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  return {q.w(), q.x(), q.y(), q.z()};
}

std::string_view statusFailure(RunStatus s)
{
  switch (s) {
    case RunStatus::Completed: return "";
    case RunStatus::GroundContact: return "ground_contact";
    case RunStatus::NumericalAbort: return "numerical_abort";
  }
  return "";
}

}  // namespace

Simulation::Simulation(ScenarioConfig cfg) : Simulation(std::move(cfg), std::nullopt) {}

Simulation::Simulation(ScenarioConfig cfg, const VehicleState& initial)
    : Simulation(std::move(cfg), std::optional<VehicleState>(initial))
{
}

Simulation::Simulation(ScenarioConfig cfg, const std::optional<VehicleState>& initial)
    : cfg_((cfg.validate(), std::move(cfg))),
      allocator_(cfg_.vehicle.rotors, cfg_.vehicle.max_thrust),
      waypoints_(perchSetpoints(cfg_.wall, cfg_.plan)),
      plan_(waypoints_[0]),
      rng_(cfg_.seed)
{
  const auto& vp = cfg_.vehicle;
  if (initial) {
    state_ = *initial;
  } else {
    state_.position = waypoints_[0].position;
    state_.rotation = waypoints_[0].rotation;
  }

  // Start trimmed at hover so the first ticks carry no actuator transient.
  const Wrench hover{vp.mass * vp.gravity * state_.rotation.transpose() * kE3, Vec3::Zero()};
  last_command_ = allocator_.allocate(hover);
  actuators_.rotors = last_command_.rotors;
  last_world_force_ = state_.rotation * hover.force;

  rejection_ = EstimatorState::start(state_.velocity, vp.mass, cfg_.rejection_gain);
  contact_est_ = freeze(EstimatorState::start(state_.velocity, vp.mass, cfg_.contact_gain));
  integral_.bound = cfg_.integral_bound;
  policy_ = policyFor(cfg_.variant, sup_, cfg_.switching);

  plan_.replan(cfg_.plan.approach_start, waypoints_[0], waypoints_[1],
               cfg_.plan.approach_duration);

  total_ticks_ = static_cast<std::size_t>(std::llround(cfg_.duration / cfg_.dt)) + 1;
  logs_.reserve(total_ticks_);
}

void Simulation::record(double t, EventKind kind, std::string detail)
{
  events_.push_back({t, kind, std::move(detail)});
}

VehicleState Simulation::measured()
{
  VehicleState m = state_;
  if (cfg_.position_noise > 0.0) {
    std::normal_distribution<double> n(0.0, cfg_.position_noise);
    for (int i = 0; i < 3; ++i) m.position(i) += n(rng_);
  }
  if (cfg_.velocity_noise > 0.0) {
    std::normal_distribution<double> n(0.0, cfg_.velocity_noise);
    for (int i = 0; i < 3; ++i) m.velocity(i) += n(rng_);
  }
  return m;
}

void Simulation::applyPolicy(const PolicyDescriptor& policy, const Setpoint& current, double t)
{
  const double m = cfg_.vehicle.mass;
  if (policy.target != policy_.target) {
    switch (policy.target) {
      case PlanTarget::Contact:
        plan_.replan(t, current, waypoints_[2], cfg_.plan.insertion_duration);
        break;
      case PlanTarget::Standoff:
        plan_.replan(t, current, waypoints_[1], cfg_.plan.retreat_duration);
        break;
      case PlanTarget::Hold:
        break;
    }
  }

  if (policy.rejection_active && rejection_.frozen)
    rejection_ = unfreeze(rejection_, state_.velocity, m);
  else if (!policy.rejection_active && !rejection_.frozen)
    rejection_ = freeze(rejection_);

  if (policy.contact_active && contact_est_.frozen)
    contact_est_ = resetEstimator(contact_est_, state_.velocity, m);
  else if (!policy.contact_active && !contact_est_.frozen)
    contact_est_ = freeze(contact_est_);

  policy_ = policy;
}

bool Simulation::step()
{
  if (finished_) return false;
  if (tick_ >= total_ticks_) {
    finished_ = true;
    return false;
  }

  const auto& vp = cfg_.vehicle;
  const double dt = cfg_.dt;
  const double t = time();
  const VehicleState meas = measured();

  // Observers close the interval that ended at this tick.
  if (tick_ > 0) {
    rejection_ = updateEstimator(rejection_, meas.velocity, last_world_force_, vp.mass,
                                 vp.gravity, dt);
    contact_est_ = updateEstimator(contact_est_, meas.velocity, last_world_force_, vp.mass,
                                   vp.gravity, dt);
  }

  bool perch_signal = false;
  bool unperch_signal = false;
  while (next_event_ < cfg_.events.size() && cfg_.events[next_event_].time <= t + 0.5 * dt) {
    const auto& ev = cfg_.events[next_event_++];
    (ev.signal == OperatorSignal::PerchRequest ? perch_signal : unperch_signal) = true;
    record(t, EventKind::Signal, std::string(signalName(ev.signal)));
  }

  const double lambda = contactNormalForce(contact_est_, cfg_.wall);
  const SupervisorState next =
      perch::step(cfg_.variant, sup_, lambda, perch_signal, unperch_signal, cfg_.switching, t);
  if (next.mode != sup_.mode) {
    record(t, EventKind::ModeChange,
           std::string(toString(sup_.mode)) + "->" + std::string(toString(next.mode)));
    integral_ = AttitudeIntegral{Vec3::Zero(), cfg_.integral_bound};
  }
  if (next.perch_target != sup_.perch_target)
    record(t, EventKind::PerchTargetEdge,
           formatNumber(sup_.perch_target) + "->" + formatNumber(next.perch_target));
  sup_ = next;

  applyPolicy(policyFor(cfg_.variant, sup_, cfg_.switching), plan_.sample(t), t);
  const Setpoint sp = plan_.sample(t);

  const NominalOutput nominal = nominalWrench(meas, sp, cfg_.gains, integral_, vp, dt);
  Wrench wrench;
  switch (policy_.wrench) {
    case WrenchSource::NominalWithRejection:
      wrench = nominal.wrench;
      wrench.force += rejectionForce(rejection_, meas.rotation);
      integral_ = nominal.integral;
      break;
    case WrenchSource::NominalOnly:
      wrench = nominal.wrench;
      integral_ = nominal.integral;
      break;
    case WrenchSource::Perch:
      wrench = perchWrench(policy_.perch_fraction, meas, vp);
      break;
  }

  ActuatorCommand cmd = allocator_.allocate(wrench, last_command_.rotors.tilt);
  cmd.perch_target = sup_.perch_target;
  last_command_ = cmd;
  actuators_ = stepActuators(actuators_, cmd, dt, vp);

  const Vec3 actual_world_force =
      state_.rotation * forwardWrench(actuators_.rotors, allocator_.geometry()).force;
  const ContactUpdate cu =
      updateContact(state_, actuators_, actual_world_force, contact_, cfg_.wall, vp);
  contact_ = cu.contact;
  switch (cu.event) {
    case ContactEvent::Attach: record(t, EventKind::Attach); break;
    case ContactEvent::Release:
      record(t, EventKind::Release);
      released_once_ = true;
      in_recontact_ = true;
      break;
    case ContactEvent::ForcedDetach:
      record(t, EventKind::ForcedDetach);
      released_once_ = true;
      in_recontact_ = true;
      break;
    case ContactEvent::None: break;
  }

  LogRecord r;
  r.t = t;
  r.position = state_.position;
  r.velocity = state_.velocity;
  r.pitch = pitchOf(state_.rotation);
  r.quaternion = quaternionWxyz(state_.rotation);
  r.body_rate = state_.body_rate;
  r.mode = sup_.mode;
  r.attached = contact_.attached;
  r.perch_target = sup_.perch_target;
  r.perch = actuators_.perch;
  r.thrust = actuators_.rotors.thrust;
  r.thrust_cmd = cmd.rotors.thrust;
  r.tilt = actuators_.rotors.tilt;
  r.disturbance_estimate = rejection_.estimate;
  r.contact_estimate = lambda;
  r.contact_true = contact_.normal_force;
  r.attitude_error = nominal.errors.attitude.norm();
  r.position_error = nominal.errors.position.norm();
  r.saturated = cmd.anySaturated();
  r.gap = cfg_.wall.gap(state_);
  r.normal_speed = cfg_.wall.normal.dot(state_.velocity);
  r.max_thrust = vp.max_thrust;
  logs_.push_back(r);

  last_world_force_ = meas.rotation * wrench.force;
  ++tick_;

  try {
    state_ = integrate(state_, actuators_, cfg_.disturbanceAt(t), contact_, vp, dt);
  } catch (const NumericalError& e) {
    record(time(), EventKind::NumericalAbort, e.what());
    status_ = RunStatus::NumericalAbort;
    finished_ = true;
    return false;
  }

  if (released_once_ && !contact_.attached) {
    const double gap = cfg_.wall.gap(state_);
    if (gap > cfg_.wall.attach_tolerance) {
      in_recontact_ = false;
    } else if (gap <= 0.0 && !in_recontact_) {
      record(time(), EventKind::WallRecontact, formatNumber(gap));
      in_recontact_ = true;
    }
  }

  if (!contact_.attached && state_.position.z() <= 0.0) {
    record(time(), EventKind::GroundContact);
    status_ = RunStatus::GroundContact;
    finished_ = true;
    return false;
  }
  return true;
}

RunResult Simulation::finish()
{
  while (step()) {
  }
  RunResult out;
  out.config = cfg_;
  out.logs = logs_;
  out.events = events_;
  out.status = status_;
  if (!logs_.empty()) out.metrics = computeMetrics(logs_);
  out.metrics.failure = std::string(statusFailure(status_));
  return out;
}

RunResult runScenario(const ScenarioConfig& cfg)
{
  Simulation sim(cfg);
  return sim.finish();
}

RunResult runScenario(const ScenarioConfig& cfg, const VehicleState& initial)
{
  Simulation sim(cfg, initial);
  return sim.finish();
}

bool ComparisonReport::allPassed() const
{
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

ComparisonReport compare(const RunResult& a, const RunResult& b)
{
  ComparisonReport rep;
  rep.name_a = std::string(toString(a.config.variant));
  rep.name_b = std::string(toString(b.config.variant));
  const auto ma = scalarMetrics(a.metrics);
  const auto mb = scalarMetrics(b.metrics);
  for (std::size_t i = 0; i < ma.size(); ++i)
    rep.deltas.push_back({ma[i].first, ma[i].second, mb[i].second, mb[i].second - ma[i].second});
  return rep;
}

ComparisonReport compareAblation(const RunResult& proposed, const RunResult& ablation)
{
  ComparisonReport rep = compare(proposed, ablation);
  const Metrics& p = proposed.metrics;
  const Metrics& b = ablation.metrics;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double p_clear = p.min_clearance.value_or(nan);
  const double b_clear = b.min_clearance.value_or(nan);

  switch (ablation.config.variant) {
    case Variant::NoTransitionsRho0:
      rep.checks.push_back({"z_drop >= 2x proposed", b.unperch_achieved &&
                                                         p.unperch_achieved &&
                                                         b.z_drop >= 2.0 * p.z_drop});
      break;
    case Variant::NoTransitionsRho05:
      rep.checks.push_back({"min_clearance <= 0", b_clear <= 0.0});
      rep.checks.push_back({"proposed min_clearance > 0.05", p_clear > 0.05});
      break;
    case Variant::NoFreeze:
      rep.checks.push_back(
          {"saturation_fraction(P) > 0.2", b.saturation_fraction[index(Mode::P)] > 0.2});
      rep.checks.push_back(
          {"proposed saturation_fraction(P) == 0", p.mode_ticks[index(Mode::P)] > 0 &&
                                                       p.saturation_fraction[index(Mode::P)] == 0.0});
      break;
    case Variant::Proposed:
      break;
  }
  return rep;
}

}  // namespace perch
