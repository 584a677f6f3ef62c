#include "perchsim/supervisor.hpp"

#include <stdexcept>
#include <string>

namespace perch {

std::string_view toString(Mode m)
{
  switch (m) {
    case Mode::F: return "F";
    case Mode::F2P: return "F2P";
    case Mode::P: return "P";
    case Mode::P2F: return "P2F";
  }
  return "?";
}

std::string_view toString(Variant v)
{
  switch (v) {
    case Variant::Proposed: return "proposed";
    case Variant::NoTransitionsRho0: return "no-transitions-rho0";
    case Variant::NoTransitionsRho05: return "no-transitions-rho0.5";
    case Variant::NoFreeze: return "no-freeze";
  }
  return "?";
}

Variant parseVariant(std::string_view name)
{
  for (Variant v : {Variant::Proposed, Variant::NoTransitionsRho0, Variant::NoTransitionsRho05,
                    Variant::NoFreeze})
    if (toString(v) == name) return v;
  throw std::invalid_argument("unknown controller variant '" + std::string(name) + "'");
}

void SwitchConfig::validate() const
{
  if (!(perch_threshold > unperch_threshold))
    throw std::invalid_argument("perch threshold must exceed unperch threshold");
  if (perch_fraction < 0.0 || perch_fraction >= 1.0)
    throw std::invalid_argument("perch fraction must lie in [0, 1)");
}

namespace {

SupervisorState enter(SupervisorState s, Mode m, double now)
{
  s.mode = m;
  s.mode_entered = now;
  return s;
}

}  // namespace

SupervisorState transition(const SupervisorState& sup, double contact_force, bool perch_signal,
                           bool unperch_signal, const SwitchConfig& cfg, double now)
{
  SupervisorState next = sup;
  next.perch_requested = false;
  switch (sup.mode) {
    case Mode::F:
      if (perch_signal) {
        next = enter(next, Mode::F2P, now);
        next.perch_target = 1.0;
      }
      break;
    case Mode::F2P:
      if (contact_force > cfg.perch_threshold) next = enter(next, Mode::P, now);
      break;
    case Mode::P:
      if (unperch_signal) next = enter(next, Mode::P2F, now);
      break;
    case Mode::P2F:
      if (contact_force < cfg.unperch_threshold) {
        next = enter(next, Mode::F, now);
        next.perch_target = 0.0;
      }
      break;
  }
  return next;
}

SupervisorState transitionWithoutTransitionModes(const SupervisorState& sup,
                                                 double contact_force, bool perch_signal,
                                                 bool unperch_signal, const SwitchConfig& cfg,
                                                 double now)
{
  SupervisorState next = sup;
  switch (sup.mode) {
    case Mode::F:
      if (perch_signal && !next.perch_requested) {
        next.perch_requested = true;
        next.perch_target = 1.0;
      }
      if (next.perch_requested && contact_force > cfg.perch_threshold) {
        next = enter(next, Mode::P, now);
        next.perch_requested = false;
      }
      break;
    case Mode::P:
      if (unperch_signal) {
        next = enter(next, Mode::F, now);
        next.perch_target = 0.0;
      }
      break;
    case Mode::F2P:
    case Mode::P2F:
      // unreachable under this law; fall back to free flight
      next = enter(next, Mode::F, now);
      break;
  }
  return next;
}

PolicyDescriptor modePolicy(Mode mode, double perch_fraction)
{
  PolicyDescriptor p;
  switch (mode) {
    case Mode::F:
      break;
    case Mode::F2P:
      p.wrench = WrenchSource::NominalOnly;
      p.rejection_active = false;
      p.contact_active = true;
      p.target = PlanTarget::Contact;
      break;
    case Mode::P:
      p.wrench = WrenchSource::Perch;
      p.rejection_active = false;
      p.contact_active = true;
      p.target = PlanTarget::Hold;
      p.perch_fraction = perch_fraction;
      break;
    case Mode::P2F:
      p.wrench = WrenchSource::NominalOnly;
      p.rejection_active = false;
      p.contact_active = true;
      p.target = PlanTarget::Standoff;
      break;
  }
  return p;
}

PolicyDescriptor noTransitionPolicy(const SupervisorState& sup, double perch_fraction)
{
  PolicyDescriptor p;
  if (sup.mode == Mode::P) {
    p.wrench = WrenchSource::Perch;
    p.contact_active = true;
    p.target = PlanTarget::Hold;
    p.perch_fraction = perch_fraction;
    return p;
  }
  if (sup.perch_requested) {
    p.contact_active = true;
    p.target = PlanTarget::Contact;
  }
  return p;
}

PolicyDescriptor noFreezePolicy(Mode mode)
{
  PolicyDescriptor p = modePolicy(mode, 0.0);
  p.wrench = WrenchSource::NominalWithRejection;
  p.rejection_active = true;
  p.perch_fraction = 0.0;
  if (mode == Mode::P) p.target = PlanTarget::Contact;
  return p;
}

double perchFractionFor(Variant v, const SwitchConfig& cfg)
{
  switch (v) {
    case Variant::NoTransitionsRho0: return 0.0;
    case Variant::NoTransitionsRho05: return 0.5;
    default: return cfg.perch_fraction;
  }
}

PolicyDescriptor policyFor(Variant v, const SupervisorState& sup, const SwitchConfig& cfg)
{
  switch (v) {
    case Variant::NoTransitionsRho0:
    case Variant::NoTransitionsRho05:
      return noTransitionPolicy(sup, perchFractionFor(v, cfg));
    case Variant::NoFreeze:
      return noFreezePolicy(sup.mode);
    case Variant::Proposed:
      break;
  }
  return modePolicy(sup.mode, cfg.perch_fraction);
}

SupervisorState step(Variant v, const SupervisorState& sup, double contact_force,
                     bool perch_signal, bool unperch_signal, const SwitchConfig& cfg, double now)
{
  if (v == Variant::NoTransitionsRho0 || v == Variant::NoTransitionsRho05)
    return transitionWithoutTransitionModes(sup, contact_force, perch_signal, unperch_signal,
                                            cfg, now);
  return transition(sup, contact_force, perch_signal, unperch_signal, cfg, now);
}

}  // namespace perch
