#pragma once

#include <string>
#include <string_view>

namespace perch {

/// Controller modes: free flight, flight-to-perch, perched, perch-to-flight.
enum class Mode { F, F2P, P, P2F };

std::string_view toString(Mode m);

/// Which switching law and perch command a run uses.
enum class Variant { Proposed, NoTransitionsRho0, NoTransitionsRho05, NoFreeze };

std::string_view toString(Variant v);
/// Throws std::invalid_argument for unknown names.
Variant parseVariant(std::string_view name);

struct SwitchConfig {
  double perch_threshold = 1.0;     ///< contact force above which perching is declared (N)
  double unperch_threshold = -1.0;  ///< contact force below which release is allowed (N)
  double perch_fraction = 0.5;      ///< share of the weight carried by rotors while perched

  void validate() const;
};

struct SupervisorState {
  Mode mode = Mode::F;
  double perch_target = 0.0;    ///< magnet servo target, 1 = perch
  bool perch_requested = false; ///< latched S_f2p, used by the two-mode law only
  double mode_entered = 0.0;    ///< s
};

/// Four-mode law. Signals are one-shot: they act on the tick they arrive
/// and are otherwise dropped.
SupervisorState transition(const SupervisorState& sup, double contact_force, bool perch_signal,
                           bool unperch_signal, const SwitchConfig& cfg, double now = 0.0);

/// Two-mode law (F and P only). A perch request latches until contact is
/// confirmed; the magnet target follows the request and the unperch edge.
SupervisorState transitionWithoutTransitionModes(const SupervisorState& sup,
                                                 double contact_force, bool perch_signal,
                                                 bool unperch_signal, const SwitchConfig& cfg,
                                                 double now = 0.0);

enum class WrenchSource { NominalWithRejection, NominalOnly, Perch };
enum class PlanTarget { Standoff, Contact, Hold };

/// Per-mode wiring of controller, observers, and planner.
struct PolicyDescriptor {
  WrenchSource wrench = WrenchSource::NominalWithRejection;
  bool rejection_active = true;  ///< false: the rejection observer is held
  bool contact_active = false;
  PlanTarget target = PlanTarget::Standoff;
  double perch_fraction = 0.0;
};

PolicyDescriptor modePolicy(Mode mode, double perch_fraction);
PolicyDescriptor noTransitionPolicy(const SupervisorState& sup, double perch_fraction);
PolicyDescriptor noFreezePolicy(Mode mode);

/// Dispatch on variant.
PolicyDescriptor policyFor(Variant v, const SupervisorState& sup, const SwitchConfig& cfg);
SupervisorState step(Variant v, const SupervisorState& sup, double contact_force,
                     bool perch_signal, bool unperch_signal, const SwitchConfig& cfg,
                     double now);
double perchFractionFor(Variant v, const SwitchConfig& cfg);

}  // namespace perch
