#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "routeway/core.hpp"

namespace routeway {

/// Build the concrete route unit obtained by instantiating the trail's
/// premise/conclusion templates under `s`. The trail must have templates and
/// `s` must bind exactly its parameters. Throws no-templates,
/// missing-binding, extra-binding, or invalid-substitution.
RouteUnit instantiate_unit(const Trail& trail, const Substitution& s);

enum class SimulationVerdict { Valid, RefutesGeneral, Inconclusive };

std::string to_string(SimulationVerdict v);

struct HypothesisStatus {
  std::string trail_id;
  std::string hypothesis;  // label as declared on the trail
  bool holds = false;      // as declared by the caller
};

struct SimulationResult {
  Routeway routeway;
  std::vector<HypothesisStatus> hypothesis_status;
  SimulationVerdict verdict = SimulationVerdict::Inconclusive;
};

/// The free parameters of a template routeway: the trail parameters of every
/// unit that does not already carry its own substitution, in first-use order.
std::vector<std::string> routeway_parameters(const Routeway& tmpl);

/// Specialize a parameterized routeway. Units whose trail has templates are
/// rebuilt through instantiate_unit; the rest have their waypoint texts
/// rewritten. Hypothesis satisfaction is declared by the caller, never
/// evaluated: the verdict is Valid when every declared hypothesis holds and
/// Inconclusive otherwise. Throws missing-binding, extra-binding,
/// missing-hypothesis-declaration, or broken-chain-after-substitution.
SimulationResult instantiate_routeway(const Routeway& tmpl, const Substitution& s,
                                      const std::map<std::string, bool>& hypotheses_hold);

/// Record that the specialized statement was declared invalid. Upgrades a
/// Valid verdict (all hypotheses hold) to RefutesGeneral; an Inconclusive
/// verdict stays Inconclusive because the guarantee does not apply.
void apply_declared_invalidity(SimulationResult& result, bool specialized_invalid);

enum class NoRefutationReason { HypothesisNotSatisfied, InstanceValid };

struct DetectorVerdict {
  bool refutes_general = false;
  std::optional<NoRefutationReason> reason;  // present iff not refuting
};

std::string to_string(const DetectorVerdict& v);

/// Concrete counterexample detector for a proposed universal trail: the
/// general statement is refuted exactly when every stated hypothesis is
/// declared to hold and the specialized instance is declared invalid. The
/// instance's validity is an input, not something computed here.
DetectorVerdict detect_counterexample(const Trail& trail, const Substitution& s,
                                      const std::map<std::string, bool>& hypotheses_hold,
                                      bool specialized_invalid);

}  // namespace routeway
