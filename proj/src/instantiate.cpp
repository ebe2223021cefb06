#include "routeway/instantiate.hpp"

#include <algorithm>
#include <set>

namespace routeway {

namespace {

void check_bindings_cover(const std::vector<std::string>& params, const Substitution& s) {
  for (const auto& p : params) {
    auto it = s.bindings.find(p);
    if (it == s.bindings.end())
      throw Error("missing-binding", "parameter '" + p + "' is not bound");
    if (it->second.empty())
      throw Error("invalid-substitution", "parameter '" + p + "' is bound to an empty term");
  }
  for (const auto& [key, term] : s.bindings) {
    (void)term;
    if (std::find(params.begin(), params.end(), key) == params.end())
      throw Error("extra-binding", "'" + key + "' is not a parameter here");
  }
}

Waypoint instantiated_waypoint(const std::vector<std::string>& templ,
                               const std::map<std::string, std::string>& bindings) {
  Waypoint w;
  for (const auto& component : templ) w.statements.push_back(substitute_params(component, bindings));
  return w;
}

Waypoint rewritten_waypoint(const Waypoint& original,
                            const std::map<std::string, std::string>& bindings) {
  Waypoint w;
  for (const auto& s : original.statements) w.statements.push_back(substitute_params(s, bindings));
  if (original.display) w.display = substitute_params(*original.display, bindings);
  return w;
}

}  // namespace

RouteUnit instantiate_unit(const Trail& trail, const Substitution& s) {
  if (!trail.has_templates())
    throw Error("no-templates", "trail '" + trail.id + "' has no premise/conclusion templates");
  check_bindings_cover(trail.params, s);
  RouteUnit unit;
  unit.initial = instantiated_waypoint(*trail.premise, s.bindings);
  unit.terminal = instantiated_waypoint(*trail.conclusion, s.bindings);
  unit.trail = trail;
  unit.substitution = s;
  return unit;
}

std::string to_string(SimulationVerdict v) {
  switch (v) {
    case SimulationVerdict::Valid: return "valid";
    case SimulationVerdict::RefutesGeneral: return "refutes-general";
    case SimulationVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<std::string> routeway_parameters(const Routeway& tmpl) {
  std::vector<std::string> params;
  std::set<std::string> seen;
  for (const auto& u : tmpl.units()) {
    if (!u.trail || u.substitution) continue;
    for (const auto& p : u.trail->params) {
      if (seen.insert(p).second) params.push_back(p);
    }
  }
  return params;
}

SimulationResult instantiate_routeway(const Routeway& tmpl, const Substitution& s,
                                      const std::map<std::string, bool>& hypotheses_hold) {
  check_bindings_cover(routeway_parameters(tmpl), s);

  std::vector<HypothesisStatus> status;
  bool all_hold = true;
  std::set<std::string> trails_seen;
  for (const auto& u : tmpl.units()) {
    if (!u.trail || !trails_seen.insert(u.trail->id).second) continue;
    for (const auto& h : u.trail->hypotheses) {
      auto it = hypotheses_hold.find(h);
      if (it == hypotheses_hold.end())
        throw Error("missing-hypothesis-declaration",
                    "hypothesis '" + h + "' of trail '" + u.trail->id + "' was not declared");
      status.push_back({u.trail->id, h, it->second});
      all_hold = all_hold && it->second;
    }
  }

  std::vector<RouteUnit> specialized;
  for (const auto& u : tmpl.units()) {
    RouteUnit v;
    if (u.trail && u.trail->has_templates()) {
      Substitution local;
      if (u.substitution) {
        local = *u.substitution;
      } else {
        for (const auto& p : u.trail->params) local.bindings[p] = s.bindings.at(p);
      }
      v = instantiate_unit(*u.trail, local);
      v.two_way = u.two_way;
      v.compass = u.compass;
    } else {
      v = u;
      v.initial = rewritten_waypoint(u.initial, s.bindings);
      v.terminal = rewritten_waypoint(u.terminal, s.bindings);
    }
    specialized.push_back(std::move(v));
  }

  Routeway specialized_routeway = Routeway::empty(rewritten_waypoint(tmpl.start(), s.bindings));
  if (!specialized.empty()) {
    try {
      specialized_routeway = Routeway::make(std::move(specialized));
    } catch (const Error&) {
      throw Error("broken-chain-after-substitution",
                  "the specialized units no longer chain; the template binds a shared "
                  "waypoint inconsistently");
    }
  }
  return SimulationResult{std::move(specialized_routeway), std::move(status),
                          all_hold ? SimulationVerdict::Valid : SimulationVerdict::Inconclusive};
}

void apply_declared_invalidity(SimulationResult& result, bool specialized_invalid) {
  if (!specialized_invalid) return;
  if (result.verdict == SimulationVerdict::Valid)
    result.verdict = SimulationVerdict::RefutesGeneral;
}

std::string to_string(const DetectorVerdict& v) {
  if (v.refutes_general) return "refutes-general";
  if (v.reason && *v.reason == NoRefutationReason::HypothesisNotSatisfied)
    return "no-refutation (hypothesis-not-satisfied)";
  return "no-refutation (instance-valid)";
}

DetectorVerdict detect_counterexample(const Trail& trail, const Substitution& s,
                                      const std::map<std::string, bool>& hypotheses_hold,
                                      bool specialized_invalid) {
  check_bindings_cover(trail.params, s);
  bool all_hold = true;
  for (const auto& h : trail.hypotheses) {
    auto it = hypotheses_hold.find(h);
    if (it == hypotheses_hold.end())
      throw Error("missing-hypothesis-declaration",
                  "hypothesis '" + h + "' of trail '" + trail.id + "' was not declared");
    all_hold = all_hold && it->second;
  }
  if (!all_hold) return {false, NoRefutationReason::HypothesisNotSatisfied};
  if (specialized_invalid) return {true, std::nullopt};
  return {false, NoRefutationReason::InstanceValid};
}

}  // namespace routeway
