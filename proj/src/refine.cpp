#include "routeway/refine.hpp"

namespace routeway {

namespace {

std::vector<WaypointKey> boundary_keys(const Routeway& g) {
  std::vector<WaypointKey> keys;
  keys.reserve(g.length() + 1);
  keys.push_back(waypoint_key(g.start()));
  for (const auto& u : g.units()) keys.push_back(waypoint_key(u.terminal));
  return keys;
}

}  // namespace

std::optional<RefinementWitness> refines(const Routeway& gamma, const Routeway& eta) {
  if (gamma.start() != eta.start() || gamma.end() != eta.end())
    throw Error("endpoint-mismatch", "refinement compares routeways with shared endpoints");

  const auto gk = boundary_keys(gamma);
  const auto ek = boundary_keys(eta);
  const std::size_t n = gamma.length();
  const std::size_t m = eta.length();

  // feasible[i][j]: boundaries i..n of gamma can be placed with boundary i at
  // eta position j (blocks strictly advance, the last lands exactly on m).
  std::vector<std::vector<char>> feasible(n + 1, std::vector<char>(m + 1, 0));
  feasible[n][m] = (gk[n] == ek[m]);
  for (std::size_t i = n; i-- > 0;) {
    bool suffix_any = false;  // any feasible[i+1][j'] with j' > j
    for (std::size_t j = m + 1; j-- > 0;) {
      if (j < m) suffix_any = suffix_any || feasible[i + 1][j + 1];
      feasible[i][j] = suffix_any && gk[i] == ek[j];
    }
  }
  if (!feasible[0][0]) return std::nullopt;

  RefinementWitness witness;
  std::size_t at = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t next = at + 1;
    while (!feasible[i + 1][next]) ++next;
    witness.blocks.push_back({i, at, next});
    at = next;
  }
  return witness;
}

bool presentation_equivalent(const Routeway& gamma, const Routeway& eta) {
  return refines(gamma, eta).has_value() && refines(eta, gamma).has_value();
}

Routeway irreducible_refinement(const Routeway& gamma,
                                const std::map<std::size_t, Routeway>& expansions,
                                const BaseField& field) {
  for (const auto& [index, expansion] : expansions) {
    (void)expansion;
    if (index >= gamma.length())
      throw Error("unknown-unit-index",
                  "expansion index " + std::to_string(index) + " is past the end of the routeway");
  }
  if (gamma.length() == 0) return gamma;

  std::vector<RouteUnit> result;
  for (std::size_t i = 0; i < gamma.length(); ++i) {
    const RouteUnit& unit = gamma.units()[i];
    auto it = expansions.find(i);
    const Routeway block = (it != expansions.end()) ? it->second : Routeway::single(unit);
    if (block.length() == 0)
      throw Error("empty-expansion",
                  "unit " + std::to_string(i) + " must expand to a nonempty routeway");
    if (block.start() != unit.initial || block.end() != unit.terminal)
      throw Error("endpoint-mismatch",
                  "expansion of unit " + std::to_string(i) + " has different endpoints");
    if (!is_irreducible_routeway(block, field)) {
      for (std::size_t b = 0; b < block.length(); ++b) {
        if (!is_irreducible(block.units()[b], field))
          throw Error("block-not-irreducible",
                      "expansion of unit " + std::to_string(i) + " has a reducible unit at " +
                          std::to_string(b));
      }
    }
    result.insert(result.end(), block.units().begin(), block.units().end());
  }
  return Routeway::make(std::move(result));
}

}  // namespace routeway
