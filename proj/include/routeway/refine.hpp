#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "routeway/core.hpp"

namespace routeway {

/// How eta was obtained from gamma: block i replaces gamma's unit
/// `gamma_index` with eta's units [eta_begin, eta_end). Blocks are nonempty,
/// consecutive, and partition eta's unit list.
struct RefinementBlock {
  std::size_t gamma_index = 0;
  std::size_t eta_begin = 0;
  std::size_t eta_end = 0;
};

struct RefinementWitness {
  std::vector<RefinementBlock> blocks;
};

/// Decide gamma <= eta: can eta's waypoint sequence be split into consecutive
/// nonempty blocks whose boundaries are gamma's waypoint sequence, in order?
/// Only boundary waypoints matter; interior waypoints and all trails are
/// unconstrained. Returns the leftmost witness (each block as short as
/// possible) or nullopt. Throws endpoint-mismatch when the two routeways do
/// not share start and destination.
std::optional<RefinementWitness> refines(const Routeway& gamma, const Routeway& eta);

/// Mutual refinement: gamma <= eta and eta <= gamma.
bool presentation_equivalent(const Routeway& gamma, const Routeway& eta);

/// Replace each unit of gamma by its expansion (or by itself when no
/// expansion is given) and concatenate. Every expansion must be an
/// irreducible routeway under `field` with the same endpoints as the unit it
/// replaces; the result is then an irreducible refinement of gamma.
/// Throws endpoint-mismatch, empty-expansion, block-not-irreducible, or
/// unknown-unit-index.
Routeway irreducible_refinement(const Routeway& gamma,
                                const std::map<std::size_t, Routeway>& expansions,
                                const BaseField& field);

}  // namespace routeway
