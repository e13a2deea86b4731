#pragma once

// Shared helpers between the module-level translation units.

#include <cstdint>
#include <vector>

#include "ultralattice/almostmod.hpp"

namespace ultralattice::detail {

struct TorsionSummand {
  std::int64_t ticks;  // T^{ticks/p^k} kills the summand exactly
  Vector generator;
};

/// P ≅ ⊕ A_{≤1}/T^{d_t}·b_t ⊕ free part, per factor, for unit-ball
/// presentations.
struct DvrDecomposition {
  std::vector<TorsionSummand> torsion;  // ascending ticks
  std::vector<Vector> free_basis;
};

DvrDecomposition decompose(const ModulePresentation& P);
/// decompose() plus a recomputation at precision 2N; throws
/// PrecisionUndecidable when the invariants differ.
DvrDecomposition certified_decompose(const ModulePresentation& P);
LatticeMap with_precision(const LatticeMap& f, int N);

}  // namespace ultralattice::detail
