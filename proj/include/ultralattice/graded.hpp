#pragma once

// Modules over a monomial subring A_0 = F_p[T^S] whose generators and
// relations are homogeneous (T^d times a constant vector). Every graded
// piece is a finite F_p-space, so kernels, torsion and minimal generators
// are exact finite computations degree by degree.

#include <cstdint>
#include <optional>
#include <vector>

#include "ultralattice/fp.hpp"
#include "ultralattice/lattice.hpp"

namespace ultralattice::graded {

/// T^deg·c with deg in ticks.
struct Homogeneous {
  std::int64_t deg;
  fp::Row c;
};

/// nullopt unless v is T^d times an F_p vector (single-factor rings only).
std::optional<Homogeneous> homogeneous(const Vector& v);
Homogeneous require_homogeneous(const Vector& v);
Vector to_vector(const Homogeneous& h, const RingConfig& cfg);

/// Degree-d piece of the A_0-span of `gens`: span{c_g : d - deg_g ∈ S}.
fp::Subspace degree_part(int p, std::size_t n, const MonoidTable& S, const std::vector<Homogeneous>& gens, std::int64_t d);

/// Minimal homogeneous generators of the A_0-span of `gens`.
std::vector<Homogeneous> minimal_generators(int p, std::size_t n, const MonoidTable& S, const std::vector<Homogeneous>& gens);

/// Generators of the syzygy module of `gens`, as homogeneous vectors in
/// coordinates of ⊕_i A_0·gen_i: entry i of c is the coefficient of
/// T^{deg - deg_i}·gen_i.
std::vector<Homogeneous> syzygies(int p, std::size_t n, const MonoidTable& S, const std::vector<Homogeneous>& gens);

struct Torsion {
  /// Minimal homogeneous generators of the torsion classes (lifts into U).
  std::vector<Homogeneous> gens;
  /// dim_{F_p} of each nonzero graded piece of the torsion submodule.
  std::vector<std::pair<std::int64_t, std::size_t>> dims;
  /// Least s ∈ S (ticks) with T^t·P_tor = 0 for all t ∈ S, t ≥ s; 0 if none.
  std::int64_t exponent = 0;
};

/// Torsion of (A_0·U)/(A_0·W).
Torsion torsion(int p, std::size_t n, const MonoidTable& S, const std::vector<Homogeneous>& U,
                const std::vector<Homogeneous>& W);

}  // namespace ultralattice::graded
