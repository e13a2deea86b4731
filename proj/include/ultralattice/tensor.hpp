#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ultralattice/almostmod.hpp"

namespace ultralattice {

/// Entry (i, j) at index i·|w| + j.
Vector kron(const Vector& v, const Vector& w);

struct TensorResult {
  /// L1 ⊗ L2 over the coefficient ring, free on the symbols g_i ⊗ h_j
  /// modulo the relations induced by the syzygies of each side.
  ModulePresentation presentation;
  /// Image of the presentation in A^{n1·n2}: (L1 ⊗ L2)/torsion.
  Lattice torsion_free_part;
  bool has_torsion = false;
  /// Some product g_i ⊗ h_j lost terms at or above T^N.
  bool truncated = false;
  std::vector<std::string> notes;
};

void to_json(nlohmann::json& j, const TensorResult& r);

TensorResult tensor_lattices(const Lattice& L1, const Lattice& L2);

/// Gauge against the saturation of the torsion-free part.
NormValue tensor_gauge(const Vector& x, const TensorResult& t);
NormValue tensor_gauge(const Vector& x, const Lattice& L1, const Lattice& L2);

/// Best value of max_i gauge(v_i)·gauge(w_i) over decompositions
/// x = Σ c_i·T^{σ_i}·(v_i ⊗ w_i) with at most `budget` summands, v_i and w_i
/// drawn from the reduced generators and the standard basis. Single-factor
/// rings only. Throws BudgetExceeded when no decomposition fits.
NormValue tensor_norm_oracle(const Vector& x, const Lattice& L1, const Lattice& L2, int budget);

/// Almost elements of the torsion-free part.
Lattice tensor_unit_ball(const Lattice& L1, const Lattice& L2, int depth);

/// Kernel of multiplication by T^t on L/T^{s+t}L equals T^s·(L/T^{s+t}L).
/// nullopt when s + t does not fit in the precision window.
std::optional<bool> torsion_free_kernel_check(const Lattice& L, const Rational& s, const Rational& t);

/// The tensor presentation is torsion-free and the kernel identity above
/// holds on both lattices for a few (s, t). Undecided for monomial
/// coefficient rings.
Verdict flatness_torsion_check(const Lattice& L1, const Lattice& L2);

}  // namespace ultralattice
