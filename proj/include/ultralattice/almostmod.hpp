#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ultralattice/lattice.hpp"

namespace ultralattice {

/// The module U/W with U = A_0·gens and W = A_0·relations inside A^n.
/// Serialized with "gens" either an explicit vector list or an integer m,
/// meaning the standard basis of A_0^m.
struct ModulePresentation {
  RingConfig cfg;
  CoeffRing coeff;
  int ambient_rank = 1;
  std::vector<Vector> gens;
  std::vector<Vector> relations;

  static ModulePresentation make(const RingConfig& cfg, CoeffRing coeff, int ambient_rank, std::vector<Vector> gens,
                                 std::vector<Vector> relations);
  /// A_0^m modulo the given relations.
  static ModulePresentation free_quotient(const RingConfig& cfg, CoeffRing coeff, int m, std::vector<Vector> relations);
  void validate() const;
};

void to_json(nlohmann::json& j, const ModulePresentation& P);
ModulePresentation presentation_from_json(const nlohmann::json& j);

/// A_0-linear map A^{n1} → A^{n2} restricted to source → target;
/// images[i] is the image of the i-th standard basis vector.
struct LatticeMap {
  Lattice source;
  Lattice target;
  std::vector<Vector> images;

  /// Checks shapes and that the image of every source generator lies in
  /// A_{≤1}·target; throws InvalidArgument otherwise.
  static LatticeMap make(Lattice source, Lattice target, std::vector<Vector> images);
  Vector apply(const Vector& x) const;
};

void to_json(nlohmann::json& j, const LatticeMap& f);
LatticeMap map_from_json(const nlohmann::json& j);

struct Verdict {
  enum class Outcome { Yes, No, Undecided };
  Outcome outcome = Outcome::Undecided;
  int depth = 0;
  int precision = 0;
  std::optional<Vector> witness;
  std::string note;

  bool yes() const { return outcome == Outcome::Yes; }
  bool no() const { return outcome == Outcome::No; }
};

std::string to_string(Verdict::Outcome o);
void to_json(nlohmann::json& j, const Verdict& v);

/// Torsion invariants: P_tor ≅ ⊕ A_0/T^{d_t} over the valuation ring.
struct TorsionInfo {
  std::vector<Rational> divisors;  // ascending exponents d_t
  int free_rank = 0;
};

/// Same module with N replaced (entries keep their terms).
ModulePresentation with_precision(const ModulePresentation& P, int N);
Lattice with_precision(const Lattice& L, int N);

ModulePresentation present_cokernel(const LatticeMap& f);
/// Kernel of f on A_{≤1}·source as a lattice in the source ambient space.
Lattice kernel_lattice(const LatticeMap& f);
ModulePresentation torsion_submodule(const ModulePresentation& P);
/// Elementary divisors of the torsion part and the free rank; unit-ball
/// presentations only. Cross-checked at precision 2N.
TorsionInfo torsion_info(const ModulePresentation& P);
/// Least grid s with T^s·P_tor = 0 (for monomial rings: T^t·P_tor = 0 for
/// every monoid exponent t ≥ s); nullopt stands for infinity.
std::optional<Rational> torsion_exponent(const ModulePresentation& P);

Verdict is_almost_zero(const ModulePresentation& P, int depth);
Verdict is_almost_iso(const LatticeMap& f, int depth);
Verdict isometry_check(const LatticeMap& f);

struct StrictnessReport {
  Rational m_tor;
  Rational m_est;
  /// gauge_image(w) ≥ gauge_target(w) - m_tor on every sample.
  bool estimate_holds = true;
  /// m_tor ≤ m_est + 2/p^n for n = 0..k.
  std::vector<bool> slack_ok;
  std::vector<std::string> witnesses;
  bool pass() const;
};

StrictnessReport strictness_bounds(const LatticeMap& f, const std::vector<Vector>& samples);

struct ComparisonBound {
  NormValue C;  // the constant 2^{2m} as a norm value
  Rational m;
  bool verified = true;
  std::vector<std::string> witnesses;
};

ComparisonBound seminorm_comparison_bound(const Lattice& L1, const Lattice& L2, const std::vector<Vector>& samples);

}  // namespace ultralattice
