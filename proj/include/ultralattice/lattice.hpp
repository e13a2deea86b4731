#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ultralattice/dvr.hpp"
#include "ultralattice/ring.hpp"

namespace ultralattice {

using Vector = std::vector<RingElement>;

Vector zero_vector(const RingConfig& cfg, int n);
Vector unit_vector(const RingConfig& cfg, int n, int i);
Vector vec_add(const Vector& a, const Vector& b);
Vector vec_sub(const Vector& a, const Vector& b);
Vector vec_scale(const RingElement& f, const Vector& v);
Vector vec_shift(const Vector& v, const Rational& s);
bool vec_is_zero(const Vector& v);
Vector vec_base_change(const Vector& v, int new_k);
/// Coordinate-max of elt_norm (the norm of the free module A^n).
NormValue vec_norm(const Vector& v);
Vector parse_vector(const std::vector<std::string>& entries, const RingConfig& cfg);
std::vector<std::string> render_vector(const Vector& v);

/// Coefficient ring A_0 over which a lattice's generators are spanned.
struct CoeffRing {
  enum class Kind { UnitBall, Monomial };
  Kind kind = Kind::UnitBall;
  /// Generators of the exponent monoid for Monomial (F_p[T^e : e ∈ gens]).
  std::vector<Rational> monomial_gens;

  static CoeffRing unit_ball() { return {}; }
  static CoeffRing monomial(std::vector<Rational> gens);
  bool is_unit_ball() const { return kind == Kind::UnitBall; }
  friend bool operator==(const CoeffRing&, const CoeffRing&) = default;
};

/// Exponent monoid of a monomial subring at a fixed level, as tick
/// membership plus its conductor (every tick >= conductor is in the monoid).
struct MonoidTable {
  std::int64_t conductor = 0;
  std::vector<bool> member;  // indices 0..conductor-1
  bool contains(std::int64_t tick) const {
    if (tick < 0) return false;
    return tick >= conductor || member[static_cast<std::size_t>(tick)];
  }
};
MonoidTable monoid_table(const CoeffRing& ring, const RingConfig& cfg);

/// Finitely generated submodule of A^rank.
struct Lattice {
  RingConfig cfg;
  int rank = 1;
  std::vector<Vector> generators;
  CoeffRing coeff;
  /// Set on results of almost_elements: the depth they were computed at.
  std::optional<int> depth;

  static Lattice make(const RingConfig& cfg, int rank, std::vector<Vector> gens, CoeffRing coeff = CoeffRing::unit_ball());
  /// A_{≤1}^rank.
  static Lattice unit_ball(const RingConfig& cfg, int rank);
  void validate() const;
};

void to_json(nlohmann::json& j, const Lattice& L);
Lattice lattice_from_json(const nlohmann::json& j);

/// Guard band (in ticks at the given level) for pivots close to T^N; read
/// from ULTRALATTICE_PRECISION_GUARD in units of T, default 1.
std::int64_t precision_guard_ticks(const RingConfig& cfg);

/// A lattice's A_{≤1}-span in echelon form, one per ring factor, ready for
/// repeated membership and gauge queries.
class PreparedLattice {
 public:
  explicit PreparedLattice(const Lattice& L);

  const Lattice& lattice() const { return lattice_; }
  const dvr::Window& window() const { return window_; }
  const dvr::HowellForm& form(int factor) const { return forms_.at(static_cast<std::size_t>(factor)); }
  /// Rank over the fraction field per factor (count of input-derived pivots).
  std::size_t rank(int factor) const { return forms_.at(static_cast<std::size_t>(factor)).essential_rank(); }

  /// x ∈ T^s·(A_{≤1}·L), s in ticks at this lattice's level.
  bool member_ticks(const Vector& x, std::int64_t s) const;
  bool member(const Vector& x, const Rational& s) const;
  /// Largest tick s with membership, per factor; nullopt for a zero factor.
  std::optional<std::int64_t> gauge_ticks(const Vector& x, int factor, std::int64_t step = 1) const;
  NormValue gauge(const Vector& x) const;

 private:
  Lattice lattice_;
  dvr::Window window_;
  std::vector<dvr::HowellForm> forms_;
};

dvr::Window lattice_window(const RingConfig& cfg);
dvr::Vec to_window(const Vector& v, int factor, const dvr::Window& w);
/// Back to ring elements, supported on one factor.
Vector from_window(const dvr::Vec& v, int factor, const dvr::Window& w, const RingConfig& cfg);

Lattice lattice_base_change(const Lattice& L, int new_k);
Lattice lattice_reduce(const Lattice& L);
bool membership(const Vector& x, const Lattice& L, const Rational& s);
NormValue gauge(const Vector& x, const Lattice& L);
Lattice unitball_span(const Lattice& L);
/// Every generator of `inner` lies in A_{≤1}·outer.
bool lattice_contains(const Lattice& outer, const Lattice& inner);
bool lattice_equal(const Lattice& a, const Lattice& b);

struct AlmostElements {
  Lattice lattice;
  int depth;
  /// Result of comparing against depth + 1; nullopt when not certified.
  std::optional<bool> stable;
};

AlmostElements almost_elements(const Lattice& L, int depth, bool certify = true);
NormValue canonical_pi_adic_norm(const Vector& x, const Lattice& L, int n);
NormValue discrete_norm_infimum(const Vector& x, const Lattice& L);

struct SubringReport {
  bool submultiplicative = true;
  std::optional<bool> power_multiplicative;
  std::optional<bool> multiplicative;
  std::vector<std::string> witnesses;
  bool pass() const {
    return submultiplicative && power_multiplicative.value_or(true) && multiplicative.value_or(true);
  }
};

/// Ring-seminorm checks for the gauge of a rank-1 subring lattice. When
/// `root_closed` is unset it is inferred: the saturation equals A_{≤1}.
SubringReport subring_gauge_checks(const Lattice& B0, const std::vector<RingElement>& samples,
                                   std::optional<bool> root_closed = std::nullopt);

}  // namespace ultralattice
