#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ultralattice/rational.hpp"
#include "ultralattice/valnorm.hpp"

namespace ultralattice {

/// Parameters of the truncated model ring: Laurent series in T^{1/p^k} over
/// F_p, exponents in [floor, N), optionally a product of `factors` copies.
struct RingConfig {
  int p = 2;
  int k = 0;
  int N = 16;
  int factors = 1;
  int floor = -16;

  static RingConfig make(int p, int k, int N, int factors = 1);
  static RingConfig make(int p, int k, int N, int factors, int floor);

  /// p^k: exponents are stored as integer multiples ("ticks") of 1/p^k.
  std::int64_t scale() const { return ipow(p, k); }
  RingConfig at_level(int level) const;
  void validate() const;

  friend bool operator==(const RingConfig&, const RingConfig&) = default;
};

void to_json(nlohmann::json& j, const RingConfig& cfg);
void from_json(const nlohmann::json& j, RingConfig& cfg);

/// Exponent as ticks at level k; throws DepthExceeded / NotPPowerDenominator.
std::int64_t exponent_to_ticks(const Rational& e, const RingConfig& cfg);
inline Rational ticks_to_exponent(std::int64_t t, const RingConfig& cfg) { return Rational(t, cfg.scale()); }

/// Element of the truncated model ring. Per factor, a sparse map from
/// exponent ticks to nonzero F_p coefficients. Immutable after construction
/// from the public API.
class RingElement {
 public:
  using Terms = std::map<std::int64_t, std::uint8_t>;

  explicit RingElement(const RingConfig& cfg);
  RingElement(const RingConfig& cfg, std::vector<Terms> per_factor, bool truncated);

  static RingElement zero(const RingConfig& cfg) { return RingElement(cfg); }
  static RingElement one(const RingConfig& cfg) { return monomial(cfg, Rational(0)); }
  /// c·T^e in every factor.
  static RingElement monomial(const RingConfig& cfg, const Rational& e, int coeff = 1);
  /// c·T^e in a single factor, zero elsewhere.
  static RingElement factor_monomial(const RingConfig& cfg, int factor, const Rational& e, int coeff = 1);

  const RingConfig& config() const { return cfg_; }
  const Terms& factor(int i) const { return terms_.at(static_cast<std::size_t>(i)); }
  const std::vector<Terms>& factors() const { return terms_; }
  /// Set when some arithmetic step dropped terms at or above T^N.
  bool truncated() const { return truncated_; }
  bool is_zero() const;
  /// Number of monomials summed over factors.
  std::size_t support_size() const;

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return a.cfg_ == b.cfg_ && a.terms_ == b.terms_;
  }

 private:
  RingConfig cfg_;
  std::vector<Terms> terms_;
  bool truncated_ = false;
};

RingElement parse_element(std::string_view text, const RingConfig& cfg);
std::string render_element(const RingElement& x);

RingElement elt_add(const RingElement& a, const RingElement& b);
RingElement elt_sub(const RingElement& a, const RingElement& b);
RingElement elt_neg(const RingElement& a);
RingElement elt_mul(const RingElement& a, const RingElement& b);
RingElement elt_pow(const RingElement& a, int n);
/// T^s·x, exact (no truncation flag) unless terms leave [floor, N).
RingElement elt_shift(const RingElement& x, const Rational& s);
RingElement elt_scalar(const RingElement& x, int c);
/// Inverse at the working precision; throws NotInvertible if a factor is 0.
RingElement elt_inverse(const RingElement& x);

NormValue elt_norm(const RingElement& x);
NormValue spectral_seminorm(const RingElement& x, int n_max);
bool is_norm_multiplicative_unit(const RingElement& x);
RingElement base_change_level(const RingElement& x, int new_k);

}  // namespace ultralattice
