#include "ultralattice/ring.hpp"

#include <algorithm>
#include <cctype>

namespace ultralattice {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint8_t reduce_mod(std::int64_t c, int p) {
  std::int64_t r = c % p;
  if (r < 0) r += p;
  return static_cast<std::uint8_t>(r);
}

std::uint8_t inv_mod(std::uint8_t a, int p) {
  for (int x = 1; x < p; ++x)
    if ((a * x) % p == 1) return static_cast<std::uint8_t>(x);
  throw Error(ErrorKind::NotInvertible, "zero coefficient");
}

void require_same(const RingElement& a, const RingElement& b) {
  if (!(a.config() == b.config())) throw Error(ErrorKind::ConfigMismatch, "ring elements from different configurations");
}

void add_term(RingElement::Terms& t, std::int64_t tick, std::int64_t c, int p) {
  std::uint8_t v = reduce_mod(c + t[tick], p);
  if (v == 0)
    t.erase(tick);
  else
    t[tick] = v;
}

}  // namespace

RingConfig RingConfig::make(int p, int k, int N, int factors) { return make(p, k, N, factors, -N); }

RingConfig RingConfig::make(int p, int k, int N, int factors, int floor) {
  RingConfig c;
  c.p = p;
  c.k = k;
  c.N = N;
  c.factors = factors;
  c.floor = floor;
  c.validate();
  return c;
}

RingConfig RingConfig::at_level(int level) const {
  RingConfig c = *this;
  c.k = level;
  c.validate();
  return c;
}

void RingConfig::validate() const {
  if (!is_prime(p) || p > 97) throw Error(ErrorKind::InvalidArgument, "p must be a prime below 100, got " + std::to_string(p));
  if (k < 0 || k > 12) throw Error(ErrorKind::InvalidArgument, "root depth k must be in [0, 12]");
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "precision N must be >= 1");
  if (factors < 1) throw Error(ErrorKind::InvalidArgument, "factors must be >= 1");
  if (floor > 0) throw Error(ErrorKind::InvalidArgument, "exponent floor must be <= 0");
  if (scale() * (static_cast<std::int64_t>(N) - floor) > (1 << 22))
    throw Error(ErrorKind::InvalidArgument, "configuration too large for the dense kernels");
}

void to_json(nlohmann::json& j, const RingConfig& cfg) {
  j = nlohmann::json{{"p", cfg.p}, {"k", cfg.k}, {"N", cfg.N}, {"factors", cfg.factors}};
  if (cfg.floor != -cfg.N) j["floor"] = cfg.floor;
}

void from_json(const nlohmann::json& j, RingConfig& cfg) {
  cfg.p = j.value("p", 2);
  cfg.k = j.value("k", 0);
  cfg.N = j.value("N", 16);
  cfg.factors = j.value("factors", 1);
  cfg.floor = j.value("floor", -cfg.N);
  cfg.validate();
}

std::int64_t exponent_to_ticks(const Rational& e, const RingConfig& cfg) {
  auto j = p_power_exponent(e.den(), cfg.p);
  if (!j)
    throw Error(ErrorKind::NotPPowerDenominator, "exponent " + e.str() + " is not in Z[1/" + std::to_string(cfg.p) + "]");
  if (*j > cfg.k)
    throw Error(ErrorKind::DepthExceeded,
                "exponent " + e.str() + " needs root depth " + std::to_string(*j) + " > k = " + std::to_string(cfg.k));
  return *e.scaled(cfg.scale());
}

// ---------------------------------------------------------------------------

RingElement::RingElement(const RingConfig& cfg) : cfg_(cfg), terms_(static_cast<std::size_t>(cfg.factors)) {}

RingElement::RingElement(const RingConfig& cfg, std::vector<Terms> per_factor, bool truncated)
    : cfg_(cfg), terms_(std::move(per_factor)), truncated_(truncated) {
  if (terms_.size() != static_cast<std::size_t>(cfg.factors))
    throw Error(ErrorKind::ConfigMismatch, "factor count does not match configuration");
  const std::int64_t lo = static_cast<std::int64_t>(cfg.floor) * cfg.scale();
  const std::int64_t hi = static_cast<std::int64_t>(cfg.N) * cfg.scale();
  for (auto& t : terms_) {
    for (auto it = t.begin(); it != t.end();) {
      if (it->second % cfg.p == 0) {
        it = t.erase(it);
        continue;
      }
      it->second = static_cast<std::uint8_t>(it->second % cfg.p);
      if (it->first < lo) throw Error(ErrorKind::PrecisionExceeded, "exponent below the Laurent floor");
      if (it->first >= hi) throw Error(ErrorKind::PrecisionExceeded, "exponent at or above T^N");
      ++it;
    }
  }
}

RingElement RingElement::monomial(const RingConfig& cfg, const Rational& e, int coeff) {
  std::int64_t t = exponent_to_ticks(e, cfg);
  std::vector<Terms> per(static_cast<std::size_t>(cfg.factors));
  std::uint8_t c = reduce_mod(coeff, cfg.p);
  if (c != 0)
    for (auto& f : per) f[t] = c;
  return RingElement(cfg, std::move(per), false);
}

RingElement RingElement::factor_monomial(const RingConfig& cfg, int factor, const Rational& e, int coeff) {
  std::int64_t t = exponent_to_ticks(e, cfg);
  std::vector<Terms> per(static_cast<std::size_t>(cfg.factors));
  std::uint8_t c = reduce_mod(coeff, cfg.p);
  if (c != 0) per.at(static_cast<std::size_t>(factor))[t] = c;
  return RingElement(cfg, std::move(per), false);
}

bool RingElement::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Terms& t) { return t.empty(); });
}

std::size_t RingElement::support_size() const {
  std::size_t n = 0;
  for (const auto& t : terms_) n += t.size();
  return n;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ElementParser {
 public:
  ElementParser(std::string_view text, const RingConfig& cfg) : text_(text), cfg_(cfg) {}

  RingElement parse() {
    skip_ws();
    std::vector<RingElement::Terms> per;
    if (peek() == '(') {
      ++pos_;
      per.push_back(parse_sum());
      while (accept('|')) per.push_back(parse_sum());
      expect(')', "')' closing the factor tuple");
      if (per.size() != static_cast<std::size_t>(cfg_.factors))
        fail("tuple has " + std::to_string(per.size()) + " components, configuration has " +
             std::to_string(cfg_.factors) + " factors");
    } else {
      auto t = parse_sum();
      per.assign(static_cast<std::size_t>(cfg_.factors), t);
    }
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "', expected end of input");
    return RingElement(cfg_, std::move(per), false);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::SyntaxError, "at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c, const std::string& what) {
    if (!accept(c)) fail("expected " + what);
  }

  std::int64_t parse_uint() {
    skip_ws();
    std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > (std::int64_t{1} << 40)) fail("integer literal too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected an integer");
    return v;
  }

  Rational parse_rational() {
    bool neg = accept('-');
    std::int64_t n = parse_uint();
    std::int64_t d = 1;
    if (accept('/')) {
      d = parse_uint();
      if (d == 0) fail("zero denominator");
    }
    return Rational(neg ? -n : n, d);
  }

  RingElement::Terms parse_sum() {
    RingElement::Terms out;
    int sign = 1;
    if (accept('-'))
      sign = -1;
    else
      accept('+');
    parse_term(out, sign);
    for (;;) {
      if (accept('+'))
        sign = 1;
      else if (accept('-'))
        sign = -1;
      else
        break;
      parse_term(out, sign);
    }
    return out;
  }

  void parse_term(RingElement::Terms& out, int sign) {
    std::int64_t coeff = sign;
    Rational exponent(0);
    parse_factor(coeff, exponent);
    while (accept('*')) parse_factor(coeff, exponent);
    const std::int64_t lo = static_cast<std::int64_t>(cfg_.floor) * cfg_.scale();
    const std::int64_t hi = static_cast<std::int64_t>(cfg_.N) * cfg_.scale();
    std::int64_t t = exponent_to_ticks(exponent, cfg_);
    if (reduce_mod(coeff, cfg_.p) == 0) return;
    if (t >= hi) throw Error(ErrorKind::PrecisionExceeded, "exponent " + exponent.str() + " >= N = " + std::to_string(cfg_.N));
    if (t < lo)
      throw Error(ErrorKind::PrecisionExceeded, "exponent " + exponent.str() + " below floor " + std::to_string(cfg_.floor));
    add_term(out, t, coeff, cfg_.p);
  }

  void parse_factor(std::int64_t& coeff, Rational& exponent) {
    char c = peek();
    if (c == 'T') {
      ++pos_;
      Rational e(1);
      if (accept('^')) {
        if (accept('('))  {
          e = parse_rational();
          expect(')', "')' after exponent");
        } else {
          e = Rational(parse_uint());
        }
      }
      exponent_to_ticks(e, cfg_);  // each monomial must itself be representable
      exponent += e;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      coeff = reduce_mod(coeff * reduce_mod(parse_uint(), cfg_.p), cfg_.p);
      return;
    }
    fail(c == '\0' ? "unexpected end of input, expected coefficient or 'T'"
                   : "unexpected '" + std::string(1, c) + "', expected coefficient or 'T'");
  }

  std::string_view text_;
  const RingConfig& cfg_;
  std::size_t pos_ = 0;
};

std::string render_terms(const RingElement::Terms& t, const RingConfig& cfg) {
  if (t.empty()) return "0";
  std::string out;
  for (const auto& [tick, c] : t) {
    if (!out.empty()) out += " + ";
    Rational e = ticks_to_exponent(tick, cfg);
    if (e == Rational(0)) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c) + "*";
    out += "T";
    if (e == Rational(1)) continue;
    if (e.is_integer() && e.num() > 0)
      out += "^" + e.str();
    else
      out += "^(" + e.str() + ")";
  }
  return out;
}

}  // namespace

RingElement parse_element(std::string_view text, const RingConfig& cfg) {
  cfg.validate();
  return ElementParser(text, cfg).parse();
}

std::string render_element(const RingElement& x) {
  const auto& cfg = x.config();
  if (cfg.factors == 1) return render_terms(x.factor(0), cfg);
  std::string out = "(";
  for (int i = 0; i < cfg.factors; ++i) {
    if (i) out += " | ";
    out += render_terms(x.factor(i), cfg);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Arithmetic

RingElement elt_add(const RingElement& a, const RingElement& b) {
  require_same(a, b);
  const int p = a.config().p;
  std::vector<RingElement::Terms> out = a.factors();
  for (std::size_t f = 0; f < out.size(); ++f)
    for (const auto& [t, c] : b.factors()[f]) add_term(out[f], t, c, p);
  return RingElement(a.config(), std::move(out), a.truncated() || b.truncated());
}

RingElement elt_neg(const RingElement& a) { return elt_scalar(a, -1); }

RingElement elt_sub(const RingElement& a, const RingElement& b) { return elt_add(a, elt_neg(b)); }

RingElement elt_scalar(const RingElement& x, int c) {
  const int p = x.config().p;
  std::uint8_t cc = reduce_mod(c, p);
  std::vector<RingElement::Terms> out(x.factors().size());
  if (cc != 0)
    for (std::size_t f = 0; f < out.size(); ++f)
      for (const auto& [t, v] : x.factors()[f]) out[f][t] = static_cast<std::uint8_t>((v * cc) % p);
  return RingElement(x.config(), std::move(out), x.truncated());
}

RingElement elt_mul(const RingElement& a, const RingElement& b) {
  require_same(a, b);
  const auto& cfg = a.config();
  const std::int64_t lo = static_cast<std::int64_t>(cfg.floor) * cfg.scale();
  const std::int64_t hi = static_cast<std::int64_t>(cfg.N) * cfg.scale();
  bool truncated = a.truncated() || b.truncated();
  std::vector<RingElement::Terms> out(a.factors().size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    for (const auto& [ta, ca] : a.factors()[f]) {
      for (const auto& [tb, cb] : b.factors()[f]) {
        std::int64_t t = ta + tb;
        if (t >= hi) {
          truncated = true;
          continue;
        }
        if (t < lo) throw Error(ErrorKind::PrecisionExceeded, "product has an exponent below the Laurent floor");
        add_term(out[f], t, ca * cb, cfg.p);
      }
    }
  }
  return RingElement(cfg, std::move(out), truncated);
}

RingElement elt_pow(const RingElement& a, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative power");
  RingElement r = RingElement::one(a.config());
  for (int i = 0; i < n; ++i) r = elt_mul(r, a);
  return r;
}

RingElement elt_shift(const RingElement& x, const Rational& s) {
  const auto& cfg = x.config();
  std::int64_t ds = exponent_to_ticks(s, cfg);
  const std::int64_t lo = static_cast<std::int64_t>(cfg.floor) * cfg.scale();
  const std::int64_t hi = static_cast<std::int64_t>(cfg.N) * cfg.scale();
  bool truncated = x.truncated();
  std::vector<RingElement::Terms> out(x.factors().size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    for (const auto& [t, c] : x.factors()[f]) {
      if (t + ds >= hi) {
        truncated = true;
        continue;
      }
      if (t + ds < lo) throw Error(ErrorKind::PrecisionExceeded, "shift moves a term below the Laurent floor");
      out[f][t + ds] = c;
    }
  }
  return RingElement(cfg, std::move(out), truncated);
}

RingElement elt_inverse(const RingElement& x) {
  const auto& cfg = x.config();
  const int p = cfg.p;
  const std::int64_t lo = static_cast<std::int64_t>(cfg.floor) * cfg.scale();
  const std::int64_t hi = static_cast<std::int64_t>(cfg.N) * cfg.scale();
  bool truncated = x.truncated();
  std::vector<RingElement::Terms> out(x.factors().size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    const auto& t = x.factors()[f];
    if (t.empty()) throw Error(ErrorKind::NotInvertible, "factor " + std::to_string(f) + " is zero");
    const std::int64_t v = t.begin()->first;
    if (-v < lo) throw Error(ErrorKind::NotInvertible, "inverse leaves the Laurent range");
    const std::uint8_t lead_inv = inv_mod(t.begin()->second, p);
    // normalized unit w = lead^{-1} T^{-v} x = 1 + h; solve w·y = 1 term by term
    const std::int64_t len = hi + v;  // y needs ticks < hi - (-v)
    if (len <= 0) throw Error(ErrorKind::NotInvertible, "inverse lies entirely beyond precision");
    std::vector<std::pair<std::int64_t, std::uint8_t>> h;
    for (const auto& [tick, c] : t)
      if (tick != v) h.emplace_back(tick - v, static_cast<std::uint8_t>((c * lead_inv) % p));
    std::vector<std::uint8_t> y(static_cast<std::size_t>(len), 0);
    y[0] = 1;
    for (std::int64_t i = 1; i < len; ++i) {
      int acc = 0;
      for (const auto& [d, c] : h) {
        if (d > i) break;
        acc += c * y[static_cast<std::size_t>(i - d)];
      }
      y[static_cast<std::size_t>(i)] = reduce_mod(-acc, p);
    }
    if (!h.empty()) truncated = true;
    for (std::int64_t i = 0; i < len; ++i)
      if (y[static_cast<std::size_t>(i)]) out[f][i - v] = static_cast<std::uint8_t>((y[static_cast<std::size_t>(i)] * lead_inv) % p);
  }
  return RingElement(cfg, std::move(out), truncated);
}

// ---------------------------------------------------------------------------
// Norms

NormValue elt_norm(const RingElement& x) {
  const auto& cfg = x.config();
  bool any = false;
  std::int64_t best = 0;
  for (const auto& t : x.factors()) {
    if (t.empty()) continue;
    if (!any || t.begin()->first < best) best = t.begin()->first;
    any = true;
  }
  if (!any) return x.truncated() ? NormValue::below_precision(cfg.N) : NormValue::zero();
  return NormValue::exact(ticks_to_exponent(best, cfg));
}

NormValue spectral_seminorm(const RingElement& x, int n_max) {
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be positive");
  if (x.is_zero()) return elt_norm(x);
  RingElement power = x;
  Rational best_exponent(0);
  bool have = false;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) power = elt_mul(power, x);
    NormValue v = elt_norm(power);
    if (!v.is_exact())
      throw Error(ErrorKind::PrecisionExceeded, "x^" + std::to_string(n) + " truncates to zero before n_max");
    Rational root = v.exponent() / Rational(n);
    if (!have || root > best_exponent) best_exponent = root;
    have = true;
  }
  NormValue result = nv_from_exponent(best_exponent, x.config().p);
  // the model norm is power-multiplicative (max of valuations per factor)
  if (!(result == elt_norm(x)))
    throw Error(ErrorKind::InvalidArgument, "spectral seminorm differs from the power-multiplicative model norm");
  return result;
}

bool is_norm_multiplicative_unit(const RingElement& x) {
  RingElement inv = elt_inverse(x);
  NormValue prod = nv_mul(elt_norm(x), elt_norm(inv));
  bool result = prod == NormValue::exact(Rational(0));
  if (x.config().factors == 1 && !result)
    throw Error(ErrorKind::InvalidArgument, "nonzero element of the field model failed norm-multiplicativity");
  return result;
}

RingElement base_change_level(const RingElement& x, int new_k) {
  const auto& cfg = x.config();
  if (new_k < cfg.k) throw Error(ErrorKind::InvalidArgument, "base change must not lower the root depth");
  RingConfig target = cfg.at_level(new_k);
  const std::int64_t mult = ipow(cfg.p, new_k - cfg.k);
  std::vector<RingElement::Terms> out(x.factors().size());
  for (std::size_t f = 0; f < out.size(); ++f)
    for (const auto& [t, c] : x.factors()[f]) out[f][t * mult] = c;
  return RingElement(target, std::move(out), x.truncated());
}

}  // namespace ultralattice
