#include <algorithm>
#include <stdexcept>

#include "ultralattice/error.hpp"
#include "ultralattice/lattice.hpp"

namespace ultralattice {

namespace {

int level_of(const Rational& s, int p) {
  auto j = p_power_exponent(s.den(), p);
  if (!j) throw Error(ErrorKind::NotPPowerDenominator, "exponent " + s.str() + " is not on a p-power grid");
  return *j;
}

int vector_level(const Vector& x, int fallback) {
  int k = fallback;
  for (const auto& e : x) k = std::max(k, e.config().k);
  return k;
}

std::int64_t abs_valuation(const dvr::Vec& v, const dvr::Window& w) {
  return w.lo + static_cast<std::int64_t>(dvr::valuation(v));
}

Lattice compute_almost(const Lattice& L, int K) {
  const Lattice S = lattice_base_change(unitball_span(L), K);
  const auto w = lattice_window(S.cfg);
  const auto n = static_cast<std::size_t>(S.rank);
  const int p = S.cfg.p;
  const std::int64_t limit = w.hi - precision_guard_ticks(S.cfg);
  std::vector<Vector> gens;
  for (int f = 0; f < S.cfg.factors; ++f) {
    std::vector<dvr::Vec> base;
    for (const auto& g : S.generators) {
      auto v = to_window(g, f, w);
      if (!dvr::is_zero(v)) base.push_back(std::move(v));
    }
    if (base.empty()) continue;

    // T^{-1/p^j}·S for j = 1..K, all at level K.
    std::vector<dvr::Vec> cur = base;
    for (int j = 1; j <= K; ++j) {
      std::vector<dvr::Vec> shifted;
      for (const auto& b : base) {
        auto s = dvr::shift(b, -ipow(p, K - j));
        if (!s) throw Error(ErrorKind::PrecisionLoss, "root shift leaves the working window");
        shifted.push_back(std::move(*s));
      }
      cur = dvr::intersect(w, n, cur, shifted);
    }

    // The level-K elements of T^{-1/p^{K+1}}·S_{K+1}: write level-(K+1)
    // vectors as p blocks of level-K vectors (tick p·q + j goes to block j)
    // and keep the part supported on block 0. Block 0 is placed last.
    auto block_col = [&](int j) { return (j == 0 ? static_cast<std::size_t>(p - 1) : static_cast<std::size_t>(j - 1)) * n; };
    std::vector<dvr::Vec> rows;
    for (const auto& b : base) {
      // w^{i-1}·g for w = T^{1/p^{K+1}}: i >= 1 lands in block i-1 unchanged,
      // i = 0 lands in block p-1 shifted down by one level-K tick.
      for (int i = 0; i < p; ++i) {
        dvr::Vec row = w.zero_vec(static_cast<std::size_t>(p) * n);
        dvr::Vec piece = b;
        int block = i - 1;
        if (i == 0) {
          auto s = dvr::shift(b, -1);
          if (!s) throw Error(ErrorKind::PrecisionLoss, "root shift leaves the working window");
          piece = std::move(*s);
          block = p - 1;
        }
        std::copy(piece.begin(), piece.end(), row.begin() + static_cast<std::ptrdiff_t>(block_col(block)));
        rows.push_back(std::move(row));
      }
    }
    auto descent = dvr::trailing_block(dvr::HowellForm::build(w, static_cast<std::size_t>(p) * n, std::move(rows)),
                                       static_cast<std::size_t>(p - 1) * n);
    cur = dvr::intersect(w, n, cur, descent);

    for (const auto& r : cur)
      if (!dvr::is_zero(r) && abs_valuation(r, w) < limit) gens.push_back(from_window(r, f, w, S.cfg));
  }
  Lattice out = lattice_reduce(Lattice::make(S.cfg, S.rank, std::move(gens)));
  out.depth = K;
  return out;
}

}  // namespace

Lattice lattice_base_change(const Lattice& L, int new_k) {
  if (new_k == L.cfg.k) return L;
  std::vector<Vector> gens;
  for (const auto& g : L.generators) gens.push_back(vec_base_change(g, new_k));
  Lattice out = Lattice::make(L.cfg.at_level(new_k), L.rank, std::move(gens), L.coeff);
  out.depth = L.depth;
  return out;
}

Lattice lattice_reduce(const Lattice& L) {
  if (!L.coeff.is_unit_ball()) throw Error(ErrorKind::InvalidArgument, "lattice_reduce needs a unit-ball coefficient ring");
  PreparedLattice prepared(L);
  std::vector<Vector> gens;
  for (int f = 0; f < L.cfg.factors; ++f)
    for (const auto& r : prepared.form(f).rows())
      if (r.essential) gens.push_back(from_window(r.v, f, prepared.window(), L.cfg));
  Lattice out = Lattice::make(L.cfg, L.rank, std::move(gens));
  out.depth = L.depth;
  return out;
}

bool membership(const Vector& x, const Lattice& L, const Rational& s) {
  if (vec_is_zero(x)) return true;
  const int level = std::max({L.cfg.k, vector_level(x, L.cfg.k), level_of(s, L.cfg.p)});
  PreparedLattice prepared(lattice_base_change(L, level));
  return prepared.member(vec_base_change(x, level), s);
}

NormValue gauge(const Vector& x, const Lattice& L) {
  if (vec_is_zero(x)) return NormValue::zero();
  const int level = std::max(L.cfg.k, vector_level(x, L.cfg.k));
  PreparedLattice prepared(lattice_base_change(L, level));
  return prepared.gauge(vec_base_change(x, level));
}

Lattice unitball_span(const Lattice& L) {
  Lattice out = Lattice::make(L.cfg, L.rank, L.generators);
  out.depth = L.depth;
  return out;
}

bool lattice_contains(const Lattice& outer, const Lattice& inner) {
  if (outer.rank != inner.rank) throw Error(ErrorKind::ConfigMismatch, "lattice ranks differ");
  const int level = std::max(outer.cfg.k, inner.cfg.k);
  PreparedLattice prepared(lattice_base_change(outer, level));
  const Lattice in = lattice_base_change(inner, level);
  return std::all_of(in.generators.begin(), in.generators.end(),
                     [&](const Vector& g) { return prepared.member_ticks(g, 0); });
}

bool lattice_equal(const Lattice& a, const Lattice& b) { return lattice_contains(a, b) && lattice_contains(b, a); }

AlmostElements almost_elements(const Lattice& L, int depth, bool certify) {
  if (depth < L.cfg.k) throw Error(ErrorKind::InvalidArgument, "depth must be at least the lattice level");
  AlmostElements out{compute_almost(L, depth), depth, std::nullopt};
  if (certify) out.stable = lattice_equal(compute_almost(L, depth + 1), out.lattice);
  return out;
}

NormValue canonical_pi_adic_norm(const Vector& x, const Lattice& L, int n) {
  if (n < 0 || n > L.cfg.k) throw Error(ErrorKind::InvalidArgument, "grid depth must lie in [0, k]");
  if (vec_is_zero(x)) return NormValue::zero();
  const int level = std::max(L.cfg.k, vector_level(x, L.cfg.k));
  PreparedLattice prepared(lattice_base_change(L, level));
  const Vector xl = vec_base_change(x, level);
  const std::int64_t step = ipow(L.cfg.p, level - n);
  std::optional<std::int64_t> best;
  for (int f = 0; f < L.cfg.factors; ++f) {
    auto g = prepared.gauge_ticks(xl, f, step);
    if (g && (!best || *g < *best)) best = g;
  }
  if (!best) return NormValue::zero();
  return NormValue::exact(ticks_to_exponent(*best, prepared.lattice().cfg));
}

NormValue discrete_norm_infimum(const Vector& x, const Lattice& L) {
  NormValue best = canonical_pi_adic_norm(x, L, 0);
  for (int n = 1; n <= L.cfg.k; ++n) best = nv_min(best, canonical_pi_adic_norm(x, L, n));
  if (!(best == gauge(x, L))) throw std::logic_error("discrete norm infimum disagrees with the gauge");
  return best;
}

SubringReport subring_gauge_checks(const Lattice& B0, const std::vector<RingElement>& samples,
                                   std::optional<bool> root_closed) {
  if (B0.rank != 1) throw Error(ErrorKind::InvalidArgument, "subring lattices live in A^1");
  const bool unit_ball = lattice_equal(unitball_span(B0), Lattice::unit_ball(B0.cfg, 1));
  const bool closed = root_closed.value_or(unit_ball);
  const bool field = unit_ball && B0.cfg.factors == 1;
  PreparedLattice prepared(unitball_span(B0));
  auto g = [&](const RingElement& f) { return prepared.gauge(Vector{f}); };
  auto truncated_away = [](const RingElement& f) { return f.is_zero() && f.truncated(); };

  SubringReport report;
  if (closed) report.power_multiplicative = true;
  if (field) report.multiplicative = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& f = samples[i];
    const NormValue gf = g(f);
    for (std::size_t j = i; j < samples.size(); ++j) {
      const auto& h = samples[j];
      const RingElement fh = elt_mul(f, h);
      if (truncated_away(fh)) continue;
      const NormValue lhs = g(fh);
      const NormValue rhs = nv_mul(gf, g(h));
      const std::string pair = "f=" + render_element(f) + ", g=" + render_element(h);
      if (!nv_le(lhs, rhs)) {
        report.submultiplicative = false;
        report.witnesses.push_back("gauge(fg)=" + lhs.str() + " exceeds gauge(f)gauge(g)=" + rhs.str() + " for " + pair);
      }
      if (field && !(lhs == rhs)) {
        report.multiplicative = false;
        report.witnesses.push_back("gauge(fg)=" + lhs.str() + " differs from " + rhs.str() + " for " + pair);
      }
    }
    if (!closed) continue;
    for (int m : {2, 3}) {
      const RingElement fm = elt_pow(f, m);
      if (truncated_away(fm)) continue;
      const NormValue lhs = g(fm);
      const NormValue rhs = gf.is_zero() ? gf : nv_pow(gf, Rational(m));
      if (!(lhs == rhs)) {
        report.power_multiplicative = false;
        report.witnesses.push_back("gauge(f^" + std::to_string(m) + ")=" + lhs.str() + " differs from " + rhs.str() +
                                   " for f=" + render_element(f));
      }
    }
  }
  return report;
}

}  // namespace ultralattice
