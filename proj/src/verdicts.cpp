#include <algorithm>

#include "ultralattice/almostmod.hpp"
#include "ultralattice/error.hpp"
#include "ultralattice/fp.hpp"
#include "ultralattice/graded.hpp"
#include "ultralattice/internal.hpp"

namespace ultralattice {

namespace {

Verdict make_verdict(Verdict::Outcome o, int depth, int precision) {
  Verdict v;
  v.outcome = o;
  v.depth = depth;
  v.precision = precision;
  return v;
}

/// A monomial-subring presentation on distinct coordinates T^{a_i}e_{σ(i)}
/// is free over A_0, so its base change to A_{≤1} keeps gens and relations.
ModulePresentation to_unit_ball(const ModulePresentation& P) {
  if (P.coeff.is_unit_ball()) return P;
  std::vector<bool> used(static_cast<std::size_t>(P.ambient_rank), false);
  for (const auto& g : P.gens) {
    auto h = graded::homogeneous(g);
    if (!h) throw Error(ErrorKind::Unsupported, "base change needs monomial generators");
    const auto nz = std::count_if(h->c.begin(), h->c.end(), [](std::uint8_t c) { return c != 0; });
    const auto at = static_cast<std::size_t>(std::find_if(h->c.begin(), h->c.end(), [](std::uint8_t c) { return c != 0; }) - h->c.begin());
    if (nz != 1 || used[at]) throw Error(ErrorKind::Unsupported, "base change needs generators on distinct coordinates");
    used[at] = true;
  }
  return ModulePresentation::make(P.cfg, CoeffRing::unit_ball(), P.ambient_rank, P.gens, P.relations);
}

std::int64_t gauge_exponent_ticks(const PreparedLattice& L, const Vector& x) {
  std::optional<std::int64_t> best;
  for (int f = 0; f < L.lattice().cfg.factors; ++f) {
    auto g = L.gauge_ticks(x, f);
    if (g && (!best || *g < *best)) best = g;
  }
  if (!best) throw Error(ErrorKind::InvalidArgument, "gauge of the zero vector has no exponent");
  return *best;
}

Lattice kernel_at(const LatticeMap& f) {
  const auto& cfg = f.source.cfg;
  const auto w = lattice_window(cfg);
  const auto n1 = static_cast<std::size_t>(f.source.rank);
  const auto n2 = static_cast<std::size_t>(f.target.rank);
  const std::int64_t limit = w.hi - precision_guard_ticks(cfg);
  std::vector<Vector> gens;
  for (int fac = 0; fac < cfg.factors; ++fac) {
    std::vector<dvr::Vec> rows;
    for (const auto& g : f.source.generators) {
      dvr::Vec row = to_window(f.apply(g), fac, w);
      dvr::Vec src = to_window(g, fac, w);
      row.insert(row.end(), src.begin(), src.end());
      rows.push_back(std::move(row));
    }
    for (const auto& v : dvr::trailing_block(dvr::HowellForm::build(w, n1 + n2, std::move(rows)), n2))
      if (!dvr::is_zero(v) && w.lo + static_cast<std::int64_t>(dvr::valuation(v)) < limit)
        gens.push_back(from_window(v, fac, w, cfg));
  }
  // already echelon rows of the kernel; re-reducing a rank-deficient set
  // would only surface truncation artifacts
  return Lattice::make(cfg, f.source.rank, std::move(gens));
}

/// Essential rank of a lattice summed over factors.
std::size_t lattice_rank(const Lattice& L) {
  PreparedLattice p(L);
  std::size_t r = 0;
  for (int f = 0; f < L.cfg.factors; ++f) r += p.rank(f);
  return r;
}

struct IsometryCore {
  bool injective;
  std::optional<Vector> witness;
};

IsometryCore isometry_core(const LatticeMap& f) {
  const auto& cfg = f.source.cfg;
  const Lattice basis = lattice_reduce(unitball_span(f.source));
  std::vector<Vector> tgens;
  for (const auto& g : f.target.generators) tgens.push_back(vec_shift(g, Rational(1)));
  const PreparedLattice tl2(Lattice::make(cfg, f.target.rank, std::move(tgens)));
  const auto& w = tl2.window();
  const std::size_t width = static_cast<std::size_t>(cfg.factors * f.target.rank) * w.size();

  std::vector<Vector> xs;
  std::vector<fp::Row> rows;
  for (const auto& b : basis.generators)
    for (std::int64_t j = 0; j < cfg.scale(); ++j) {
      Vector x = vec_shift(b, ticks_to_exponent(j, cfg));
      fp::Row flat;
      flat.reserve(width);
      const Vector y = f.apply(x);
      for (int fac = 0; fac < cfg.factors; ++fac)
        for (const auto& s : tl2.form(fac).reduce(to_window(y, fac, w))) flat.insert(flat.end(), s.begin(), s.end());
      xs.push_back(std::move(x));
      rows.push_back(std::move(flat));
    }
  auto kernel = fp::left_kernel(cfg.p, width, rows);
  if (kernel.empty()) return {true, std::nullopt};
  Vector x = zero_vector(cfg, f.source.rank);
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (kernel.front()[i]) x = vec_add(x, vec_scale(RingElement::monomial(cfg, Rational(0), kernel.front()[i]), xs[i]));
  return {false, x};
}

}  // namespace

Lattice kernel_lattice(const LatticeMap& f) {
  // rows of the kernel at 2N that stay shallow at N; the others only vanish
  // because the image was truncated
  const auto& cfg = f.source.cfg;
  const Lattice wide = kernel_at(detail::with_precision(f, 2 * cfg.N));
  const std::int64_t hi = static_cast<std::int64_t>(cfg.N) * cfg.scale();
  const std::int64_t limit = hi - precision_guard_ticks(cfg);
  std::vector<Vector> gens;
  for (const auto& g : wide.generators) {
    std::int64_t v = hi;
    Vector cut;
    for (const auto& e : g) {
      auto per = e.factors();
      for (auto& t : per) {
        if (!t.empty()) v = std::min(v, t.begin()->first);
        t.erase(t.lower_bound(hi), t.end());
      }
      cut.emplace_back(cfg, std::move(per), true);
    }
    if (v < limit) gens.push_back(std::move(cut));
  }
  return Lattice::make(cfg, f.source.rank, std::move(gens));
}

Verdict is_almost_zero(const ModulePresentation& P, int depth) {
  if (depth < 0) throw Error(ErrorKind::InvalidArgument, "depth must be non-negative");
  Verdict v = make_verdict(Verdict::Outcome::Undecided, depth, P.cfg.N);
  const ModulePresentation Q = to_unit_ball(P);
  detail::DvrDecomposition d;
  try {
    d = detail::certified_decompose(Q);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PrecisionUndecidable) throw;
    v.note = e.what();
    return v;
  }
  if (!d.free_basis.empty()) {
    v.outcome = Verdict::Outcome::No;
    v.witness = d.free_basis.front();
    v.note = "module has a free summand";
    return v;
  }
  // killed by T^{1/p^K} at level K and by T^{1/p^{K+1}} at level K+1
  const Rational bound(1, ipow(P.cfg.p, depth + 1));
  if (d.torsion.empty() || ticks_to_exponent(d.torsion.back().ticks, Q.cfg) <= bound) {
    v.outcome = Verdict::Outcome::Yes;
    return v;
  }
  v.outcome = Verdict::Outcome::No;
  v.witness = d.torsion.back().generator;
  v.note = "summand needs T^(" + ticks_to_exponent(d.torsion.back().ticks, Q.cfg).str() + ") to vanish";
  return v;
}

Verdict is_almost_iso(const LatticeMap& f, int depth) {
  Verdict v = make_verdict(Verdict::Outcome::Undecided, depth, f.source.cfg.N);
  const Lattice ker = kernel_lattice(f);
  if (!ker.generators.empty()) {
    v.outcome = Verdict::Outcome::No;
    v.witness = ker.generators.front();
    v.note = "nonzero kernel";
    return v;
  }
  Verdict c = is_almost_zero(present_cokernel(f), depth);
  if (!c.note.empty()) c.note = "cokernel: " + c.note;
  return c;
}

Verdict isometry_check(const LatticeMap& f) {
  Verdict v = make_verdict(Verdict::Outcome::Undecided, 0, f.source.cfg.N);
  auto core = isometry_core(f);
  auto core2 = isometry_core(detail::with_precision(f, 2 * f.source.cfg.N));
  if (core.injective != core2.injective) {
    v.note = "reduction mod T changes between precision N and 2N";
    return v;
  }
  v.outcome = core.injective ? Verdict::Outcome::Yes : Verdict::Outcome::No;
  v.witness = core.witness;
  if (!core.injective) v.note = "witness lies outside T*source but maps into T*target";
  return v;
}

bool StrictnessReport::pass() const {
  return estimate_holds && std::all_of(slack_ok.begin(), slack_ok.end(), [](bool b) { return b; });
}

StrictnessReport strictness_bounds(const LatticeMap& f, const std::vector<Vector>& samples) {
  const auto& cfg = f.target.cfg;
  StrictnessReport rep;
  rep.m_tor = torsion_exponent(present_cokernel(f)).value();

  std::vector<Vector> image;
  for (const auto& g : f.source.generators) {
    Vector y = f.apply(g);
    if (!vec_is_zero(y)) image.push_back(std::move(y));
  }
  const Lattice I = Lattice::make(cfg, f.target.rank, image);
  const PreparedLattice pI(I);
  const PreparedLattice pL2(unitball_span(f.target));

  bool full = true;
  for (int fac = 0; fac < cfg.factors; ++fac) full = full && pI.rank(fac) == static_cast<std::size_t>(f.target.rank);
  std::int64_t m_est = 0;
  if (full) {
    // the image spans: J is the whole target
    for (const auto& g : f.target.generators)
      if (!vec_is_zero(g)) m_est = std::max(m_est, -gauge_exponent_ticks(pI, g));
  } else {
    // J = target ∩ (span of the image), approximated by target ∩ T^{-c}·I with
    // c as large as the working window allows.
    const auto w = pL2.window();
    const std::int64_t limit = w.hi - precision_guard_ticks(cfg);
    std::int64_t headroom = 0;
    for (int fac = 0; fac < cfg.factors; ++fac) {
      std::vector<dvr::Vec> irows, lrows;
      for (const auto& y : image) {
        auto v = to_window(y, fac, w);
        if (!dvr::is_zero(v)) irows.push_back(std::move(v));
      }
      if (irows.empty()) continue;
      std::int64_t c = w.hi - w.lo;
      for (const auto& v : irows) c = std::min<std::int64_t>(c, static_cast<std::int64_t>(dvr::valuation(v)));
      for (auto& v : irows) v = *dvr::shift(v, -c);
      headroom = headroom == 0 ? c : std::min(headroom, c);
      for (const auto& g : f.target.generators) lrows.push_back(to_window(g, fac, w));
      for (const auto& v : dvr::intersect(w, static_cast<std::size_t>(f.target.rank), lrows, irows)) {
        if (dvr::is_zero(v) || w.lo + static_cast<std::int64_t>(dvr::valuation(v)) >= limit) continue;
        const Vector j = from_window(v, fac, w, cfg);
        m_est = std::max(m_est, -gauge_exponent_ticks(pI, j));
      }
    }
    if (headroom > 0 && m_est >= headroom)
      throw Error(ErrorKind::PrecisionUndecidable, "norm-estimate exponent reaches the edge of the working window");
  }
  rep.m_est = ticks_to_exponent(m_est, cfg);

  for (int n = 0; n <= cfg.k; ++n) rep.slack_ok.push_back(rep.m_tor <= rep.m_est + Rational(2, ipow(cfg.p, n)));
  for (const auto& x : samples) {
    const Vector y = f.apply(x);
    if (vec_is_zero(y)) continue;
    const Rational gi = ticks_to_exponent(gauge_exponent_ticks(pI, y), cfg);
    const Rational gl = ticks_to_exponent(gauge_exponent_ticks(pL2, y), cfg);
    if (gi < gl - rep.m_tor) {
      rep.estimate_holds = false;
      rep.witnesses.push_back("image gauge 2^-(" + gi.str() + ") vs target gauge 2^-(" + gl.str() + ") for x = [" +
                              [&] {
                                std::string s;
                                for (const auto& e : render_vector(x)) s += (s.empty() ? "" : ", ") + e;
                                return s;
                              }() +
                              "]");
    }
  }
  return rep;
}

ComparisonBound seminorm_comparison_bound(const Lattice& L1_in, const Lattice& L2_in, const std::vector<Vector>& samples) {
  if (L1_in.rank != L2_in.rank) throw Error(ErrorKind::ConfigMismatch, "lattices live in different ambient modules");
  const int level = std::max(L1_in.cfg.k, L2_in.cfg.k);
  const Lattice L1 = unitball_span(lattice_base_change(L1_in, level));
  const Lattice L2 = unitball_span(lattice_base_change(L2_in, level));
  const auto& cfg = L1.cfg;
  if (lattice_rank(L1) != lattice_rank(L2)) throw Error(ErrorKind::NotCommensurable, "lattices span different subspaces");
  const PreparedLattice p1(L1), p2(L2);
  const std::int64_t cap = static_cast<std::int64_t>(cfg.N) * cfg.scale();
  auto reach = [&](const Lattice& from, const PreparedLattice& into) {
    std::int64_t m = 0;
    for (const auto& g : from.generators)
      if (!vec_is_zero(g)) m = std::max(m, -gauge_exponent_ticks(into, g));
    return m;
  };
  const std::int64_t m = reach(L1, p2);
  if (m > cap || reach(L2, p1) > cap) throw Error(ErrorKind::NotCommensurable, "no T-power up to T^N relates the lattices");

  ComparisonBound out{NormValue::exact(ticks_to_exponent(-2 * m, cfg)), ticks_to_exponent(m, cfg), true, {}};
  for (const auto& x_in : samples) {
    const Vector x = vec_base_change(x_in, level);
    if (vec_is_zero(x)) continue;
    const std::int64_t g1 = gauge_exponent_ticks(p1, x), g2 = gauge_exponent_ticks(p2, x);
    if (g2 < g1 - 2 * m) {
      out.verified = false;
      out.witnesses.push_back("gauge2 2^-(" + ticks_to_exponent(g2, cfg).str() + ") exceeds bound for gauge1 2^-(" +
                              ticks_to_exponent(g1, cfg).str() + ")");
    }
  }
  return out;
}

}  // namespace ultralattice
