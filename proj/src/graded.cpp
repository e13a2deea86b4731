#include "ultralattice/graded.hpp"

#include <algorithm>

#include "ultralattice/error.hpp"

namespace ultralattice::graded {

namespace {

std::int64_t max_deg(const std::vector<Homogeneous>& v, std::int64_t fallback) {
  std::int64_t m = fallback;
  for (const auto& h : v) m = std::max(m, h.deg);
  return m;
}

std::int64_t min_deg(const std::vector<Homogeneous>& v, std::int64_t fallback) {
  std::int64_t m = fallback;
  for (const auto& h : v) m = std::min(m, h.deg);
  return m;
}

/// Subspace generated in degree d by lower pieces: Σ_{t ∈ S, t > 0} V_{d-t}.
fp::Subspace from_below(int p, std::size_t n, const MonoidTable& S, const std::vector<fp::Subspace>& pieces,
                        std::int64_t lo, std::int64_t d) {
  fp::Subspace out(p, n);
  for (std::int64_t e = lo; e < d; ++e)
    if (S.contains(d - e))
      for (const auto& r : pieces[static_cast<std::size_t>(e - lo)].basis()) out.insert(r);
  return out;
}

}  // namespace

std::optional<Homogeneous> homogeneous(const Vector& v) {
  if (v.empty()) return std::nullopt;
  const auto& cfg = v.front().config();
  if (cfg.factors != 1) return std::nullopt;
  Homogeneous h{0, fp::Row(v.size(), 0)};
  bool seen = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& t = v[i].factor(0);
    if (t.empty()) continue;
    if (t.size() != 1) return std::nullopt;
    if (seen && t.begin()->first != h.deg) return std::nullopt;
    h.deg = t.begin()->first;
    h.c[i] = t.begin()->second;
    seen = true;
  }
  if (!seen) return std::nullopt;
  return h;
}

Homogeneous require_homogeneous(const Vector& v) {
  auto h = homogeneous(v);
  if (!h) throw Error(ErrorKind::Unsupported, "monomial-subring modules need homogeneous nonzero generators (T^d times a constant vector)");
  return *h;
}

Vector to_vector(const Homogeneous& h, const RingConfig& cfg) {
  Vector out;
  for (auto c : h.c)
    out.push_back(c ? RingElement::monomial(cfg, ticks_to_exponent(h.deg, cfg), c) : RingElement::zero(cfg));
  return out;
}

fp::Subspace degree_part(int p, std::size_t n, const MonoidTable& S, const std::vector<Homogeneous>& gens, std::int64_t d) {
  fp::Subspace out(p, n);
  for (const auto& g : gens)
    if (S.contains(d - g.deg)) out.insert(g.c);
  return out;
}

std::vector<Homogeneous> minimal_generators(int p, std::size_t n, const MonoidTable& S, const std::vector<Homogeneous>& gens) {
  std::vector<Homogeneous> out;
  if (gens.empty()) return out;
  const std::int64_t lo = min_deg(gens, 0);
  const std::int64_t hi = max_deg(gens, 0);
  std::vector<fp::Subspace> pieces;
  for (std::int64_t d = lo; d <= hi; ++d) {
    fp::Subspace below = from_below(p, n, S, pieces, lo, d);
    fp::Subspace here = degree_part(p, n, S, gens, d);
    for (const auto& r : here.basis())
      if (below.insert(r)) out.push_back({d, r});
    pieces.push_back(std::move(here));
  }
  return out;
}

std::vector<Homogeneous> syzygies(int p, std::size_t n, const MonoidTable& S, const std::vector<Homogeneous>& gens) {
  std::vector<Homogeneous> out;
  if (gens.empty()) return out;
  const std::size_t m = gens.size();
  const std::int64_t lo = min_deg(gens, 0);
  const std::int64_t hi = max_deg(gens, 0) + 3 * std::max<std::int64_t>(S.conductor, 1) + 1;
  std::vector<fp::Subspace> kernels;
  for (std::int64_t d = lo; d <= hi; ++d) {
    std::vector<std::size_t> idx;
    std::vector<fp::Row> rows;
    for (std::size_t i = 0; i < m; ++i)
      if (S.contains(d - gens[i].deg)) {
        idx.push_back(i);
        rows.push_back(gens[i].c);
      }
    fp::Subspace K(p, m);
    for (const auto& c : fp::left_kernel(p, n, rows)) {
      fp::Row full(m, 0);
      for (std::size_t j = 0; j < idx.size(); ++j) full[idx[j]] = c[j];
      K.insert(full);
    }
    fp::Subspace below = from_below(p, m, S, kernels, lo, d);
    for (const auto& r : K.basis())
      if (below.insert(r)) out.push_back({d, r});
    kernels.push_back(std::move(K));
  }
  return out;
}

Torsion torsion(int p, std::size_t n, const MonoidTable& S, const std::vector<Homogeneous>& U, const std::vector<Homogeneous>& W) {
  Torsion out;
  if (U.empty()) return out;
  fp::Subspace w_inf(p, n);
  for (const auto& r : W) w_inf.insert(r.c);
  const std::int64_t lo = std::min(min_deg(U, 0), min_deg(W, min_deg(U, 0)));
  const std::int64_t top = std::max(max_deg(U, lo), max_deg(W, lo)) + S.conductor;
  std::vector<fp::Subspace> tors;
  std::int64_t failing = -1;
  for (std::int64_t d = lo; d <= top; ++d) {
    fp::Subspace tor = fp::intersect(degree_part(p, n, S, U, d), w_inf);
    fp::Subspace w_d = degree_part(p, n, S, W, d);
    fp::Subspace gen = from_below(p, n, S, tors, lo, d);
    for (const auto& r : w_d.basis()) gen.insert(r);
    for (const auto& r : tor.basis())
      if (gen.insert(r)) out.gens.push_back({d, r});
    const std::size_t dim = tor.dim() - fp::intersect(tor, w_d).dim();
    if (dim > 0) {
      out.dims.emplace_back(d, dim);
      // largest t in S for which T^t does not yet kill this piece
      for (std::int64_t t = top - d; t >= 0; --t) {
        if (!S.contains(t)) continue;
        if (!degree_part(p, n, S, W, d + t).contains(tor)) {
          failing = std::max(failing, t);
          break;
        }
      }
    }
    tors.push_back(std::move(tor));
  }
  if (failing >= 0) {
    out.exponent = failing + 1;
    while (!S.contains(out.exponent)) ++out.exponent;
  }
  return out;
}

}  // namespace ultralattice::graded
