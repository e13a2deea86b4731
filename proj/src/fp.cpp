#include "ultralattice/fp.hpp"

#include <algorithm>

#include "ultralattice/error.hpp"

namespace ultralattice::fp {

std::uint8_t inv(std::uint8_t a, int p) {
  for (int x = 1; x < p; ++x)
    if ((a * x) % p == 1) return static_cast<std::uint8_t>(x);
  throw Error(ErrorKind::NotInvertible, "zero has no inverse in F_p");
}

namespace {

void axpy(Row& x, std::uint8_t c, const Row& y, int p) {
  // x -= c·y
  if (!c) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (y[i]) x[i] = static_cast<std::uint8_t>((x[i] + (p - c) * y[i]) % p);
}

}  // namespace

Row Subspace::reduce(Row v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) axpy(v, v[pivots_[r]], rows_[r], p_);
  return v;
}

bool Subspace::contains(const Row& v) const {
  Row r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](std::uint8_t c) { return c == 0; });
}

bool Subspace::insert(const Row& v) {
  Row r = reduce(v);
  auto it = std::find_if(r.begin(), r.end(), [](std::uint8_t c) { return c != 0; });
  if (it == r.end()) return false;
  const auto piv = static_cast<std::size_t>(it - r.begin());
  const std::uint8_t s = inv(r[piv], p_);
  for (auto& c : r) c = static_cast<std::uint8_t>((c * s) % p_);
  for (std::size_t i = 0; i < rows_.size(); ++i) axpy(rows_[i], rows_[i][piv], r, p_);
  const auto pos = static_cast<std::size_t>(std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin());
  pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), piv);
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
  return true;
}

bool Subspace::contains(const Subspace& other) const {
  return std::all_of(other.rows_.begin(), other.rows_.end(), [&](const Row& r) { return contains(r); });
}

Subspace span(int p, std::size_t n, const std::vector<Row>& rows) {
  Subspace s(p, n);
  for (const auto& r : rows) s.insert(r);
  return s;
}

std::vector<Row> left_kernel(int p, std::size_t n, const std::vector<Row>& rows) {
  // Row-reduce [rows | I]; rows whose left part vanishes give the kernel.
  const std::size_t m = rows.size();
  std::vector<Row> aug;
  for (std::size_t i = 0; i < m; ++i) {
    Row r = rows[i];
    r.resize(n + m, 0);
    r[n + i] = 1;
    aug.push_back(std::move(r));
  }
  std::size_t next = 0;
  for (std::size_t col = 0; col < n && next < m; ++col) {
    std::size_t piv = next;
    while (piv < m && aug[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(aug[piv], aug[next]);
    const std::uint8_t s = inv(aug[next][col], p);
    for (auto& c : aug[next]) c = static_cast<std::uint8_t>((c * s) % p);
    for (std::size_t i = 0; i < m; ++i)
      if (i != next) axpy(aug[i], aug[i][col], aug[next], p);
    ++next;
  }
  std::vector<Row> out;
  for (std::size_t i = next; i < m; ++i) out.emplace_back(aug[i].begin() + static_cast<std::ptrdiff_t>(n), aug[i].end());
  return out;
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  // x = Σ α_i a_i = Σ β_j b_j: kernel of the stacked basis.
  std::vector<Row> stacked = a.basis();
  stacked.insert(stacked.end(), b.basis().begin(), b.basis().end());
  Subspace out(a.p(), a.ambient());
  for (const auto& c : left_kernel(a.p(), a.ambient(), stacked)) {
    Row x(a.ambient(), 0);
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (c[i])
        for (std::size_t t = 0; t < x.size(); ++t) x[t] = static_cast<std::uint8_t>((x[t] + c[i] * a.basis()[i][t]) % a.p());
    out.insert(x);
  }
  return out;
}

std::size_t rank(int p, std::size_t n, const std::vector<Row>& rows) { return span(p, n, rows).dim(); }

}  // namespace ultralattice::fp
