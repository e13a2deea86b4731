#include "ultralattice/dvr.hpp"

#include <algorithm>
#include <utility>

#include "ultralattice/error.hpp"

namespace ultralattice::dvr {

namespace {

std::uint8_t inv_mod(std::uint8_t a, int p) {
  for (int x = 1; x < p; ++x)
    if ((a * x) % p == 1) return static_cast<std::uint8_t>(x);
  throw Error(ErrorKind::NotInvertible, "zero is not a unit");
}

/// The scalar entry/u^v, as a ring series of full window length.
Series divide_by_power(const Series& entry, std::size_t v) {
  Series q(entry.size(), 0);
  std::copy(entry.begin() + static_cast<std::ptrdiff_t>(v), entry.end(), q.begin());
  return q;
}

}  // namespace

std::size_t valuation(const Series& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i]) return i;
  return s.size();
}

std::size_t valuation(const Vec& v) {
  std::size_t best = v.empty() ? 0 : v[0].size();
  for (const auto& s : v) best = std::min(best, valuation(s));
  return best;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Series& s) {
    return std::all_of(s.begin(), s.end(), [](std::uint8_t c) { return c == 0; });
  });
}

Series unit_inverse(const Series& w, int p, std::size_t len) {
  if (w.empty() || w[0] == 0) throw Error(ErrorKind::NotInvertible, "series with zero constant term");
  const std::uint8_t c0 = inv_mod(w[0], p);
  std::vector<std::pair<std::size_t, std::uint32_t>> tail;
  for (std::size_t j = 1; j < std::min(w.size(), len); ++j)
    if (w[j]) tail.emplace_back(j, w[j]);
  Series y(len, 0);
  y[0] = c0;
  for (std::size_t i = 1; i < len; ++i) {
    std::uint32_t acc = 0;
    for (const auto& [j, c] : tail) {
      if (j > i) break;
      acc += c * y[i - j];
    }
    acc %= static_cast<std::uint32_t>(p);
    y[i] = static_cast<std::uint8_t>(((p - acc) % p) * c0 % p);
  }
  return y;
}

void sub_scaled(Vec& x, const Series& q, const Vec& row, int p) {
  std::vector<std::pair<std::size_t, std::uint32_t>> nz;
  for (std::size_t j = 0; j < q.size(); ++j)
    if (q[j]) nz.emplace_back(j, q[j]);
  if (nz.empty()) return;
  const std::size_t m = x.empty() ? 0 : x[0].size();
  std::vector<std::uint32_t> acc(m);
  for (std::size_t c = 0; c < x.size(); ++c) {
    const Series& r = row[c];
    const std::size_t rv = valuation(r);
    if (rv == m) continue;
    std::fill(acc.begin(), acc.end(), 0u);
    for (const auto& [j, qj] : nz) {
      if (j + rv >= m) break;
      std::uint32_t* a = acc.data() + j;
      const std::uint8_t* rr = r.data();
      const std::size_t end = m - j;
      for (std::size_t i = rv; i < end; ++i) a[i] += qj * rr[i];
    }
    Series& xc = x[c];
    const auto pp = static_cast<std::uint32_t>(p);
    for (std::size_t i = 0; i < m; ++i) {
      if (acc[i] == 0) continue;
      std::uint32_t s = acc[i] % pp;
      xc[i] = static_cast<std::uint8_t>((xc[i] + pp - s) % pp);
    }
  }
}

Vec scale(const Vec& row, const Series& s, int p) {
  Vec out(row.size(), Series(row.empty() ? 0 : row[0].size(), 0));
  Series neg(s.size(), 0);
  for (std::size_t i = 0; i < s.size(); ++i) neg[i] = static_cast<std::uint8_t>((p - s[i]) % p);
  sub_scaled(out, neg, row, p);
  return out;
}

std::optional<Vec> shift(const Vec& x, std::int64_t d) {
  Vec out(x.size(), Series(x.empty() ? 0 : x[0].size(), 0));
  for (std::size_t c = 0; c < x.size(); ++c) {
    const auto m = static_cast<std::int64_t>(x[c].size());
    for (std::int64_t i = 0; i < m; ++i) {
      const std::uint8_t v = x[c][static_cast<std::size_t>(i)];
      if (!v) continue;
      const std::int64_t j = i + d;
      if (j < 0) return std::nullopt;
      if (j >= m) continue;
      out[c][static_cast<std::size_t>(j)] = v;
    }
  }
  return out;
}

HowellForm HowellForm::build(const Window& w, std::size_t ncols, std::vector<Vec> rows) {
  HowellForm h;
  h.w_ = w;
  h.ncols_ = ncols;
  const std::size_t m = w.size();
  struct Pending {
    Vec v;
    bool essential;
  };
  std::vector<Pending> pool;
  pool.reserve(rows.size() + ncols);
  for (auto& r : rows) {
    if (r.size() != ncols) throw Error(ErrorKind::InvalidArgument, "row width does not match module rank");
    if (!is_zero(r)) pool.push_back({std::move(r), true});
  }

  for (std::size_t col = 0; col < ncols; ++col) {
    std::size_t best = pool.size();
    std::size_t best_val = m;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const std::size_t v = valuation(pool[i].v[col]);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    if (best == pool.size()) continue;
    Pending piv = std::move(pool[best]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));

    Series unit = divide_by_power(piv.v[col], best_val);
    piv.v = scale(piv.v, unit_inverse(unit, w.p, m), w.p);

    for (auto& other : pool) {
      const std::size_t v = valuation(other.v[col]);
      if (v == m) continue;
      sub_scaled(other.v, divide_by_power(other.v[col], best_val), piv.v, w.p);
    }
    if (best_val > 0) {
      auto wrapped = shift(piv.v, static_cast<std::int64_t>(m - best_val));
      if (wrapped && !is_zero(*wrapped)) pool.push_back({std::move(*wrapped), false});
    }
    h.rows_.push_back({col, best_val, std::move(piv.v), piv.essential});
    pool.erase(std::remove_if(pool.begin(), pool.end(), [](const Pending& r) { return is_zero(r.v); }), pool.end());
  }

  for (std::size_t i = 1; i < h.rows_.size(); ++i) {
    const auto& piv = h.rows_[i];
    for (std::size_t j = 0; j < i; ++j) {
      Vec& upper = h.rows_[j].v;
      if (valuation(upper[piv.col]) == m) continue;
      sub_scaled(upper, divide_by_power(upper[piv.col], piv.val), piv.v, w.p);
    }
  }
  return h;
}

std::size_t HowellForm::essential_rank() const {
  return static_cast<std::size_t>(std::count_if(rows_.begin(), rows_.end(), [](const Row& r) { return r.essential; }));
}

Vec HowellForm::reduce(Vec x) const {
  const std::size_t m = w_.size();
  for (const auto& r : rows_) {
    if (valuation(x[r.col]) == m) continue;
    sub_scaled(x, divide_by_power(x[r.col], r.val), r.v, w_.p);
  }
  return x;
}

std::vector<Series> HowellForm::coordinates(Vec x, Vec* remainder) const {
  const std::size_t m = w_.size();
  std::vector<Series> q(rows_.size(), Series(m, 0));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (valuation(x[r.col]) == m) continue;
    q[i] = divide_by_power(x[r.col], r.val);
    sub_scaled(x, q[i], r.v, w_.p);
  }
  if (remainder) *remainder = std::move(x);
  return q;
}

std::vector<Vec> trailing_block(const HowellForm& h, std::size_t first_col) {
  std::vector<Vec> out;
  for (const auto& r : h.rows()) {
    if (r.col < first_col) continue;
    out.emplace_back(r.v.begin() + static_cast<std::ptrdiff_t>(first_col), r.v.end());
  }
  return out;
}

std::vector<Vec> intersect(const Window& w, std::size_t ncols, const std::vector<Vec>& U, const std::vector<Vec>& W) {
  std::vector<Vec> stacked;
  stacked.reserve(U.size() + W.size());
  for (const auto& u : U) {
    Vec row = u;
    row.insert(row.end(), u.begin(), u.end());
    stacked.push_back(std::move(row));
  }
  for (const auto& v : W) {
    Vec row = v;
    row.resize(2 * ncols, w.zero_series());
    stacked.push_back(std::move(row));
  }
  return trailing_block(HowellForm::build(w, 2 * ncols, std::move(stacked)), ncols);
}

}  // namespace ultralattice::dvr
