#pragma once

// Dense linear algebra over the truncated valuation ring F_p[[u]]/(u^m),
// u = T^{1/p^k}. Vectors live in a fixed exponent window [lo, hi) of
// u-exponents; a module M is modelled as M + u^hi·R^n, which is exactly what
// an element known modulo T^N can be tested against.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace ultralattice::dvr {

using Series = std::vector<std::uint8_t>;
using Vec = std::vector<Series>;

struct Window {
  int p = 2;
  std::int64_t lo = 0;  // u-exponent of index 0
  std::int64_t hi = 1;  // first dropped u-exponent
  std::size_t size() const { return static_cast<std::size_t>(hi - lo); }
  Series zero_series() const { return Series(size(), 0); }
  Vec zero_vec(std::size_t n) const { return Vec(n, zero_series()); }
};

/// Index of the lowest nonzero coefficient, or s.size() for zero.
std::size_t valuation(const Series& s);
std::size_t valuation(const Vec& v);
bool is_zero(const Vec& v);

/// Inverse of a unit (w[0] != 0) modulo u^len.
Series unit_inverse(const Series& w, int p, std::size_t len);

/// x -= q·row, where q is a ring scalar (index 0 is u^0) and x, row are
/// window vectors.
void sub_scaled(Vec& x, const Series& q, const Vec& row, int p);
/// s·row for a ring scalar s.
Vec scale(const Vec& row, const Series& s, int p);
/// u^d·x within the window; nullopt if a nonzero term falls below lo.
std::optional<Vec> shift(const Vec& x, std::int64_t d);

/// Canonical echelon basis (Howell form) of the module spanned by the given
/// rows plus u^hi·R^n. Pivots are normalised to exact powers of u and
/// entries above each pivot are reduced below the pivot valuation, so
/// `reduce` is a canonical F_p-linear remainder map with kernel M.
class HowellForm {
 public:
  struct Row {
    std::size_t col;
    std::size_t val;  // pivot valuation as a window index
    Vec v;
    bool essential;   // derived from an input row rather than a u^m wrap-around
  };

  HowellForm() = default;
  static HowellForm build(const Window& w, std::size_t ncols, std::vector<Vec> rows);

  const Window& window() const { return w_; }
  std::size_t ncols() const { return ncols_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t essential_rank() const;

  Vec reduce(Vec x) const;
  bool contains(const Vec& x) const { return is_zero(reduce(x)); }
  /// Coefficients q_i with x = Σ q_i·rows[i] + reduce(x).
  std::vector<Series> coordinates(Vec x, Vec* remainder = nullptr) const;

 private:
  Window w_;
  std::size_t ncols_ = 0;
  std::vector<Row> rows_;
};

/// Rows of `h` whose pivot column is >= first_col, restricted to the
/// trailing columns. With the Howell property this spans the submodule of
/// vectors vanishing on the leading columns.
std::vector<Vec> trailing_block(const HowellForm& h, std::size_t first_col);

/// (U + u^hi) ∩ (W + u^hi) by the Zassenhaus stacking trick.
std::vector<Vec> intersect(const Window& w, std::size_t ncols, const std::vector<Vec>& U, const std::vector<Vec>& W);

}  // namespace ultralattice::dvr
