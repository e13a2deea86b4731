#pragma once

// Linear algebra over the prime field F_p on dense byte vectors.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ultralattice::fp {

using Row = std::vector<std::uint8_t>;

std::uint8_t inv(std::uint8_t a, int p);

/// Reduced row-echelon subspace of F_p^n built incrementally.
class Subspace {
 public:
  Subspace(int p, std::size_t n) : p_(p), n_(n) {}

  int p() const { return p_; }
  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<Row>& basis() const { return rows_; }

  /// Remainder of v after elimination against the basis.
  Row reduce(Row v) const;
  bool contains(const Row& v) const;
  /// Adds v; returns false when v was already in the span.
  bool insert(const Row& v);
  bool contains(const Subspace& other) const;

 private:
  int p_;
  std::size_t n_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;
};

Subspace span(int p, std::size_t n, const std::vector<Row>& rows);
Subspace intersect(const Subspace& a, const Subspace& b);
/// Coefficient vectors c with Σ c_i·rows[i] = 0, as a basis of that kernel.
std::vector<Row> left_kernel(int p, std::size_t n, const std::vector<Row>& rows);
std::size_t rank(int p, std::size_t n, const std::vector<Row>& rows);

}  // namespace ultralattice::fp
