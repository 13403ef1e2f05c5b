#pragma once

// Exact ranks of integer vector families over Q and over F_p.

#include "aokb/real.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace aokb {

/// Incrementally maintained Q-span of integer vectors.
///
/// The span is kept in reduced row echelon form scaled to integers: row i is
/// rows_[i] / denom_ with rows_[i][pivot_j] = denom_ * [i == j]. Membership of
/// a new vector v is then exact integer arithmetic:
///   v in span  <=>  denom_ * v == sum_i v[pivot_i] * rows_[i].
class IntegerSpan {
 public:
  explicit IntegerSpan(std::size_t dimension);

  std::size_t dimension() const { return dim_; }
  std::size_t rank() const { return basis_.size(); }
  bool full() const { return rank() == dim_; }

  /// Adds v; returns true when the rank grew.
  bool add(std::span<const std::int64_t> v);
  bool contains(std::span<const std::int64_t> v) const;

 private:
  void rebuild();
  bool contains_fast(std::span<const std::int64_t> v, bool& overflow) const;
  bool contains_exact(std::span<const std::int64_t> v) const;

  std::size_t dim_;
  std::vector<std::vector<std::int64_t>> basis_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<Integer>> rows_;
  Integer denom_;
  std::vector<std::vector<__int128>> rows128_;
  __int128 denom128_ = 1;
  bool fits128_ = true;
};

/// Rank of a family over Q.
std::size_t integer_rank(const std::vector<std::vector<std::int64_t>>& vectors, std::size_t dimension);

/// Incrementally maintained span over F_p (p prime, p < 2^31).
class ModSpan {
 public:
  ModSpan(std::size_t dimension, std::int64_t p);
  std::size_t rank() const { return rows_.size(); }
  bool full() const { return rank() == dim_; }
  /// Adds v mod p; returns true when the rank grew.
  bool add(std::span<const std::int64_t> v);

 private:
  std::size_t dim_;
  std::int64_t p_;
  std::vector<std::vector<std::int64_t>> rows_;  // echelon rows, pivot entry 1
  std::vector<std::size_t> pivots_;
};

}  // namespace aokb
