#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fqm/matrix.hpp"

namespace fqm {

/// A subspace of F_q^n held as its canonical basis: the reduced row echelon
/// form of any spanning set (dim x n, row-major).
class SubspaceHandle {
 public:
  SubspaceHandle() = default;
  SubspaceHandle(FieldPtr f, std::size_t n);  // the zero subspace

  /// Canonical form of the span of `vectors` (each of length n).
  static SubspaceHandle span_of(FieldPtr f, std::size_t n, const std::vector<FqVector>& vectors);

  std::size_t dim() const { return dim_; }
  std::size_t ambient() const { return n_; }
  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  std::span<const Elem> row(std::size_t i) const { return {rows_.data() + i * n_, n_}; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(std::span<const Elem> v) const;
  /// All q^dim elements, in coefficient odometer order.
  std::vector<FqVector> elements() const;

  bool operator==(const SubspaceHandle& o) const {
    return n_ == o.n_ && dim_ == o.dim_ && rows_ == o.rows_;
  }
  bool operator<(const SubspaceHandle& o) const;

 private:
  friend class SubspaceEnumerator;
  FieldPtr field_;
  std::size_t n_ = 0, dim_ = 0;
  std::vector<std::size_t> pivots_;
  std::vector<Elem> rows_;
};

/// Walks the k-dimensional subspaces of F_q^n once each: pivot patterns in
/// lexicographic order, then free entries as an odometer.
class SubspaceEnumerator {
 public:
  SubspaceEnumerator(FieldPtr f, std::size_t n, std::size_t k);
  /// Advances to the next subspace; false when exhausted.
  bool next();
  const SubspaceHandle& current() const { return cur_; }

 private:
  void load_pattern();
  bool next_pattern();

  FieldPtr field_;
  std::size_t n_, k_;
  bool started_ = false, done_ = false;
  std::vector<std::size_t> piv_;
  std::vector<std::size_t> free_;  // flat positions (row * n + col) of free entries
  SubspaceHandle cur_;
};

/// Number of k-subspaces of F_q^n, saturating at UINT64_MAX.
std::uint64_t gbinom_saturating(std::size_t n, std::size_t k, unsigned q);

/// Calls fn for every k-subspace; stops early when fn returns false.
/// Throws BudgetExceeded when the count exceeds `cap`.
void for_each_subspace(const FieldPtr& f, std::size_t n, std::size_t k, std::uint64_t cap,
                       const std::function<bool(const SubspaceHandle&)>& fn);
std::vector<SubspaceHandle> enumerate_subspaces(const FieldPtr& f, std::size_t n, std::size_t k,
                                                std::uint64_t cap = 10'000'000);

/// Base-q integer index of a vector (entry i has weight q^i).
std::uint64_t vector_index(std::span<const Elem> v, unsigned q);
FqVector vector_from_index(std::uint64_t idx, std::size_t n, unsigned q);

/// [n]_q = (q^n - 1)/(q - 1) with saturation.
std::uint64_t projective_count(std::size_t n, unsigned q);
/// The i-th point of PG(n-1, q) as its canonical representative (first nonzero entry 1).
/// Points are ordered by the position of that leading 1, then by the tail as a base-q number.
FqVector projective_point(std::uint64_t i, std::size_t n, unsigned q);
/// Inverse of projective_point for a nonzero vector (any scalar multiple).
std::uint64_t projective_index(const Field& f, std::span<const Elem> v);
/// Matrix whose columns are all points of PG(n-1, q) in index order.
FqMatrix projective_geometry(const FieldPtr& f, std::size_t n);

}  // namespace fqm
