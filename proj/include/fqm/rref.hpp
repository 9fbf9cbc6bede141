#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fqm/matrix.hpp"

namespace fqm {

/// a_column = sum of coeff * a_term over the listed terms.
struct Dependency {
  std::size_t column = 0;
  std::vector<std::pair<std::size_t, Elem>> terms;

  /// The kernel vector x (length m) with x_column = 1, x_term = -coeff.
  FqVector kernel_vector(const Field& f, std::size_t m) const;
  /// Sorted support of the kernel vector (column included).
  IndexSet support() const;
};

/// Incremental echelon form of the span of the columns fed so far.
///
/// Basis vectors are kept with pivot = first nonzero entry, scaled to 1, and
/// sorted by pivot. Each basis vector carries the row-operation record that
/// writes it in terms of the original columns, so a dependent column's
/// coordinates come out without re-elimination. GF(2) uses packed words and
/// an explicit transform; other fields store the elimination steps and
/// expand them on demand.
class RrefState {
 public:
  RrefState(FieldPtr f, std::size_t n, bool track_transform = true, bool keep_dependencies = false);

  /// Feeds the next column; returns true if it raised the rank.
  bool insert(std::span<const Elem> v);
  bool in_span(std::span<const Elem> v) const;

  std::size_t rank() const { return rank_; }
  std::size_t columns() const { return columns_; }
  std::size_t corank() const { return columns_ - rank_; }
  std::size_t dim() const { return n_; }
  const Field& field() const { return *field_; }

  /// Pivot rows in insertion order of the basis vectors.
  const std::vector<std::size_t>& pivots() const { return pivot_of_; }
  /// Column index of each independent basis vector, by insertion ordinal.
  const std::vector<std::size_t>& independent_columns() const { return col_of_; }

  /// Dependency of the most recent dependent column (requires track_transform).
  const Dependency& last_dependency() const;
  bool has_dependency() const { return has_last_; }
  /// Dependencies of every dependent column so far (requires keep_dependencies).
  const std::vector<Dependency>& dependencies() const { return deps_; }

  /// Reduced row echelon basis of the span (rank x n).
  FqMatrix reduced_basis() const;

 private:
  void reduce_binary(std::uint64_t* v, std::uint64_t* t) const;
  void reduce_generic(Elem* v, Elem* coef) const;
  void expand_generic(const Elem* coef, Dependency& out) const;

  FieldPtr field_;
  std::size_t n_;
  bool binary_;
  bool track_;
  bool keep_;
  std::size_t rank_ = 0, columns_ = 0;
  std::size_t words_ = 0;  // words per packed vector (binary)

  std::vector<int> slot_;              // pivot row -> ordinal, or -1
  std::vector<std::size_t> pivot_of_;  // ordinal -> pivot row
  std::vector<std::size_t> col_of_;    // ordinal -> column index

  // binary backend
  std::vector<std::uint64_t> pivmask_;
  std::vector<std::uint64_t> bbasis_;  // ordinal-major, words_ each
  std::vector<std::uint64_t> btrans_;  // ordinal-major, words_ each, bits over ordinals

  // generic backend
  std::vector<Elem> gbasis_;  // ordinal-major, n each
  struct Record {
    Elem scale;
    std::vector<std::pair<std::uint32_t, Elem>> steps;  // (ordinal, c) subtracted
  };
  std::vector<Record> records_;

  mutable std::vector<std::uint64_t> wv_, wt_;
  mutable std::vector<Elem> gv_, gc_;

  bool has_last_ = false;
  Dependency last_;
  std::vector<Dependency> deps_;
};

}  // namespace fqm
