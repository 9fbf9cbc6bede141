#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fqm/field.hpp"
#include "fqm/rng.hpp"

namespace fqm {

using FqVector = std::vector<Elem>;
using IndexSet = std::vector<std::size_t>;

/// Dense n x m matrix over F_q, stored column-major.
class FqMatrix {
 public:
  FqMatrix() = default;
  FqMatrix(FieldPtr f, std::size_t rows, std::size_t cols);

  /// Rows given as nested lists (convenient for literals in tests).
  static FqMatrix from_rows(FieldPtr f, const std::vector<std::vector<unsigned>>& rows);
  static FqMatrix from_columns(FieldPtr f, std::size_t rows, const std::vector<FqVector>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }

  Elem at(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  void set(std::size_t r, std::size_t c, Elem v) { data_[c * rows_ + r] = v; }
  std::span<const Elem> column(std::size_t c) const {
    return {data_.data() + c * rows_, rows_};
  }
  std::span<Elem> column(std::size_t c) { return {data_.data() + c * rows_, rows_}; }

  void append_column(std::span<const Elem> v);
  FqMatrix select_columns(const IndexSet& idx) const;

  bool operator==(const FqMatrix& o) const;

 private:
  FieldPtr field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Elem> data_;
};

std::size_t rank(const FqMatrix& a);
/// Basis of {x : Ax = 0}; has m - rank(A) vectors.
std::vector<FqVector> kernel_basis(const FqMatrix& a);
/// Representation of M/X: n - rank(A_X) rows, columns E \ X in original order.
FqMatrix contract(const FqMatrix& a, const IndexSet& x);
/// A with the columns in X removed.
FqMatrix delete_columns(const FqMatrix& a, const IndexSet& x);
FqMatrix random_uniform_matrix(std::size_t n, std::size_t m, const FieldPtr& f, Rng& rng);
/// Nonzero rows of the reduced row echelon form of A (same column matroid, full row rank).
FqMatrix row_reduce(const FqMatrix& a);

/// Text format: "q n m" then n lines of m integers.
FqMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const FqMatrix& a);
FqMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const FqMatrix& a);

/// Scale v so that its first nonzero entry is 1 (no-op on the zero vector).
void normalize_projective(const Field& f, std::span<Elem> v);

/// dst += c * src over F_q, vectorized for prime fields.
void axpy(const Field& f, Elem c, const Elem* src, Elem* dst, std::size_t len);
void scale(const Field& f, Elem c, Elem* v, std::size_t len);

}  // namespace fqm
