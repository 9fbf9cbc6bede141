#include "fqm/matrix.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fqm/errors.hpp"
#include "fqm/rref.hpp"

namespace fqm {

namespace {

template <unsigned P>
void axpy_prime(Elem c, const Elem* src, Elem* dst, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) dst[i] = Elem((dst[i] + unsigned(c) * src[i]) % P);
}

}  // namespace

void axpy(const Field& f, Elem c, const Elem* src, Elem* dst, std::size_t len) {
  if (c == 0) return;
  const unsigned q = f.order();
  if (q == 2) {
    for (std::size_t i = 0; i < len; ++i) dst[i] ^= src[i];
    return;
  }
  if (f.degree() == 1) {
    switch (q) {
      case 3: return axpy_prime<3>(c, src, dst, len);
      case 5: return axpy_prime<5>(c, src, dst, len);
      case 7: return axpy_prime<7>(c, src, dst, len);
      default: break;
    }
  }
  if (f.has_tables()) {
    const Elem* mr = f.mul_row(c);
    for (std::size_t i = 0; i < len; ++i)
      if (src[i]) dst[i] = f.add(dst[i], mr[src[i]]);
    return;
  }
  for (std::size_t i = 0; i < len; ++i)
    if (src[i]) dst[i] = f.add(dst[i], f.mul(c, src[i]));
}

void scale(const Field& f, Elem c, Elem* v, std::size_t len) {
  if (c == 1) return;
  for (std::size_t i = 0; i < len; ++i) v[i] = f.mul(c, v[i]);
}

void normalize_projective(const Field& f, std::span<Elem> v) {
  for (Elem x : v)
    if (x) {
      scale(f, f.inv(x), v.data(), v.size());
      return;
    }
}

FqMatrix::FqMatrix(FieldPtr f, std::size_t rows, std::size_t cols)
    : field_(std::move(f)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FqMatrix FqMatrix::from_rows(FieldPtr f, const std::vector<std::vector<unsigned>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n ? rows[0].size() : 0;
  FqMatrix a(f, n, m);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != m) throw InvalidParam("ragged matrix rows");
    for (std::size_t c = 0; c < m; ++c) {
      if (rows[r][c] >= f->order()) throw InvalidParam("entry outside the field");
      a.set(r, c, Elem(rows[r][c]));
    }
  }
  return a;
}

FqMatrix FqMatrix::from_columns(FieldPtr f, std::size_t rows, const std::vector<FqVector>& cols) {
  FqMatrix a(std::move(f), rows, 0);
  for (auto& c : cols) a.append_column(c);
  return a;
}

void FqMatrix::append_column(std::span<const Elem> v) {
  if (v.size() != rows_) throw InvalidParam("column length mismatch");
  data_.insert(data_.end(), v.begin(), v.end());
  ++cols_;
}

FqMatrix FqMatrix::select_columns(const IndexSet& idx) const {
  FqMatrix out(field_, rows_, 0);
  out.data_.reserve(idx.size() * rows_);
  for (std::size_t c : idx) out.append_column(column(c));
  return out;
}

bool FqMatrix::operator==(const FqMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && field_->order() == o.field_->order() &&
         data_ == o.data_;
}

std::size_t rank(const FqMatrix& a) {
  RrefState st(a.field_ptr(), a.rows(), false);
  for (std::size_t c = 0; c < a.cols() && st.rank() < a.rows(); ++c) st.insert(a.column(c));
  return st.rank();
}

std::vector<FqVector> kernel_basis(const FqMatrix& a) {
  RrefState st(a.field_ptr(), a.rows(), true, true);
  for (std::size_t c = 0; c < a.cols(); ++c) st.insert(a.column(c));
  std::vector<FqVector> out;
  out.reserve(st.dependencies().size());
  for (auto& d : st.dependencies()) out.push_back(d.kernel_vector(a.field(), a.cols()));
  return out;
}

namespace {

// Row-major working copy with Gauss-Jordan restricted to the chosen pivot columns.
struct RowWork {
  const Field& f;
  std::size_t n, m;
  std::vector<Elem> d;  // row-major

  explicit RowWork(const FqMatrix& a) : f(a.field()), n(a.rows()), m(a.cols()), d(n * m) {
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t r = 0; r < n; ++r) d[r * m + c] = a.at(r, c);
  }
  Elem* row(std::size_t r) { return d.data() + r * m; }

  // Pivots on column c among rows not yet used; returns the pivot row or n.
  std::size_t pivot(std::size_t c, std::vector<bool>& used) {
    std::size_t pr = n;
    for (std::size_t r = 0; r < n; ++r)
      if (!used[r] && row(r)[c]) {
        pr = r;
        break;
      }
    if (pr == n) return n;
    used[pr] = true;
    scale(f, f.inv(row(pr)[c]), row(pr), m);
    for (std::size_t r = 0; r < n; ++r)
      if (r != pr && row(r)[c]) axpy(f, f.neg(row(r)[c]), row(pr), row(r), m);
    return pr;
  }
};

}  // namespace

FqMatrix contract(const FqMatrix& a, const IndexSet& x) {
  RowWork w(a);
  std::vector<bool> used(a.rows(), false);
  std::vector<bool> in_x(a.cols(), false);
  for (std::size_t c : x) {
    if (c >= a.cols()) throw InvalidParam("contraction index out of range");
    in_x[c] = true;
  }
  for (std::size_t c : x) w.pivot(c, used);
  std::size_t keep_rows = 0;
  for (bool u : used) keep_rows += !u;
  std::size_t keep_cols = 0;
  for (bool b : in_x) keep_cols += !b;
  FqMatrix out(a.field_ptr(), keep_rows, keep_cols);
  std::size_t rr = 0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (used[r]) continue;
    std::size_t cc = 0;
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!in_x[c]) out.set(rr, cc++, w.row(r)[c]);
    ++rr;
  }
  return out;
}

FqMatrix delete_columns(const FqMatrix& a, const IndexSet& x) {
  std::vector<bool> drop(a.cols(), false);
  for (std::size_t c : x) {
    if (c >= a.cols()) throw InvalidParam("deletion index out of range");
    drop[c] = true;
  }
  IndexSet keep;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!drop[c]) keep.push_back(c);
  return a.select_columns(keep);
}

FqMatrix row_reduce(const FqMatrix& a) {
  RowWork w(a);
  std::vector<bool> used(a.rows(), false);
  std::vector<std::size_t> prow;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    const std::size_t r = w.pivot(c, used);
    if (r != a.rows()) prow.push_back(r);
  }
  FqMatrix out(a.field_ptr(), prow.size(), a.cols());
  for (std::size_t i = 0; i < prow.size(); ++i)
    for (std::size_t c = 0; c < a.cols(); ++c) out.set(i, c, w.row(prow[i])[c]);
  return out;
}

FqMatrix random_uniform_matrix(std::size_t n, std::size_t m, const FieldPtr& f, Rng& rng) {
  FqMatrix a(f, n, m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t r = 0; r < n; ++r) a.set(r, c, Elem(rng.below(f->order())));
  return a;
}

FqMatrix read_matrix(std::istream& in) {
  long long q = 0, n = 0, m = 0;
  if (!(in >> q >> n >> m) || q < 2 || n < 0 || m < 0)
    throw IoError("malformed matrix header (expected \"q n m\")");
  FqMatrix a(make_field(unsigned(q)), std::size_t(n), std::size_t(m));
  for (long long r = 0; r < n; ++r)
    for (long long c = 0; c < m; ++c) {
      long long v = -1;
      if (!(in >> v)) throw IoError("matrix body truncated");
      if (v < 0 || v >= q) throw IoError("matrix entry outside [0, q)");
      a.set(std::size_t(r), std::size_t(c), Elem(v));
    }
  return a;
}

void write_matrix(std::ostream& out, const FqMatrix& a) {
  out << a.field().order() << ' ' << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out << (c ? " " : "") << a.at(r, c);
    out << '\n';
  }
}

FqMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix(in);
}

void save_matrix(const std::string& path, const FqMatrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_matrix(out, a);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace fqm
