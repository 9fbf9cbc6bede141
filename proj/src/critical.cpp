#include <algorithm>
#include <bit>

#include "fqm/errors.hpp"
#include "fqm/matroid.hpp"

namespace fqm {

PointSet::PointSet(FieldPtr f, std::size_t n, std::uint64_t bitmap_limit)
    : f_(std::move(f)), n_(n) {
  std::uint64_t total = 1;
  bool fits = true;
  for (std::size_t i = 0; i < n && fits; ++i) {
    if (total > bitmap_limit / f_->order()) fits = false;
    total *= f_->order();
  }
  if (fits && total <= bitmap_limit) bits_.assign((total + 63) / 64, 0);
}

bool PointSet::insert(std::span<const Elem> v) {
  if (v.size() != n_) throw InvalidParam("point dimension mismatch");
  if (std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; }))
    throw InvalidParam("the zero vector is not a point");
  if (!bits_.empty()) {
    const std::uint64_t idx = vector_index(v, f_->order());
    std::uint64_t& w = bits_[idx >> 6];
    const std::uint64_t bit = std::uint64_t(1) << (idx & 63);
    if (w & bit) return false;
    w |= bit;
  } else {
    FqVector key(v.begin(), v.end());
    if (!seen_.emplace(key, true).second) return false;
  }
  pts_.emplace_back(v.begin(), v.end());
  return true;
}

bool PointSet::contains_index(std::uint64_t idx) const {
  return (bits_[idx >> 6] >> (idx & 63)) & 1;
}

namespace {

bool avoids_bitmap(const PointSet& pts, const SubspaceHandle& s) {
  const Field& f = s.field();
  const std::size_t n = s.ambient(), d = s.dim();
  if (f.order() == 2 && n <= 64) {
    std::uint64_t rows[64];
    for (std::size_t i = 0; i < d; ++i) rows[i] = vector_index(s.row(i), 2);
    std::uint64_t x = 0;
    const std::uint64_t total = std::uint64_t(1) << d;
    for (std::uint64_t g = 1; g < total; ++g) {
      x ^= rows[std::countr_zero(g)];
      if (pts.contains_index(x)) return false;
    }
    return true;
  }
  std::vector<Elem> coef(d, 0);
  FqVector x(n, 0);
  for (;;) {
    std::size_t i = 0;
    for (; i < d; ++i) {
      const Elem next = coef[i] + 1u < f.order() ? Elem(coef[i] + 1) : Elem(0);
      axpy(f, f.sub(next, coef[i]), s.row(i).data(), x.data(), n);
      coef[i] = next;
      if (next != 0) break;
    }
    if (i == d) return true;
    if (pts.contains_index(vector_index(x, f.order()))) return false;
  }
}

bool misses_all(const PointSet& pts, const SubspaceHandle& y) {
  const Field& f = y.field();
  const std::size_t n = y.ambient();
  for (const FqVector& p : pts.points()) {
    bool nonzero = false;
    for (std::size_t i = 0; i < y.dim() && !nonzero; ++i) {
      Elem dot = 0;
      auto row = y.row(i);
      for (std::size_t j = 0; j < n; ++j)
        if (row[j] && p[j]) dot = f.add(dot, f.mul(row[j], p[j]));
      nonzero = dot != 0;
    }
    if (!nonzero) return false;
  }
  return true;
}

SubspaceHandle annihilator(const SubspaceHandle& y) {
  const std::size_t n = y.ambient();
  FqMatrix ym(y.field_ptr(), y.dim(), n);
  for (std::size_t i = 0; i < y.dim(); ++i)
    for (std::size_t j = 0; j < n; ++j) ym.set(i, j, y.row(i)[j]);
  return SubspaceHandle::span_of(ym.field_ptr(), n, kernel_basis(ym));
}

}  // namespace

std::optional<SubspaceHandle> find_avoiding_subspace(const PointSet& pts, std::size_t k,
                                                     const Budget& b, CriticalMethod how) {
  const std::size_t n = pts.ambient();
  const FieldPtr& f = pts.field_ptr();
  if (k > n) throw InvalidParam("codimension exceeds the ambient dimension");
  if (k == n) return SubspaceHandle(f, n);
  if (k == 0) {
    if (!pts.points().empty()) return std::nullopt;
    std::vector<FqVector> unit;
    for (std::size_t i = 0; i < n; ++i) {
      FqVector e(n, 0);
      e[i] = 1;
      unit.push_back(e);
    }
    return SubspaceHandle::span_of(f, n, unit);
  }
  bool bitmap = pts.has_bitmap() && k >= 2;
  if (how == CriticalMethod::Bitmap) {
    if (!pts.has_bitmap()) throw BudgetExceeded("vector bitmap too large for the bitmap search");
    bitmap = true;
  } else if (how == CriticalMethod::Dual) {
    bitmap = false;
  }
  std::optional<SubspaceHandle> found;
  if (bitmap) {
    for_each_subspace(f, n, n - k, b.subspaces, [&](const SubspaceHandle& s) {
      if (!avoids_bitmap(pts, s)) return true;
      found = s;
      return false;
    });
  } else {
    for_each_subspace(f, n, k, b.subspaces, [&](const SubspaceHandle& y) {
      if (!misses_all(pts, y)) return true;
      found = annihilator(y);
      return false;
    });
  }
  return found;
}

std::size_t critical_number(const RepMatroid& mat, const Budget& b, CriticalMethod how) {
  const FqMatrix& a = mat.matrix();
  PointSet pts(a.field_ptr(), a.rows());
  for (std::size_t c = 0; c < a.cols(); ++c) {
    auto col = a.column(c);
    if (std::all_of(col.begin(), col.end(), [](Elem x) { return x == 0; }))
      throw LoopPresent("critical number is undefined: column " + std::to_string(c) + " is zero");
    pts.insert(col);
  }
  if (a.cols() == 0) return 0;
  for (std::size_t k = 1; k <= a.rows(); ++k)
    if (find_avoiding_subspace(pts, k, b, how)) return k;
  throw ConsistencyError("no avoiding subspace even at the zero subspace");
}

}  // namespace fqm
