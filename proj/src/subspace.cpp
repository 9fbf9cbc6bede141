#include "fqm/subspace.hpp"

#include <algorithm>
#include <limits>

#include "fqm/errors.hpp"
#include "fqm/rref.hpp"

namespace fqm {

namespace {

constexpr std::uint64_t kSat = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a && b > kSat / a) return kSat;
  return a * b;
}

}  // namespace

SubspaceHandle::SubspaceHandle(FieldPtr f, std::size_t n) : field_(std::move(f)), n_(n) {}

SubspaceHandle SubspaceHandle::span_of(FieldPtr f, std::size_t n,
                                       const std::vector<FqVector>& vectors) {
  RrefState st(f, n, false);
  for (auto& v : vectors) st.insert(v);
  FqMatrix b = st.reduced_basis();
  SubspaceHandle h(f, n);
  h.dim_ = b.rows();
  h.rows_.resize(h.dim_ * n);
  for (std::size_t r = 0; r < h.dim_; ++r) {
    for (std::size_t c = 0; c < n; ++c) h.rows_[r * n + c] = b.at(r, c);
    for (std::size_t c = 0; c < n; ++c)
      if (b.at(r, c)) {
        h.pivots_.push_back(c);
        break;
      }
  }
  return h;
}

bool SubspaceHandle::contains(std::span<const Elem> v) const {
  const Field& f = *field_;
  FqVector w(v.begin(), v.end());
  for (std::size_t r = 0; r < dim_; ++r) {
    const Elem c = w[pivots_[r]];
    if (c) axpy(f, f.neg(c), rows_.data() + r * n_, w.data(), n_);
  }
  return std::all_of(w.begin(), w.end(), [](Elem x) { return x == 0; });
}

std::vector<FqVector> SubspaceHandle::elements() const {
  const Field& f = *field_;
  const unsigned q = f.order();
  std::vector<FqVector> out;
  std::vector<Elem> coef(dim_, 0);
  for (;;) {
    FqVector v(n_, 0);
    for (std::size_t r = 0; r < dim_; ++r)
      if (coef[r]) axpy(f, coef[r], rows_.data() + r * n_, v.data(), n_);
    out.push_back(std::move(v));
    std::size_t i = 0;
    while (i < dim_ && ++coef[i] == q) coef[i++] = 0;
    if (i == dim_) break;
  }
  return out;
}

bool SubspaceHandle::operator<(const SubspaceHandle& o) const {
  if (dim_ != o.dim_) return dim_ < o.dim_;
  if (pivots_ != o.pivots_) return pivots_ < o.pivots_;
  return rows_ < o.rows_;
}

SubspaceEnumerator::SubspaceEnumerator(FieldPtr f, std::size_t n, std::size_t k)
    : field_(std::move(f)), n_(n), k_(k), cur_(field_, n) {
  if (k > n) throw InvalidParam("subspace dimension exceeds ambient dimension");
  piv_.resize(k);
  for (std::size_t i = 0; i < k; ++i) piv_[i] = i;
  cur_.dim_ = k;
  cur_.rows_.assign(k * n, 0);
}

void SubspaceEnumerator::load_pattern() {
  std::fill(cur_.rows_.begin(), cur_.rows_.end(), 0);
  free_.clear();
  std::vector<bool> is_piv(n_, false);
  for (std::size_t p : piv_) is_piv[p] = true;
  for (std::size_t r = 0; r < k_; ++r) {
    cur_.rows_[r * n_ + piv_[r]] = 1;
    for (std::size_t c = piv_[r] + 1; c < n_; ++c)
      if (!is_piv[c]) free_.push_back(r * n_ + c);
  }
  cur_.pivots_ = piv_;
}

bool SubspaceEnumerator::next_pattern() {
  // next k-combination of {0..n-1} in lexicographic order
  std::size_t i = k_;
  while (i > 0 && piv_[i - 1] == n_ - k_ + i - 1) --i;
  if (i == 0) return false;
  ++piv_[i - 1];
  for (std::size_t j = i; j < k_; ++j) piv_[j] = piv_[j - 1] + 1;
  return true;
}

bool SubspaceEnumerator::next() {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    load_pattern();
    return true;
  }
  const Elem q = Elem(field_->order());
  // odometer over free entries, last entry fastest
  for (std::size_t i = free_.size(); i-- > 0;) {
    Elem& x = cur_.rows_[free_[i]];
    if (++x < q) return true;
    x = 0;
  }
  if (!next_pattern()) {
    done_ = true;
    return false;
  }
  load_pattern();
  return true;
}

std::uint64_t gbinom_saturating(std::size_t n, std::size_t k, unsigned q) {
  if (k > n) return 0;
  // product over i of (q^{n-i}-1)/(q^{k-i}-1), accumulated as exact integers via
  // the recurrence G(n,k) = G(n-1,k-1) + q^k G(n-1,k)
  std::vector<std::uint64_t> row(k + 1, 0);
  row[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    for (std::size_t j = std::min(m, k); j >= 1; --j) {
      std::uint64_t qj = 1;
      for (std::size_t t = 0; t < j; ++t) qj = sat_mul(qj, q);
      const std::uint64_t term = sat_mul(qj, row[j]);
      row[j] = (term == kSat || row[j - 1] > kSat - term) ? kSat : row[j - 1] + term;
    }
  }
  return row[k];
}

void for_each_subspace(const FieldPtr& f, std::size_t n, std::size_t k, std::uint64_t cap,
                       const std::function<bool(const SubspaceHandle&)>& fn) {
  const std::uint64_t count = gbinom_saturating(n, k, f->order());
  if (count > cap)
    throw BudgetExceeded("enumerating " + std::to_string(k) + "-subspaces of F_" +
                         std::to_string(f->order()) + "^" + std::to_string(n) +
                         " exceeds the subspace budget");
  SubspaceEnumerator it(f, n, k);
  while (it.next())
    if (!fn(it.current())) return;
}

std::vector<SubspaceHandle> enumerate_subspaces(const FieldPtr& f, std::size_t n, std::size_t k,
                                                std::uint64_t cap) {
  std::vector<SubspaceHandle> out;
  for_each_subspace(f, n, k, cap, [&](const SubspaceHandle& h) {
    out.push_back(h);
    return true;
  });
  return out;
}

std::uint64_t vector_index(std::span<const Elem> v, unsigned q) {
  std::uint64_t idx = 0;
  for (std::size_t i = v.size(); i-- > 0;) idx = idx * q + v[i];
  return idx;
}

FqVector vector_from_index(std::uint64_t idx, std::size_t n, unsigned q) {
  FqVector v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = Elem(idx % q);
    idx /= q;
  }
  return v;
}

std::uint64_t projective_count(std::size_t n, unsigned q) {
  std::uint64_t total = 0, pw = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total = (total > kSat - pw) ? kSat : total + pw;
    pw = sat_mul(pw, q);
  }
  return total;
}

FqVector projective_point(std::uint64_t i, std::size_t n, unsigned q) {
  FqVector v(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t block = 1;
    for (std::size_t t = j + 1; t < n; ++t) block *= q;
    if (i < block) {
      v[j] = 1;
      for (std::size_t t = j + 1; t < n; ++t) {
        v[t] = Elem(i % q);
        i /= q;
      }
      return v;
    }
    i -= block;
  }
  throw InvalidParam("projective point index out of range");
}

std::uint64_t projective_index(const Field& f, std::span<const Elem> v) {
  const std::size_t n = v.size();
  const unsigned q = f.order();
  std::uint64_t offset = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t block = 1;
    for (std::size_t t = j + 1; t < n; ++t) block *= q;
    if (v[j] == 0) {
      offset += block;
      continue;
    }
    const Elem s = f.inv(v[j]);
    std::uint64_t tail = 0;
    for (std::size_t t = n; t-- > j + 1;) tail = tail * q + f.mul(s, v[t]);
    return offset + tail;
  }
  throw InvalidParam("the zero vector is not a projective point");
}

FqMatrix projective_geometry(const FieldPtr& f, std::size_t n) {
  const std::uint64_t cnt = projective_count(n, f->order());
  FqMatrix a(f, n, 0);
  for (std::uint64_t i = 0; i < cnt; ++i) a.append_column(projective_point(i, n, f->order()));
  return a;
}

}  // namespace fqm
