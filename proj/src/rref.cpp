#include "fqm/rref.hpp"

#include <algorithm>
#include <bit>

#include "fqm/errors.hpp"

namespace fqm {

FqVector Dependency::kernel_vector(const Field& f, std::size_t m) const {
  FqVector x(m, 0);
  x[column] = 1;
  for (auto [c, a] : terms) x[c] = f.neg(a);
  return x;
}

IndexSet Dependency::support() const {
  IndexSet s;
  s.reserve(terms.size() + 1);
  s.push_back(column);
  for (auto& t : terms) s.push_back(t.first);
  std::sort(s.begin(), s.end());
  return s;
}

RrefState::RrefState(FieldPtr f, std::size_t n, bool track_transform, bool keep_dependencies)
    : field_(std::move(f)),
      n_(n),
      binary_(field_->order() == 2),
      track_(track_transform || keep_dependencies),
      keep_(keep_dependencies),
      words_((n + 63) / 64),
      slot_(n, -1) {
  if (binary_) {
    pivmask_.assign(words_, 0);
    wv_.resize(words_);
    wt_.resize(words_);
  } else {
    gv_.resize(n);
    gc_.resize(n);
  }
}

void RrefState::reduce_binary(std::uint64_t* v, std::uint64_t* t) const {
  for (std::size_t w = 0; w < words_; ++w) {
    std::uint64_t done = 0;
    for (;;) {
      const std::uint64_t x = v[w] & pivmask_[w] & ~done;
      if (!x) break;
      const int bit = std::countr_zero(x);
      done |= (std::uint64_t(2) << bit) - 1;
      const std::size_t ord = std::size_t(slot_[w * 64 + bit]);
      const std::uint64_t* b = &bbasis_[ord * words_];
      for (std::size_t u = w; u < words_; ++u) v[u] ^= b[u];
      if (t) {
        const std::uint64_t* tr = &btrans_[ord * words_];
        for (std::size_t u = 0; u < words_; ++u) t[u] ^= tr[u];
      }
    }
  }
}

void RrefState::reduce_generic(Elem* v, Elem* coef) const {
  const Field& f = *field_;
  for (std::size_t p = 0; p < n_; ++p) {
    const Elem c = v[p];
    if (c == 0 || slot_[p] < 0) continue;
    const std::size_t ord = std::size_t(slot_[p]);
    axpy(f, f.neg(c), &gbasis_[ord * n_ + p], v + p, n_ - p);
    if (coef) coef[ord] = c;
  }
}

void RrefState::expand_generic(const Elem* coef, Dependency& out) const {
  const Field& f = *field_;
  std::vector<Elem> w(coef, coef + rank_);
  std::vector<Elem> on_col(rank_, 0);
  for (std::size_t t = rank_; t-- > 0;) {
    if (w[t] == 0) continue;
    const Elem ws = f.mul(w[t], records_[t].scale);
    on_col[t] = f.add(on_col[t], ws);
    for (auto [u, c] : records_[t].steps) w[u] = f.sub(w[u], f.mul(ws, c));
  }
  out.terms.clear();
  for (std::size_t t = 0; t < rank_; ++t)
    if (on_col[t]) out.terms.emplace_back(col_of_[t], on_col[t]);
  std::sort(out.terms.begin(), out.terms.end());
}

bool RrefState::insert(std::span<const Elem> v) {
  if (v.size() != n_) throw InvalidParam("column length does not match the state dimension");
  const std::size_t col = columns_++;
  if (binary_) {
    std::fill(wv_.begin(), wv_.end(), 0);
    for (std::size_t i = 0; i < n_; ++i)
      if (v[i]) wv_[i >> 6] |= std::uint64_t(1) << (i & 63);
    if (track_) std::fill(wt_.begin(), wt_.end(), 0);
    reduce_binary(wv_.data(), track_ ? wt_.data() : nullptr);
    std::size_t pivot = n_;
    for (std::size_t w = 0; w < words_; ++w)
      if (wv_[w]) {
        pivot = w * 64 + std::size_t(std::countr_zero(wv_[w]));
        break;
      }
    if (pivot == n_) {
      if (track_) {
        last_.column = col;
        last_.terms.clear();
        for (std::size_t w = 0; w < words_; ++w)
          for (std::uint64_t x = wt_[w]; x; x &= x - 1)
            last_.terms.emplace_back(col_of_[w * 64 + std::size_t(std::countr_zero(x))], Elem(1));
        std::sort(last_.terms.begin(), last_.terms.end());
        has_last_ = true;
        if (keep_) deps_.push_back(last_);
      }
      return false;
    }
    const std::size_t ord = rank_++;
    slot_[pivot] = int(ord);
    pivot_of_.push_back(pivot);
    col_of_.push_back(col);
    pivmask_[pivot >> 6] |= std::uint64_t(1) << (pivot & 63);
    bbasis_.insert(bbasis_.end(), wv_.begin(), wv_.end());
    if (track_) {
      wt_[ord >> 6] ^= std::uint64_t(1) << (ord & 63);
      btrans_.insert(btrans_.end(), wt_.begin(), wt_.end());
    }
    return true;
  }

  const Field& f = *field_;
  std::copy(v.begin(), v.end(), gv_.begin());
  if (track_) std::fill(gc_.begin(), gc_.begin() + std::ptrdiff_t(rank_), 0);
  reduce_generic(gv_.data(), track_ ? gc_.data() : nullptr);
  std::size_t pivot = n_;
  for (std::size_t i = 0; i < n_; ++i)
    if (gv_[i]) {
      pivot = i;
      break;
    }
  if (pivot == n_) {
    if (track_) {
      last_.column = col;
      expand_generic(gc_.data(), last_);
      has_last_ = true;
      if (keep_) deps_.push_back(last_);
    }
    return false;
  }
  const std::size_t ord = rank_++;
  const Elem s = f.inv(gv_[pivot]);
  scale(f, s, gv_.data() + pivot, n_ - pivot);
  slot_[pivot] = int(ord);
  pivot_of_.push_back(pivot);
  col_of_.push_back(col);
  gbasis_.insert(gbasis_.end(), gv_.begin(), gv_.end());
  if (track_) {
    Record r;
    r.scale = s;
    for (std::size_t u = 0; u < ord; ++u)
      if (gc_[u]) r.steps.emplace_back(std::uint32_t(u), gc_[u]);
    records_.push_back(std::move(r));
  }
  return true;
}

bool RrefState::in_span(std::span<const Elem> v) const {
  if (binary_) {
    std::vector<std::uint64_t> w(words_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      if (v[i]) w[i >> 6] |= std::uint64_t(1) << (i & 63);
    reduce_binary(w.data(), nullptr);
    return std::all_of(w.begin(), w.end(), [](std::uint64_t x) { return x == 0; });
  }
  std::vector<Elem> w(v.begin(), v.end());
  reduce_generic(w.data(), nullptr);
  return std::all_of(w.begin(), w.end(), [](Elem x) { return x == 0; });
}

const Dependency& RrefState::last_dependency() const {
  if (!track_) throw InvalidParam("dependency requested without transform tracking");
  if (!has_last_) throw InvalidParam("no dependent column has been fed");
  return last_;
}

FqMatrix RrefState::reduced_basis() const {
  const Field& f = *field_;
  // rows sorted by pivot
  std::vector<std::size_t> order(rank_);
  for (std::size_t i = 0; i < rank_; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return pivot_of_[a] < pivot_of_[b]; });
  std::vector<FqVector> rows(rank_, FqVector(n_, 0));
  for (std::size_t r = 0; r < rank_; ++r) {
    const std::size_t ord = order[r];
    for (std::size_t i = 0; i < n_; ++i)
      rows[r][i] = binary_ ? Elem((bbasis_[ord * words_ + (i >> 6)] >> (i & 63)) & 1)
                           : gbasis_[ord * n_ + i];
  }
  for (std::size_t r = rank_; r-- > 0;) {
    const std::size_t p = pivot_of_[order[r]];
    for (std::size_t s = 0; s < r; ++s) {
      const Elem c = rows[s][p];
      if (c) axpy(f, f.neg(c), rows[r].data(), rows[s].data(), n_);
    }
  }
  FqMatrix out(field_, rank_, n_);
  for (std::size_t r = 0; r < rank_; ++r)
    for (std::size_t i = 0; i < n_; ++i) out.set(r, i, rows[r][i]);
  return out;
}

}  // namespace fqm
