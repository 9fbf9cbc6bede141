#include "fqm/ranker.hpp"

#include <bit>

#include "fqm/errors.hpp"

namespace fqm {

namespace {

struct XorBasis {
  std::uint64_t slot[64] = {};
  // Returns the slot used, or -1 when v is in the span.
  int insert(std::uint64_t v) {
    while (v) {
      const int h = 63 - std::countl_zero(v);
      if (!slot[h]) {
        slot[h] = v;
        return h;
      }
      v ^= slot[h];
    }
    return -1;
  }
};

// Echelon basis over a general field with undo by pivot slot.
struct GenericBasis {
  const Field& f;
  std::size_t n;
  std::vector<Elem> rows;  // slot-major
  std::vector<bool> used;
  std::vector<Elem> tmp;

  GenericBasis(const Field& field, std::size_t dim)
      : f(field), n(dim), rows(dim * dim, 0), used(dim, false), tmp(dim) {}

  long insert(std::span<const Elem> v) {
    std::copy(v.begin(), v.end(), tmp.begin());
    for (std::size_t p = 0; p < n; ++p) {
      const Elem c = tmp[p];
      if (!c) continue;
      if (used[p]) {
        axpy(f, f.neg(c), &rows[p * n + p], &tmp[p], n - p);
        continue;
      }
      const Elem s = f.inv(c);
      for (std::size_t i = p; i < n; ++i) rows[p * n + i] = f.mul(s, tmp[i]);
      used[p] = true;
      return long(p);
    }
    return -1;
  }
  void remove(long p) { used[std::size_t(p)] = false; }
};

}  // namespace

SubsetRanker::SubsetRanker(const FqMatrix& a)
    : a_(a), n_(a.rows()), m_(a.cols()), packed_(a.field().order() == 2 && a.rows() <= 64) {
  if (m_ > 64) throw InvalidParam("subset ranking supports at most 64 columns");
  if (packed_) {
    bits_.resize(m_);
    for (std::size_t c = 0; c < m_; ++c) {
      std::uint64_t w = 0;
      for (std::size_t r = 0; r < n_; ++r)
        if (a.at(r, c)) w |= std::uint64_t(1) << r;
      bits_[c] = w;
    }
  }
}

std::size_t SubsetRanker::rank(Mask s) const {
  std::size_t r = 0;
  if (packed_) {
    XorBasis b;
    for (; s && r < n_; s &= s - 1)
      r += b.insert(bits_[std::size_t(std::countr_zero(s))]) >= 0;
    return r;
  }
  GenericBasis b(a_.field(), n_);
  for (; s && r < n_; s &= s - 1) r += b.insert(a_.column(std::size_t(std::countr_zero(s)))) >= 0;
  return r;
}

std::vector<std::uint8_t> SubsetRanker::rank_table() const {
  if (m_ > 26) throw InvalidParam("rank table limited to 26 columns");
  std::vector<std::uint8_t> table(std::size_t(1) << m_, 0);
  if (packed_) {
    XorBasis b;
    // depth-first over include/exclude decisions, undoing basis slots on return
    auto dfs = [&](auto&& self, std::size_t i, Mask mask, std::uint8_t r) -> void {
      if (i == m_) {
        table[mask] = r;
        return;
      }
      self(self, i + 1, mask, r);
      const int slot = b.insert(bits_[i]);
      self(self, i + 1, mask | (Mask(1) << i), std::uint8_t(r + (slot >= 0)));
      if (slot >= 0) b.slot[slot] = 0;
    };
    dfs(dfs, 0, 0, 0);
    return table;
  }
  GenericBasis b(a_.field(), n_);
  auto dfs = [&](auto&& self, std::size_t i, Mask mask, std::uint8_t r) -> void {
    if (i == m_) {
      table[mask] = r;
      return;
    }
    self(self, i + 1, mask, r);
    const long slot = b.insert(a_.column(i));
    self(self, i + 1, mask | (Mask(1) << i), std::uint8_t(r + (slot >= 0)));
    if (slot >= 0) b.remove(slot);
  };
  dfs(dfs, 0, 0, 0);
  return table;
}

}  // namespace fqm
