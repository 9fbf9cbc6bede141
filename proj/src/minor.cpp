#include <algorithm>
#include <bit>
#include <map>

#include "fqm/errors.hpp"
#include "fqm/matroid.hpp"

namespace fqm {

namespace {

Mask next_combination(Mask x) {
  const Mask c = x & (~x + 1);
  const Mask r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

// Histogram of ranks per subset size.
std::vector<std::uint32_t> rank_signature(const std::vector<std::uint8_t>& rk, std::size_t m) {
  std::vector<std::uint32_t> h((m + 1) * (m + 1), 0);
  for (Mask s = 0; s < (Mask(1) << m); ++s) ++h[std::size_t(std::popcount(s)) * (m + 1) + rk[s]];
  return h;
}

// Per element: histogram of (size, rank) over subsets containing it.
std::vector<std::vector<std::uint32_t>> element_signatures(const std::vector<std::uint8_t>& rk,
                                                           std::size_t m) {
  std::vector<std::vector<std::uint32_t>> sig(m, std::vector<std::uint32_t>((m + 1) * (m + 1), 0));
  for (Mask s = 1; s < (Mask(1) << m); ++s) {
    const std::size_t cell = std::size_t(std::popcount(s)) * (m + 1) + rk[s];
    for (Mask t = s; t; t &= t - 1) ++sig[std::size_t(std::countr_zero(t))][cell];
  }
  return sig;
}

}  // namespace

std::optional<IndexSet> isomorphism(const std::vector<std::uint8_t>& ra,
                                    const std::vector<std::uint8_t>& rb, std::size_t m) {
  if (ra.size() != rb.size() || ra.size() != (std::size_t(1) << m)) return std::nullopt;
  if (rank_signature(ra, m) != rank_signature(rb, m)) return std::nullopt;
  const auto sa = element_signatures(ra, m), sb = element_signatures(rb, m);
  IndexSet image(m, 0);
  std::vector<bool> used(m, false);
  std::vector<Mask> img(std::size_t(1) << m, 0);
  auto assign = [&](auto&& self, std::size_t i) -> bool {
    if (i == m) return true;
    const Mask lower = Mask(1) << i;
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j] || sa[i] != sb[j]) continue;
      bool ok = true;
      for (Mask s = 0; s < lower && ok; ++s)
        ok = ra[s | lower] == rb[img[s] | (Mask(1) << j)];
      if (!ok) continue;
      for (Mask s = 0; s < lower; ++s) img[s | lower] = img[s] | (Mask(1) << j);
      used[j] = true;
      image[i] = j;
      if (self(self, i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  if (!assign(assign, 0)) return std::nullopt;
  return image;
}

std::optional<MinorWitness> has_minor(const RepMatroid& m, const RepMatroid& n, const Budget& b) {
  const std::size_t mm = m.size(), mn = n.size();
  if (mm > b.minor_max_m)
    throw BudgetExceeded("minor search over " + std::to_string(mm) +
                         " elements exceeds the minor budget");
  if (mn > mm || n.rank() > m.rank() || n.corank() > m.corank()) return std::nullopt;
  const std::size_t a = m.rank() - n.rank();
  const auto rn = SubsetRanker(n.matrix()).rank_table();
  SubsetRanker rm(m.matrix());
  const Mask end = Mask(1) << mm;
  for (Mask c = (Mask(1) << a) - 1; c < end; c = next_combination(c)) {
    if (rm.rank(c) != a) {
      if (a == 0) break;
      continue;
    }
    const IndexSet cset = indices_of(c);
    IndexSet rest;
    for (std::size_t i = 0; i < mm; ++i)
      if (!((c >> i) & 1)) rest.push_back(i);
    const FqMatrix mc = contract(m.matrix(), cset);
    const std::size_t k = rest.size();
    const auto rc = SubsetRanker(mc).rank_table();
    std::vector<std::uint8_t> rt(std::size_t(1) << mn);
    for (Mask t = (Mask(1) << mn) - 1; t < (Mask(1) << k); t = next_combination(t)) {
      if (rc[t] != n.rank()) {
        if (mn == 0) break;
        continue;
      }
      IndexSet pos = indices_of(t);
      for (Mask s = 0; s < (Mask(1) << mn); ++s) {
        Mask e = 0;
        for (Mask u = s; u; u &= u - 1) e |= Mask(1) << pos[std::size_t(std::countr_zero(u))];
        rt[s] = rc[e];
      }
      auto iso = isomorphism(rn, rt, mn);
      if (iso) {
        MinorWitness w;
        w.contract = cset;
        std::vector<bool> keep(mm, false);
        for (std::size_t i = 0; i < mn; ++i) {
          w.image.push_back(rest[pos[(*iso)[i]]]);
          keep[w.image.back()] = true;
        }
        for (std::size_t i : rest)
          if (!keep[i]) w.remove.push_back(i);
        return w;
      }
      if (mn == 0) break;
    }
    if (a == 0) break;
  }
  return std::nullopt;
}

bool verify_minor(const RepMatroid& m, const RepMatroid& n, const MinorWitness& w) {
  const std::size_t mm = m.size();
  std::vector<int> role(mm, 0);  // 1 contract, 2 delete, 3 kept
  for (std::size_t i : w.contract) role.at(i) = 1;
  for (std::size_t i : w.remove) {
    if (role.at(i)) return false;
    role[i] = 2;
  }
  if (w.image.size() != n.size()) return false;
  for (std::size_t i : w.image) {
    if (role.at(i)) return false;
    role[i] = 3;
  }
  for (int r : role)
    if (!r) return false;
  const FqMatrix mc = contract(m.matrix(), w.contract);
  // column position of each original element inside M/C
  std::vector<std::size_t> pos(mm, 0);
  std::size_t p = 0;
  for (std::size_t i = 0; i < mm; ++i)
    if (role[i] != 1) pos[i] = p++;
  IndexSet cols;
  for (std::size_t i : w.image) cols.push_back(pos[i]);
  const FqMatrix minor = mc.select_columns(cols);
  if (n.size() > 20) throw InvalidParam("verify_minor supports at most 20 elements");
  const auto ra = SubsetRanker(n.matrix()).rank_table();
  const auto rb = SubsetRanker(minor).rank_table();
  return ra == rb;
}

}  // namespace fqm
