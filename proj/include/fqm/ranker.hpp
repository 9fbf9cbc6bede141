#pragma once

#include <cstdint>
#include <vector>

#include "fqm/matrix.hpp"

namespace fqm {

using Mask = std::uint64_t;

inline Mask mask_of(const IndexSet& s) {
  Mask x = 0;
  for (std::size_t i : s) x |= Mask(1) << i;
  return x;
}
inline IndexSet indices_of(Mask x) {
  IndexSet s;
  for (std::size_t i = 0; x; ++i, x >>= 1)
    if (x & 1) s.push_back(i);
  return s;
}

/// Rank of column subsets given as bit masks (at most 64 columns).
class SubsetRanker {
 public:
  explicit SubsetRanker(const FqMatrix& a);

  std::size_t size() const { return m_; }
  std::size_t rank(Mask s) const;
  /// Rank of every subset, indexed by mask (m <= 26).
  std::vector<std::uint8_t> rank_table() const;

 private:
  FqMatrix a_;
  std::size_t n_, m_;
  bool packed_;
  std::vector<std::uint64_t> bits_;  // packed columns when q = 2 and n <= 64
};

}  // namespace fqm
