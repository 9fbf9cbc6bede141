#pragma once

#include <cstddef>
#include <cstdint>

namespace fqm {

/// Enumeration caps shared by the combinatorial searches.
struct Budget {
  std::uint64_t subspaces = 10'000'000;
  std::uint64_t kernel_sweep = std::uint64_t{1} << 24;
  std::uint64_t subsets = std::uint64_t{1} << 24;
  std::size_t partition_max_m = 22;
  std::size_t minor_max_m = 12;
  /// Node cap for the vertical search over dual subspaces and closed sides.
  std::uint64_t flat_work = std::uint64_t{1} << 26;

  /// Defaults, with every enumeration cap replaced by FQMATROID_BUDGET when set.
  static Budget from_env();
  /// Same caps as the defaults but with the enumeration limits set to `cap`.
  static Budget with_cap(std::uint64_t cap);
};

}  // namespace fqm
