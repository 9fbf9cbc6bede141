#include "fqm/budget.hpp"

#include <cstdlib>
#include <string>

#include "fqm/errors.hpp"

namespace fqm {

Budget Budget::with_cap(std::uint64_t cap) {
  Budget b;
  b.subspaces = cap;
  b.kernel_sweep = cap;
  b.subsets = cap;
  b.flat_work = cap;
  return b;
}

Budget Budget::from_env() {
  const char* s = std::getenv("FQMATROID_BUDGET");
  if (!s || !*s) return Budget{};
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0' || v == 0) throw ConfigError(std::string("bad FQMATROID_BUDGET value: ") + s);
  return with_cap(v);
}

}  // namespace fqm
