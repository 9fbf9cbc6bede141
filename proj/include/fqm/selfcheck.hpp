#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fqm {

struct SelfCheckItem {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SelfCheckOptions {
  /// Run the field-axiom suite against a field with one wrong product entry.
  bool corrupt_field = false;
  /// Only the exhaustive oracle suites (fields, rank contract, subspace counts).
  bool oracles_only = false;
};

std::vector<SelfCheckItem> run_selfcheck(const SelfCheckOptions& opts = {});

}  // namespace fqm
