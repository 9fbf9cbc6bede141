#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

namespace fqm {

/// Non-negative integer or infinity; used for girth and the connectivities.
class ExtInt {
 public:
  constexpr ExtInt() = default;
  constexpr explicit ExtInt(std::int64_t v) : v_(v) {}
  static constexpr ExtInt infinity() { return ExtInt(kInf); }

  constexpr bool is_infinite() const { return v_ == kInf; }
  constexpr bool is_finite() const { return v_ != kInf; }
  constexpr std::int64_t value() const { return v_; }

  constexpr auto operator<=>(const ExtInt&) const = default;
  constexpr bool operator==(const ExtInt&) const = default;

  std::string str() const { return is_infinite() ? "inf" : std::to_string(v_); }

 private:
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  std::int64_t v_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, ExtInt x) { return os << x.str(); }

}  // namespace fqm
