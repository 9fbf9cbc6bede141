#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace fqm {

using Elem = std::uint16_t;

/// Arithmetic in F_q, q = p^e <= 2^16.
///
/// Elements are integers in [0, q). For e > 1 an element encodes the
/// polynomial sum c_i x^i with c_i its base-p digits, reduced modulo the
/// least monic irreducible of degree e (polynomials ordered by that same
/// integer encoding).
class Field {
 public:
  unsigned order() const { return q_; }
  unsigned characteristic() const { return p_; }
  unsigned degree() const { return e_; }
  /// Modulus coefficients, constant term first, leading 1 included.
  const std::vector<unsigned>& modulus() const { return modulus_; }

  Elem add(Elem a, Elem b) const {
    if (small_) return add_[idx(a, b)];
    if (p_ == 2) return static_cast<Elem>(a ^ b);
    if (e_ == 1) {
      unsigned s = unsigned(a) + b;
      return static_cast<Elem>(s >= q_ ? s - q_ : s);
    }
    return add_digits(a, b);
  }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }
  Elem mul(Elem a, Elem b) const {
    if (small_) return mul_[idx(a, b)];
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  /// Multiplicative inverse; inv(0) is 0 by convention.
  Elem inv(Elem a) const { return inv_[a]; }
  Elem div(Elem a, Elem b) const { return mul(a, inv_[b]); }

  /// Row of the multiplication table for `a` (only when q <= 256).
  const Elem* mul_row(Elem a) const { return small_ ? &mul_[idx(a, 0)] : nullptr; }
  const Elem* add_row(Elem a) const { return small_ ? &add_[idx(a, 0)] : nullptr; }
  bool has_tables() const { return small_; }

  /// A generator of the multiplicative group.
  Elem primitive() const { return primitive_; }

  /// Testing hook: a copy whose product table has one wrong entry (q <= 256).
  std::shared_ptr<const Field> corrupted_copy(Elem a, Elem b, Elem product) const;

 private:
  friend std::shared_ptr<const Field> make_field(unsigned q);
  static std::shared_ptr<const Field> build(unsigned q);
  Field() = default;

  std::size_t idx(Elem a, Elem b) const { return std::size_t(a) * q_ + b; }
  Elem add_digits(Elem a, Elem b) const;

  unsigned q_ = 0, p_ = 0, e_ = 0;
  bool small_ = false;
  Elem primitive_ = 1;
  std::vector<unsigned> modulus_;
  std::vector<Elem> add_, mul_;  // full tables, q <= 256
  std::vector<Elem> neg_, inv_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> exp_;  // length 2(q-1)
};

using FieldPtr = std::shared_ptr<const Field>;

/// Builds (and caches) the field of order q.
/// Throws NotPrimePower or TooLarge.
FieldPtr make_field(unsigned q);

/// Result of checking the field axioms.
struct AxiomReport {
  bool ok = true;
  std::string failure;
};

/// Exhaustive when q <= exhaustive_limit, otherwise `samples` random triples.
AxiomReport check_field_axioms(const Field& f, unsigned exhaustive_limit = 64,
                               std::uint64_t samples = 200000);

/// Smallest prime factor decomposition q = p^e; returns false when q is not a prime power.
bool prime_power(unsigned q, unsigned& p, unsigned& e);

}  // namespace fqm
