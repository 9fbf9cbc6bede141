#include "fqm/field.hpp"

#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "fqm/errors.hpp"

namespace fqm {

namespace {

using Poly = std::vector<unsigned>;  // over F_p, constant term first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

unsigned inv_mod(unsigned a, unsigned p) {
  unsigned r = 1, b = a % p, k = p - 2;
  while (k) {
    if (k & 1) r = unsigned(std::uint64_t(r) * b % p);
    b = unsigned(std::uint64_t(b) * b % p);
    k >>= 1;
  }
  return r;
}

// Remainder of a modulo a monic-or-not nonzero b.
Poly poly_mod(Poly a, const Poly& b, unsigned p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const unsigned lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const unsigned c = unsigned(std::uint64_t(a.back()) * lead_inv % p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      const unsigned t = unsigned(std::uint64_t(c) * b[i] % p);
      a[shift + i] = (a[shift + i] + p - t) % p;
    }
    trim(a);
  }
  return a;
}

Poly decode(unsigned v, unsigned p, unsigned len) {
  Poly d(len, 0);
  for (unsigned i = 0; i < len; ++i) {
    d[i] = v % p;
    v /= p;
  }
  return d;
}

unsigned encode(const Poly& d, unsigned p) {
  unsigned v = 0;
  for (std::size_t i = d.size(); i-- > 0;) v = v * p + d[i];
  return v;
}

bool irreducible(const Poly& f, unsigned p) {
  const unsigned deg = unsigned(f.size() - 1);
  // trial division by every monic polynomial of degree 1..deg/2
  for (unsigned d = 1; d <= deg / 2; ++d) {
    unsigned count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (unsigned low = 0; low < count; ++low) {
      Poly g = decode(low, p, d);
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

Poly least_irreducible(unsigned p, unsigned e) {
  unsigned count = 1;
  for (unsigned i = 0; i < e; ++i) count *= p;
  for (unsigned low = 0; low < count; ++low) {
    Poly f = decode(low, p, e);
    f.push_back(1);
    if (irreducible(f, p)) return f;
  }
  throw ConsistencyError("no irreducible polynomial found");
}

unsigned slow_mul(unsigned a, unsigned b, unsigned p, unsigned e, const Poly& mod) {
  if (e == 1) return unsigned(std::uint64_t(a) * b % p);
  Poly x = decode(a, p, e), y = decode(b, p, e);
  Poly prod(2 * e - 1, 0);
  for (unsigned i = 0; i < e; ++i)
    for (unsigned j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
  Poly r = poly_mod(prod, mod, p);
  r.resize(e, 0);
  return encode(r, p);
}

unsigned slow_add(unsigned a, unsigned b, unsigned p, unsigned e) {
  if (e == 1) return (a + b) % p;
  unsigned v = 0, scale = 1;
  for (unsigned i = 0; i < e; ++i) {
    v += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return v;
}

}  // namespace

bool prime_power(unsigned q, unsigned& p, unsigned& e) {
  if (q < 2) return false;
  unsigned f = 2;
  while (f * f <= q && q % f) ++f;
  if (q % f) f = q;
  p = f;
  e = 0;
  while (q % f == 0) {
    q /= f;
    ++e;
  }
  return q == 1;
}

Elem Field::add_digits(Elem a, Elem b) const {
  return static_cast<Elem>(slow_add(a, b, p_, e_));
}

FieldPtr Field::corrupted_copy(Elem a, Elem b, Elem product) const {
  if (!small_) throw InvalidParam("corrupted_copy needs a table-driven field");
  auto f = std::shared_ptr<Field>(new Field(*this));
  f->mul_[idx(a, b)] = product;
  return f;
}

FieldPtr Field::build(unsigned q) {
  unsigned p = 0, e = 0;
  if (q > 65536) throw TooLarge("field order " + std::to_string(q) + " exceeds 2^16");
  if (!prime_power(q, p, e)) throw NotPrimePower(std::to_string(q) + " is not a prime power");

  auto f = std::shared_ptr<Field>(new Field());
  f->q_ = q;
  f->p_ = p;
  f->e_ = e;
  f->modulus_ = e == 1 ? Poly{0, 1} : least_irreducible(p, e);
  f->small_ = q <= 256;

  f->neg_.resize(q);
  for (unsigned a = 0; a < q; ++a) {
    unsigned v = 0, scale = 1, t = a;
    for (unsigned i = 0; i < e; ++i) {
      v += ((p - t % p) % p) * scale;
      t /= p;
      scale *= p;
    }
    f->neg_[a] = static_cast<Elem>(v);
  }

  // Primitive element: smallest g whose powers reach all q-1 nonzero elements.
  f->log_.assign(q, 0);
  f->exp_.assign(2 * (q - 1), 0);
  bool found = false;
  for (unsigned g = (q == 2 ? 1 : 2); g < q && !found; ++g) {
    unsigned x = 1, period = 0;
    do {
      f->exp_[period] = static_cast<Elem>(x);
      x = slow_mul(x, g, p, e, f->modulus_);
      ++period;
    } while (x != 1 && period < q);
    if (period == q - 1) {
      found = true;
      f->primitive_ = static_cast<Elem>(g);
    }
  }
  if (!found) throw ConsistencyError("no primitive element for q=" + std::to_string(q));
  for (unsigned i = 0; i < q - 1; ++i) {
    f->exp_[i + q - 1] = f->exp_[i];
    f->log_[f->exp_[i]] = i;
  }
  f->inv_.assign(q, 0);
  for (unsigned a = 1; a < q; ++a) f->inv_[a] = f->exp_[(q - 1 - f->log_[a]) % (q - 1)];

  if (f->small_) {
    f->add_.resize(std::size_t(q) * q);
    f->mul_.resize(std::size_t(q) * q);
    for (unsigned a = 0; a < q; ++a)
      for (unsigned b = 0; b < q; ++b) {
        f->add_[f->idx(a, b)] = static_cast<Elem>(slow_add(a, b, p, e));
        f->mul_[f->idx(a, b)] =
            (a == 0 || b == 0) ? 0 : f->exp_[f->log_[a] + f->log_[b]];
      }
  }
  return f;
}

FieldPtr make_field(unsigned q) {
  static std::mutex mu;
  static std::map<unsigned, FieldPtr> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
  }
  FieldPtr f = Field::build(q);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(q, f).first->second;
}

AxiomReport check_field_axioms(const Field& f, unsigned exhaustive_limit, std::uint64_t samples) {
  const unsigned q = f.order();
  AxiomReport rep;
  auto fail = [&](const char* what, unsigned a, unsigned b, unsigned c) {
    std::ostringstream os;
    os << what << " fails at (" << a << "," << b << "," << c << ") in GF(" << q << ")";
    rep.ok = false;
    rep.failure = os.str();
  };
  auto check = [&](Elem a, Elem b, Elem c) {
    if (f.add(a, b) != f.add(b, a)) return fail("additive commutativity", a, b, c), false;
    if (f.mul(a, b) != f.mul(b, a)) return fail("multiplicative commutativity", a, b, c), false;
    if (f.add(f.add(a, b), c) != f.add(a, f.add(b, c)))
      return fail("additive associativity", a, b, c), false;
    if (f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)))
      return fail("multiplicative associativity", a, b, c), false;
    if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)))
      return fail("distributivity", a, b, c), false;
    return true;
  };
  for (unsigned a = 0; a < q; ++a) {
    const Elem x = static_cast<Elem>(a);
    if (f.add(x, 0) != x || f.mul(x, 1) != x) return fail("identity", a, 0, 1), rep;
    if (f.add(x, f.neg(x)) != 0) return fail("additive inverse", a, 0, 0), rep;
    if (a != 0 && f.mul(x, f.inv(x)) != 1) return fail("multiplicative inverse", a, 0, 0), rep;
  }
  if (q <= exhaustive_limit) {
    for (unsigned a = 0; a < q; ++a)
      for (unsigned b = 0; b < q; ++b)
        for (unsigned c = 0; c < q; ++c)
          if (!check(Elem(a), Elem(b), Elem(c))) return rep;
  } else {
    std::mt19937_64 gen(q);
    std::uniform_int_distribution<unsigned> d(0, q - 1);
    for (std::uint64_t s = 0; s < samples; ++s)
      if (!check(Elem(d(gen)), Elem(d(gen)), Elem(d(gen)))) return rep;
  }
  return rep;
}

}  // namespace fqm
