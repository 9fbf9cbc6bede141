#pragma once

// Slow reference implementations for the unit tests. Nothing here calls into
// the library; fields are polynomial arithmetic over Z_p, ranks are plain
// elimination on vectors of unsigned, subspaces are closed sets of indices.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace oracle {

using Poly = std::vector<unsigned>;  // constant term first

inline bool is_prime(unsigned p) {
  if (p < 2) return false;
  for (unsigned d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline Poly digits(unsigned x, unsigned p, unsigned len) {
  Poly d(len, 0);
  for (unsigned i = 0; i < len; ++i, x /= p) d[i] = x % p;
  return d;
}

inline unsigned undigits(const Poly& d, unsigned p) {
  unsigned x = 0;
  for (std::size_t i = d.size(); i-- > 0;) x = x * p + d[i];
  return x;
}

// remainder of a modulo the monic polynomial mod, coefficients mod p
inline Poly poly_mod(Poly a, const Poly& mod, unsigned p) {
  const std::size_t e = mod.size() - 1;
  for (std::size_t i = a.size(); i-- > e;) {
    const unsigned c = a[i] % p;
    if (!c) continue;
    for (std::size_t j = 0; j <= e; ++j) a[i - e + j] = (a[i - e + j] + (p - c) * mod[j]) % p;
  }
  a.resize(e, 0);
  return a;
}

inline bool irreducible(const Poly& f, unsigned p) {
  const unsigned e = unsigned(f.size() - 1);
  for (unsigned d = 1; 2 * d <= e; ++d) {
    unsigned count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (unsigned low = 0; low < count; ++low) {
      Poly g = digits(low, p, d);
      g.push_back(1);
      Poly r = poly_mod(f, g, p);
      if (std::all_of(r.begin(), r.end(), [](unsigned c) { return c == 0; })) return false;
    }
  }
  return true;
}

struct Gf {
  unsigned q = 0, p = 0, e = 0;
  Poly mod;  // monic, degree e

  explicit Gf(unsigned order) : q(order) {
    for (unsigned c = 2; c <= q; ++c)
      if (q % c == 0) {
        p = c;
        break;
      }
    unsigned t = q;
    while (t % p == 0) t /= p, ++e;
    if (t != 1 || !is_prime(p)) throw std::invalid_argument("not a prime power");
    // least monic irreducible of degree e under the base-p encoding of its lower coefficients
    unsigned count = q;
    for (unsigned low = 0; low < count; ++low) {
      Poly f = digits(low, p, e);
      f.push_back(1);
      if (e == 1 || irreducible(f, p)) {
        mod = f;
        break;
      }
    }
  }

  unsigned add(unsigned a, unsigned b) const {
    Poly x = digits(a, p, e), y = digits(b, p, e);
    for (unsigned i = 0; i < e; ++i) x[i] = (x[i] + y[i]) % p;
    return undigits(x, p);
  }
  unsigned neg(unsigned a) const {
    Poly x = digits(a, p, e);
    for (auto& c : x) c = (p - c) % p;
    return undigits(x, p);
  }
  unsigned sub(unsigned a, unsigned b) const { return add(a, neg(b)); }
  unsigned mul(unsigned a, unsigned b) const {
    Poly x = digits(a, p, e), y = digits(b, p, e), z(2 * e, 0);
    for (unsigned i = 0; i < e; ++i)
      for (unsigned j = 0; j < e; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p;
    return undigits(poly_mod(z, mod, p), p);
  }
  unsigned inv(unsigned a) const {
    for (unsigned b = 1; b < q; ++b)
      if (mul(a, b) == 1) return b;
    return 0;
  }
};

using Vec = std::vector<unsigned>;
using Mat = std::vector<Vec>;  // list of columns

inline std::size_t rank(const Gf& f, Mat cols) {
  if (cols.empty()) return 0;
  const std::size_t n = cols[0].size();
  std::size_t r = 0;
  for (std::size_t i = 0; i < n && r < cols.size(); ++i) {
    std::size_t piv = r;
    while (piv < cols.size() && cols[piv][i] == 0) ++piv;
    if (piv == cols.size()) continue;
    std::swap(cols[r], cols[piv]);
    const unsigned iv = f.inv(cols[r][i]);
    for (auto& x : cols[r]) x = f.mul(x, iv);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c == r || cols[c][i] == 0) continue;
      const unsigned k = cols[c][i];
      for (std::size_t j = 0; j < n; ++j) cols[c][j] = f.sub(cols[c][j], f.mul(k, cols[r][j]));
    }
    ++r;
  }
  return r;
}

inline Mat subset(const Mat& a, std::uint64_t mask) {
  Mat s;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (mask >> j & 1) s.push_back(a[j]);
  return s;
}

inline std::vector<std::size_t> rank_table(const Gf& f, const Mat& a) {
  std::vector<std::size_t> t(std::size_t(1) << a.size());
  for (std::uint64_t s = 0; s < t.size(); ++s) t[s] = rank(f, subset(a, s));
  return t;
}

inline std::size_t popcount(std::uint64_t x) { return std::size_t(__builtin_popcountll(x)); }

// smallest circuit size, 0 when there is none
inline std::size_t girth(const Gf& f, const Mat& a) {
  const auto t = rank_table(f, a);
  std::size_t best = 0;
  for (std::uint64_t s = 1; s < t.size(); ++s)
    if (t[s] < popcount(s) && (best == 0 || popcount(s) < best)) best = popcount(s);
  return best;
}

inline std::map<std::size_t, std::uint64_t> circuits(const Gf& f, const Mat& a) {
  const auto t = rank_table(f, a);
  std::map<std::size_t, std::uint64_t> out;
  for (std::uint64_t s = 1; s < t.size(); ++s) {
    if (t[s] != popcount(s) - 1) continue;
    bool minimal = true;
    for (std::uint64_t x = s; x && minimal; x &= x - 1) {
      const std::uint64_t sub = s & ~(x & (~x + 1));
      minimal = t[sub] == popcount(sub);
    }
    if (minimal) ++out[popcount(s)];
  }
  return out;
}

// 0 encodes infinity for the connectivities below
enum class Sep { Vertical, Cyclic, Tutte };

inline std::size_t connectivity(const Gf& f, const Mat& a, Sep kind) {
  const auto t = rank_table(f, a);
  const std::size_t m = a.size();
  if (m < 2) return 0;
  const std::uint64_t full = (std::uint64_t(1) << m) - 1;
  const long r = long(t[full]);
  for (long k = 1; k <= long(m); ++k)
    for (std::uint64_t s = 1; s < full; ++s) {
      const std::uint64_t c = full ^ s;
      const long r1 = long(t[s]), r2 = long(t[c]);
      const long lam = r1 + r2 - r;
      if (lam > k - 1) continue;
      bool ok = false;
      switch (kind) {
        case Sep::Vertical: ok = r1 >= k && r2 >= k; break;
        case Sep::Cyclic: ok = r1 < long(popcount(s)) && r2 < long(popcount(c)); break;
        case Sep::Tutte: ok = long(popcount(s)) >= k && long(popcount(c)) >= k; break;
      }
      if (ok) return std::size_t(k);
    }
  return 0;
}

// vectors of F_q^n as base-q indices, entry i of weight q^i
struct Space {
  Gf f;
  std::size_t n;
  std::uint64_t size = 1;

  Space(unsigned q, std::size_t dim) : f(q), n(dim) {
    for (std::size_t i = 0; i < n; ++i) size *= q;
  }
  Vec vec(std::uint64_t x) const {
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i, x /= f.q) v[i] = unsigned(x % f.q);
    return v;
  }
  std::uint64_t idx(const Vec& v) const {
    std::uint64_t x = 0;
    for (std::size_t i = n; i-- > 0;) x = x * f.q + v[i];
    return x;
  }
  std::uint64_t plus(std::uint64_t a, std::uint64_t b) const {
    Vec x = vec(a), y = vec(b);
    for (std::size_t i = 0; i < n; ++i) x[i] = f.add(x[i], y[i]);
    return idx(x);
  }
  std::uint64_t times(unsigned c, std::uint64_t a) const {
    Vec x = vec(a);
    for (auto& e : x) e = f.mul(c, e);
    return idx(x);
  }
  // closure of a set of vectors under addition and scaling
  std::set<std::uint64_t> span(const std::vector<std::uint64_t>& gens) const {
    std::set<std::uint64_t> s{0};
    for (auto g : gens) {
      std::set<std::uint64_t> next;
      for (auto x : s)
        for (unsigned c = 0; c < f.q; ++c) next.insert(plus(x, times(c, g)));
      s = std::move(next);
    }
    return s;
  }
  // every k-dimensional subspace, grown one vector at a time and deduplicated
  std::set<std::set<std::uint64_t>> subspaces(std::size_t k) const {
    std::set<std::set<std::uint64_t>> level{{0}};
    for (std::size_t d = 0; d < k; ++d) {
      std::set<std::set<std::uint64_t>> next;
      for (const auto& s : level)
        for (std::uint64_t v = 1; v < size; ++v)
          if (!s.count(v)) {
            std::vector<std::uint64_t> gens(s.begin(), s.end());
            gens.push_back(v);
            next.insert(span(gens));
          }
      level = std::move(next);
    }
    return level;
  }
};

// least k with an (n-k)-subspace missing every column; columns are nonzero
inline std::size_t critical_number(const Space& sp, const Mat& a) {
  std::vector<std::uint64_t> pts;
  for (const auto& c : a) pts.push_back(sp.idx(c));
  for (std::size_t k = 1; k <= sp.n; ++k)
    for (const auto& w : sp.subspaces(sp.n - k)) {
      bool miss = true;
      for (auto p : pts) miss = miss && !w.count(p);
      if (miss) return k;
    }
  return sp.n + 1;
}

}  // namespace oracle
