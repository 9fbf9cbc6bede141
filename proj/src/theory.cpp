#include "fqm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fqm/errors.hpp"

namespace fqm::theory {

namespace mp = boost::multiprecision;

double to_double(const Rational& r) {
  const BigInt num = mp::numerator(r), den = mp::denominator(r);
  if (num == 0) return 0.0;
  // both sides may overflow a double on their own
  const long sn = long(mp::msb(mp::abs(num))), sd = long(mp::msb(den));
  const long shift_n = std::max(0L, sn - 900), shift_d = std::max(0L, sd - 900);
  const double a = (num >> shift_n).convert_to<double>();
  const double b = (den >> shift_d).convert_to<double>();
  return std::ldexp(a / b, int(shift_n - shift_d));
}

double to_double(const BigInt& x) { return x.convert_to<double>(); }

double log_of(const BigInt& x) {
  if (x <= 0) throw InvalidParam("log of a non-positive integer");
  const long b = long(mp::msb(x));
  if (b < 900) return std::log(x.convert_to<double>());
  const long s = b - 900;
  return std::log((x >> s).convert_to<double>()) + double(s) * std::log(2.0);
}

static BigInt ipow(unsigned q, long e) {
  BigInt r = 1;
  for (long i = 0; i < e; ++i) r *= q;
  return r;
}

BigInt gaussian_binomial(unsigned n, unsigned k, unsigned q) {
  if (k > n) return 0;
  BigInt num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= ipow(q, n - i) - 1;
    den *= ipow(q, k - i) - 1;
  }
  return num / den;
}

BigInt projective_size(unsigned n, unsigned q) { return (ipow(q, n) - 1) / (q - 1); }

// log(q^a - 1) for a >= 1
static double log_qpow_minus_one(unsigned q, unsigned a) {
  const double lq = std::log(double(q));
  return a * lq + std::log1p(-std::exp(-double(a) * lq));
}

double log_gaussian_binomial(unsigned n, unsigned k, unsigned q) {
  if (k > n) throw InvalidParam("log_gaussian_binomial: k > n");
  double s = 0;
  for (unsigned i = 0; i < k; ++i) s += log_qpow_minus_one(q, n - i) - log_qpow_minus_one(q, k - i);
  return s;
}

Rational rank_full_prob_exact(unsigned n, unsigned m, unsigned q) {
  if (m > n) return 0;
  Rational p = 1;
  const BigInt qn = ipow(q, n);
  for (unsigned i = 0; i < m; ++i) p *= Rational(qn - ipow(q, i), qn);
  return p;
}

double rank_full_prob(unsigned n, unsigned m, unsigned q) {
  if (m > n) return 0.0;
  double lp = 0;
  for (unsigned i = 0; i < m; ++i) lp += std::log1p(-std::pow(double(q), double(i) - double(n)));
  return std::exp(lp);
}

RankChain::RankChain(unsigned n, unsigned q) : n_(n), q_(q), p_(n + 1, 0.0), dep_(n + 1) {
  if (q < 2) throw InvalidParam("RankChain: q < 2");
  p_[0] = 1.0;
  for (unsigned j = 0; j <= n; ++j) dep_[j] = std::pow(double(q), double(j) - double(n));
}

void RankChain::step() {
  std::vector<double> nxt(n_ + 1, 0.0);
  for (unsigned j = 0; j <= n_; ++j) {
    if (p_[j] == 0.0) continue;
    nxt[j] += p_[j] * dep_[j];
    if (j < n_) nxt[j + 1] += p_[j] * (1.0 - dep_[j]);
  }
  p_.swap(nxt);
  ++m_;
}

std::vector<Rational> rank_pmf_exact(unsigned n, unsigned q, unsigned m) {
  const BigInt qn = ipow(q, n);
  std::vector<Rational> dep(n + 1);
  for (unsigned j = 0; j <= n; ++j) dep[j] = Rational(ipow(q, j), qn);
  std::vector<Rational> p(n + 1, Rational(0));
  p[0] = 1;
  for (unsigned s = 0; s < m; ++s) {
    std::vector<Rational> nxt(n + 1, Rational(0));
    for (unsigned j = 0; j <= std::min(s, n); ++j) {
      if (p[j] == 0) continue;
      nxt[j] += p[j] * dep[j];
      if (j < n) nxt[j + 1] += p[j] * (1 - dep[j]);
    }
    p.swap(nxt);
  }
  p.resize(std::min(n, m) + 1);
  return p;
}

std::vector<Rational> corank_pmf_exact(unsigned n, unsigned q, unsigned m) {
  const auto r = rank_pmf_exact(n, q, m);
  std::vector<Rational> c(m + 1, Rational(0));
  for (unsigned j = 0; j < r.size(); ++j) c[m - j] = r[j];
  return c;
}

std::vector<double> corank_pmf(unsigned n, unsigned q, unsigned m) {
  RankChain ch(n, q);
  for (unsigned s = 0; s < m; ++s) ch.step();
  std::vector<double> c(m + 1, 0.0);
  for (unsigned j = 0; j <= std::min(n, m); ++j) c[m - j] = ch.dist()[j];
  return c;
}

double Pmf::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

double Pmf::mean() const {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * double(offset + long(i));
  return s;
}

Pmf tau_crk_exact_pmf(unsigned n, unsigned q, unsigned c, double tail) {
  if (c < 1) throw InvalidParam("tau_crk_exact_pmf: c < 1");
  std::vector<double> dep(n + 1);
  for (unsigned j = 0; j <= n; ++j) dep[j] = std::pow(double(q), double(j) - double(n));
  // live[j]: mass at rank j with corank still below c
  std::vector<double> live(n + 1, 0.0);
  live[0] = 1.0;
  Pmf out;
  out.offset = c;
  double remaining = 1.0;
  for (unsigned m = 0; remaining >= tail; ++m) {
    std::vector<double> nxt(n + 1, 0.0);
    double hit = 0;
    for (unsigned j = 0; j <= std::min(m, n); ++j) {
      if (live[j] == 0.0) continue;
      const double d = live[j] * dep[j];
      if (m - j + 1 == c) hit += d;
      else nxt[j] += d;
      if (j < n) nxt[j + 1] += live[j] * (1.0 - dep[j]);
    }
    live.swap(nxt);
    if (m + 1 >= c) out.p.push_back(hit);
    remaining -= hit;
    if (m > 100000 + 64 * n) break;
  }
  return out;
}

double q_pochhammer_tail(unsigned q, long from) {
  if (from <= 0) return 0.0;
  double s = 0;
  for (long j = from;; ++j) {
    const double x = std::pow(double(q), -double(j));
    if (x < 1e-16) break;
    s += std::log1p(-x);
  }
  return std::exp(s);
}

double gamma_qc(unsigned q, unsigned c) { return q_pochhammer_tail(q, long(c)); }

std::vector<Rational> alpha_coefficients(unsigned q, unsigned c, long k) {
  if (c < 1) throw InvalidParam("alpha_coefficients: c < 1");
  std::vector<Rational> alpha(c, Rational(0));
  if (k > long(c)) return alpha;
  // coefficients of prod_{j=0}^{c-k-1} (1 - z q^{-j}), kept to degree c-1
  std::vector<Rational> poly{Rational(1)};
  for (long j = 0; j <= long(c) - k - 1; ++j) {
    const Rational t(1, ipow(q, j));
    std::vector<Rational> nxt(std::min<std::size_t>(poly.size() + 1, c), Rational(0));
    for (std::size_t d = 0; d < poly.size(); ++d) {
      if (d < nxt.size()) nxt[d] += poly[d];
      if (d + 1 < nxt.size()) nxt[d + 1] -= poly[d] * t;
    }
    poly.swap(nxt);
  }
  for (unsigned i = 0; i < c; ++i) {
    const unsigned d = c - 1 - i;
    if (d < poly.size()) alpha[i] = poly[d];
  }
  return alpha;
}

std::vector<Rational> alpha_coefficients_signed_sum(unsigned q, unsigned c, long k) {
  if (c < 1) throw InvalidParam("alpha_coefficients_signed_sum: c < 1");
  std::vector<Rational> alpha(c, Rational(0));
  if (k > long(c)) return alpha;
  const long top = long(c) - k - 1;  // j ranges over 0..top
  for (unsigned i = 0; i < c; ++i) {
    const long len = long(c) - 1 - long(i);
    if (len > top + 1) continue;
    Rational sum = 0;
    std::vector<long> js(static_cast<std::size_t>(len));
    std::iota(js.begin(), js.end(), 0L);
    for (;;) {
      long e = 0;
      for (long j : js) e += j;
      sum += Rational(1, ipow(q, e));
      long pos = len - 1;
      while (pos >= 0 && js[std::size_t(pos)] == top - (len - 1 - pos)) --pos;
      if (pos < 0) break;
      ++js[std::size_t(pos)];
      for (long r = pos + 1; r < len; ++r) js[std::size_t(r)] = js[std::size_t(r - 1)] + 1;
    }
    alpha[i] = (len % 2 == 0) ? sum : -sum;
  }
  return alpha;
}

double limit_Cck(unsigned q, unsigned c, long k) {
  if (c < 1) throw InvalidParam("limit_Cck: c < 1");
  if (k > long(c)) return 0.0;
  const auto alpha = alpha_coefficients(q, c, k);
  double s = to_double(alpha[0]);
  double denom = 1.0;
  for (unsigned i = 1; i < c; ++i) {
    denom *= 1.0 - std::pow(double(q), -double(i));
    s += to_double(alpha[i]) / denom;
  }
  const double beta = q_pochhammer_tail(q, long(c) + 1 - k);
  return beta * std::pow(double(q), double(k) - double(c)) * s;
}

}  // namespace fqm::theory
