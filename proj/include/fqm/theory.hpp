#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

namespace fqm::theory {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);
double to_double(const BigInt& x);
/// Natural log of a positive big integer.
double log_of(const BigInt& x);

BigInt gaussian_binomial(unsigned n, unsigned k, unsigned q);
/// [n]_q = (q^n - 1)/(q - 1).
BigInt projective_size(unsigned n, unsigned q);
/// log of the Gaussian binomial, without big integers.
double log_gaussian_binomial(unsigned n, unsigned k, unsigned q);

/// P(an n x m uniform matrix has rank m): prod_{i<m} (1 - q^{i-n}).
Rational rank_full_prob_exact(unsigned n, unsigned m, unsigned q);
double rank_full_prob(unsigned n, unsigned m, unsigned q);

/// Distribution of rank(A_m) as a Markov chain: from rank j the next column
/// is dependent with probability q^{j-n}.
class RankChain {
 public:
  RankChain(unsigned n, unsigned q);
  void step();
  unsigned steps() const { return m_; }
  /// P(rank = j), j = 0..n.
  const std::vector<double>& dist() const { return p_; }
  double dependent_prob(unsigned j) const { return dep_[j]; }

 private:
  unsigned n_, q_, m_ = 0;
  std::vector<double> p_, dep_;
};

/// Exact P(rank(A_m) = j), j = 0..min(n, m).
std::vector<Rational> rank_pmf_exact(unsigned n, unsigned q, unsigned m);
/// Exact P(crk(A_m) = c), c = 0..m.
std::vector<Rational> corank_pmf_exact(unsigned n, unsigned q, unsigned m);
std::vector<double> corank_pmf(unsigned n, unsigned q, unsigned m);

/// Distribution on the integers offset, offset+1, ...
struct Pmf {
  long offset = 0;
  std::vector<double> p;
  double at(long k) const {
    return (k < offset || k >= offset + long(p.size())) ? 0.0 : p[std::size_t(k - offset)];
  }
  double total() const;
  double mean() const;
};

/// Exact law of tau_crk=c, truncated once the remaining mass is below `tail`.
Pmf tau_crk_exact_pmf(unsigned n, unsigned q, unsigned c, double tail = 1e-12);

/// prod_{j >= from} (1 - q^{-j}), truncated once a factor is within 1e-16 of 1.
double q_pochhammer_tail(unsigned q, long from);
double gamma_qc(unsigned q, unsigned c);
/// alpha_{c,k,i}, i = 0..c-1, by exact polynomial multiplication.
std::vector<Rational> alpha_coefficients(unsigned q, unsigned c, long k);
/// The same coefficients from the signed elementary-symmetric sum.
std::vector<Rational> alpha_coefficients_signed_sum(unsigned q, unsigned c, long k);
/// Limit of P(tau - n = k) for tau = tau_crk=c; zero for k > c.
double limit_Cck(unsigned q, unsigned c, long k);

/// binom(m,k) (q-1)^k q^{-n}.
double mu_k(unsigned m, unsigned k, unsigned q, unsigned n);
double log_mu_k(unsigned m, unsigned k, unsigned q, unsigned n);
/// exp(-(q-1)^{k-1}/k! * m^k / q^n).
double no_kcircuit_prob_approx(double m, unsigned k, unsigned q, unsigned n);

/// g_a(y) for y >= a with 0 log 0 = 0.
double g_a(unsigned q, double a, double y);
class ThresholdFn {
 public:
  ThresholdFn(unsigned q, double a);
  double operator()(double y) const { return g_a(q_, a_, y); }
  /// Unique root b(a) on (a, inf).
  double root() const;
  double a() const { return a_; }

 private:
  unsigned q_;
  double a_;
  mutable double root_ = -1.0;
};
double b_of_a(unsigned q, double a);
double b_prime(unsigned q, double a);

/// exp(-(q-1)^{k-2} q^{-c} / (k-1)!).
double conn_limit_prob(unsigned q, unsigned k, double c);
double ko_alpha_bound(unsigned q);
/// t log((1+t) alpha / t^2) < (alpha - t) ln q - 2t.
bool ko_condition(unsigned q, double t, double alpha);
/// Smallest alpha above which the linear-k upper bound holds, capped by ko_alpha_bound.
double ko_upper_alpha(unsigned q, double t);
double lb_lhs(unsigned q, double t, double alpha);
/// Root of lb_lhs in alpha.
double lb_alpha(unsigned q, double t);

/// log of binom(m-D, n+l-1-D) binom(n+l-1, j) (base)^{m-(n+l-1)}.
double kelly_oxley_log_b(long ell, long j, long n, long m, unsigned q, long d_size);
double kelly_oxley_b(long ell, long j, long n, long m, unsigned q, long d_size);

struct FirstMoment {
  double log_mu = 0, log_ex = 0;
  double mu() const;
  double ex() const;
};
/// mu = (q-1)^{k-1} q^{-m},  E X = binom(m, k-1) [n]_q mu.
FirstMoment first_moment_sep(unsigned q, unsigned k, unsigned n, unsigned m);
/// n + k log_q(n/k).
double tau_conn_asymptotic(unsigned q, unsigned k, unsigned n);

/// Number of j-subspaces meeting a fixed k-subspace of F_q^n in dimension l.
BigInt subspace_count(long n, long k, long j, long ell, unsigned q);

struct CrtRow {
  long h = 0;
  double log_n_h = 0;  // log N_h
  double pi_h = 0;
};
struct CrtPredictors {
  double tau_asym = 0;
  double log_ex = 0;  // log E X, E X = gbinom(n,k) (1-q^{-k})^m
  double mu = 0;      // (1-q^{-k})^m
  std::vector<CrtRow> rows;
  double log_second_moment = 0;  // log of gbinom(n,k) sum_h N_h pi_h
};
CrtPredictors crt_predictors(unsigned q, unsigned k, unsigned n, unsigned m);
/// (q^k - 1)^2 > k q^k, exactly.
bool check_inequality(unsigned q, unsigned k);

struct PoissonBounds {
  double all_covered = 0;  // 2 (1 - e^{-lambda})^k
  double missed = 0;       // 2 k e^{-lambda}
};
PoissonBounds poisson_bounds(double balls, double bins);
/// zeta log zeta + omega * zeta, zeta = [r]_q.
double pg_tau_window(unsigned q, unsigned r, double omega_factor);
/// |gbinom(N,k) / (q^{(N-M)k} gbinom(M,k)) - 1|.
double gbinom_asymptotic_check(unsigned N, unsigned M, unsigned k, unsigned q);

}  // namespace fqm::theory
