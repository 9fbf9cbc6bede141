#include <cmath>
#include <functional>
#include <limits>

#include "fqm/errors.hpp"
#include "fqm/theory.hpp"

namespace fqm::theory {

namespace {

double lbinom(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

// f(lo) and f(hi) of opposite sign
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14) {
  double flo = f(lo);
  for (int it = 0; it < 400 && hi - lo > tol * std::max(1.0, std::fabs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double mu_k(unsigned m, unsigned k, unsigned q, unsigned n) { return std::exp(log_mu_k(m, k, q, n)); }

double log_mu_k(unsigned m, unsigned k, unsigned q, unsigned n) {
  if (k < 1 || k > m) throw InvalidParam("mu_k: need 1 <= k <= m");
  return lbinom(m, k) + k * std::log(double(q - 1)) - n * std::log(double(q));
}

double no_kcircuit_prob_approx(double m, unsigned k, unsigned q, unsigned n) {
  const double le = (k - 1.0) * std::log(q - 1.0) - std::lgamma(k + 1.0) + k * std::log(m) -
                    n * std::log(double(q));
  return std::exp(-std::exp(le));
}

double g_a(unsigned q, double a, double y) {
  // y log y - (y-a) log(y-a), without cancellation at large y
  double head = xlogx(y);
  if (y > a) head = a * std::log(y) - (y - a) * std::log1p(-a / y);
  return head + a * std::log(q - 1.0) - xlogx(a) - std::log(double(q));
}

ThresholdFn::ThresholdFn(unsigned q, double a) : q_(q), a_(a) {
  if (q < 2) throw InvalidParam("ThresholdFn: q < 2");
  if (!(a > 0 && a <= 1)) throw InvalidParam("ThresholdFn: need 0 < a <= 1");
}

double ThresholdFn::root() const {
  if (root_ >= 0) return root_;
  double hi = 2 * a_;
  while ((*this)(hi) <= 0) hi *= 2;
  root_ = bisect([this](double y) { return (*this)(y); }, a_, hi, 1e-15);
  return root_;
}

double b_of_a(unsigned q, double a) { return ThresholdFn(q, a).root(); }

double b_prime(unsigned q, double a) {
  const double b = b_of_a(q, a);
  const double num = std::log(a) - std::log(q - 1.0) - std::log(b - a);
  return num / -std::log1p(-a / b);
}

double conn_limit_prob(unsigned q, unsigned k, double c) {
  if (k < 2) throw InvalidParam("conn_limit_prob: k < 2");
  const double le = (k - 2.0) * std::log(q - 1.0) - c * std::log(double(q)) - std::lgamma(double(k));
  return std::exp(-std::exp(le));
}

double ko_alpha_bound(unsigned q) {
  const double l = std::log(2.0 * q - 1.0);
  return l / (2 * std::log(double(q)) - l);
}

static double ko_gap(unsigned q, double t, double alpha) {
  return t * std::log((1 + t) * alpha / (t * t)) - (alpha - t) * std::log(double(q)) + 2 * t;
}

bool ko_condition(unsigned q, double t, double alpha) { return ko_gap(q, t, alpha) < 0; }

double ko_upper_alpha(unsigned q, double t) {
  if (!(t > 0 && t < 1)) throw InvalidParam("ko_upper_alpha: need 0 < t < 1");
  const double cap = ko_alpha_bound(q);
  // the gap is concave in alpha, peaking at t / ln q
  const double peak = t / std::log(double(q));
  if (ko_gap(q, t, peak) < 0) return 0.0;
  double hi = std::max(2 * peak, 1.0);
  while (ko_gap(q, t, hi) >= 0) hi *= 2;
  const double r = bisect([&](double a) { return ko_gap(q, t, a); }, peak, hi);
  return std::min(r, cap);
}

double lb_lhs(unsigned q, double t, double alpha) {
  const double s = 1 + alpha;
  return t * std::log(s / t) + (s - t) * std::log(s / (s - t)) + t * std::log(q - 1.0) -
         alpha * std::log(double(q));
}

double lb_alpha(unsigned q, double t) {
  if (!(t > 0 && t < 1)) throw InvalidParam("lb_alpha: need 0 < t < 1");
  double hi = 1.0;
  while (lb_lhs(q, t, hi) > 0) hi *= 2;
  return bisect([&](double a) { return lb_lhs(q, t, a); }, 0.0, hi, 1e-15);
}

double kelly_oxley_log_b(long ell, long j, long n, long m, unsigned q, long d_size) {
  const long top = n + ell - 1;
  if (m - d_size < 0 || top - d_size < 0 || top - d_size > m - d_size || j < 0 || j > top ||
      m < top)
    throw InvalidParam("kelly_oxley_b: binomial argument out of range");
  const double lq = std::log(double(q));
  // (q^j + q^{top-j} - q^{ell-1}) / q^n
  const double base = std::exp(double(j - n) * lq) + std::exp(double(top - j - n) * lq) -
                      std::exp(double(ell - 1 - n) * lq);
  return lbinom(double(m - d_size), double(top - d_size)) + lbinom(double(top), double(j)) +
         double(m - top) * std::log(base);
}

double kelly_oxley_b(long ell, long j, long n, long m, unsigned q, long d_size) {
  return std::exp(kelly_oxley_log_b(ell, j, n, m, q, d_size));
}

double FirstMoment::mu() const { return std::exp(log_mu); }
double FirstMoment::ex() const { return std::exp(log_ex); }

FirstMoment first_moment_sep(unsigned q, unsigned k, unsigned n, unsigned m) {
  if (k < 1) throw InvalidParam("first_moment_sep: k < 1");
  FirstMoment r;
  r.log_mu = (k - 1.0) * std::log(q - 1.0) - m * std::log(double(q));
  const double log_pn = n * std::log(double(q)) + std::log1p(-std::pow(double(q), -double(n))) -
                        std::log(q - 1.0);
  r.log_ex = lbinom(m, k - 1.0) + log_pn + r.log_mu;
  return r;
}

double tau_conn_asymptotic(unsigned q, unsigned k, unsigned n) {
  if (k < 1 || k > n) throw InvalidParam("tau_conn_asymptotic: need 1 <= k <= n");
  return n + k * std::log(double(n) / k) / std::log(double(q));
}

BigInt subspace_count(long n, long k, long j, long ell, unsigned q) {
  if (ell < 0 || ell > k || j - ell < 0 || j - ell > n - k || k > n || j > n) return 0;
  BigInt r = 1;
  for (long i = 0; i < (k - ell) * (j - ell); ++i) r *= q;
  return r * gaussian_binomial(unsigned(k), unsigned(ell), q) *
         gaussian_binomial(unsigned(n - k), unsigned(j - ell), q);
}

CrtPredictors crt_predictors(unsigned q, unsigned k, unsigned n, unsigned m) {
  if (k < 1 || k >= n) throw InvalidParam("crt_predictors: need 1 <= k < n");
  CrtPredictors r;
  const double lq = std::log(double(q));
  const double l1 = std::log1p(-std::pow(double(q), -double(k)));
  r.tau_asym = -double(k) * double(n - k) * lq / l1;
  r.mu = std::exp(m * l1);
  const double lg = log_gaussian_binomial(n, k, q);
  r.log_ex = lg + m * l1;
  double mx = -std::numeric_limits<double>::infinity();
  for (long h = std::max(0L, 2L * k - long(n)); h <= long(k) - 1; ++h) {
    CrtRow row;
    row.h = h;
    const BigInt nh = subspace_count(n, n - k, n - k, long(n) - 2 * long(k) + h, q);
    row.log_n_h = log_of(nh);
    const double qk = std::pow(double(q), -double(k));
    row.pi_h = std::pow(1 - 2 * qk + std::pow(double(q), -2.0 * k + h), double(m));
    r.rows.push_back(row);
    if (row.pi_h > 0) mx = std::max(mx, row.log_n_h + std::log(row.pi_h));
  }
  double s = 0;
  for (const auto& row : r.rows)
    if (row.pi_h > 0) s += std::exp(row.log_n_h + std::log(row.pi_h) - mx);
  r.log_second_moment = s > 0 ? lg + mx + std::log(s) : -std::numeric_limits<double>::infinity();
  return r;
}

bool check_inequality(unsigned q, unsigned k) {
  if (q < 2 || k < 1) throw InvalidParam("check_inequality: need q >= 2, k >= 1");
  BigInt qk = 1;
  for (unsigned i = 0; i < k; ++i) qk *= q;
  return (qk - 1) * (qk - 1) > BigInt(k) * qk;
}

PoissonBounds poisson_bounds(double balls, double bins) {
  if (bins < 1 || balls < 0) throw InvalidParam("poisson_bounds: need bins >= 1, balls >= 0");
  const double lambda = balls / bins;
  PoissonBounds b;
  b.all_covered = 2 * std::pow(-std::expm1(-lambda), bins);
  b.missed = 2 * bins * std::exp(-lambda);
  return b;
}

double pg_tau_window(unsigned q, unsigned r, double omega_factor) {
  if (r < 1) throw InvalidParam("pg_tau_window: r < 1");
  const double zeta = to_double(projective_size(r, q));
  return zeta * std::log(zeta) + omega_factor * zeta;
}

double gbinom_asymptotic_check(unsigned N, unsigned M, unsigned k, unsigned q) {
  if (!(N >= M && M >= k)) throw InvalidParam("gbinom_asymptotic_check: need N >= M >= k");
  BigInt scale = 1;
  for (unsigned i = 0; i < (N - M) * k; ++i) scale *= q;
  const Rational ratio(gaussian_binomial(N, k, q), scale * gaussian_binomial(M, k, q));
  return std::fabs(to_double(Rational(ratio - 1)));
}

}  // namespace fqm::theory
