#include "fqm/montecarlo.hpp"

#include <omp.h>

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <exception>
#include <limits>

#include "fqm/errors.hpp"

namespace fqm::mc {

void Histogram::add(std::optional<long> v) {
  if (v) ++counts[*v];
  else ++missing;
}

std::uint64_t Histogram::present() const {
  std::uint64_t s = 0;
  for (const auto& [k, c] : counts) s += c;
  return s;
}

double Histogram::mean() const {
  const auto n = present();
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  long double s = 0;
  for (const auto& [k, c] : counts) s += (long double)k * c;
  return double(s / n);
}

double Histogram::variance() const {
  const auto n = present();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mu = mean();
  long double s = 0;
  for (const auto& [k, c] : counts) s += (long double)(k - mu) * (k - mu) * c;
  return double(s / (n - 1));
}

std::map<long, double> Histogram::pmf() const {
  std::map<long, double> p;
  const double t = double(total());
  if (t == 0) return p;
  for (const auto& [k, c] : counts) p[k] = double(c) / t;
  return p;
}

double Histogram::freq(long v) const {
  const auto it = counts.find(v);
  return (it == counts.end() || total() == 0) ? 0.0 : double(it->second) / double(total());
}

double Histogram::cdf(long v) const {
  if (total() == 0) return 0.0;
  std::uint64_t s = 0;
  for (const auto& [k, c] : counts) {
    if (k > v) break;
    s += c;
  }
  return double(s) / double(total());
}

std::optional<double> Histogram::median() const {
  const std::uint64_t t = total();
  if (t == 0) return std::nullopt;
  // order statistics (t-1)/2 and t/2, missing values last
  auto nth = [&](std::uint64_t i) -> std::optional<long> {
    std::uint64_t s = 0;
    for (const auto& [k, c] : counts) {
      s += c;
      if (i < s) return k;
    }
    return std::nullopt;
  };
  const auto a = nth((t - 1) / 2), b = nth(t / 2);
  if (!a || !b) return std::nullopt;
  return 0.5 * double(*a + *b);
}

void Histogram::merge(const Histogram& o) {
  for (const auto& [k, c] : o.counts) counts[k] += c;
  missing += o.missing;
}

bool ComparisonReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.verdict == "pass"; });
}

namespace {

Aggregate merge_outcomes(const std::vector<std::string>& names,
                         const std::vector<TrialOutcome>& outs) {
  Aggregate agg;
  agg.trials = outs.size();
  for (const auto& nm : names) agg.stats[nm];
  for (const auto& o : outs) {
    if (o.size() != names.size()) throw ConsistencyError("trial outcome has the wrong arity");
    for (std::size_t i = 0; i < names.size(); ++i) agg.stats[names[i]].add(o[i]);
  }
  return agg;
}

[[noreturn]] void rethrow_with_index(std::uint64_t idx, std::exception_ptr e) {
  try {
    std::rethrow_exception(e);
  } catch (const BudgetExceeded& b) {
    throw BudgetExceeded("trial " + std::to_string(idx) + ": " + b.what());
  }
}

}  // namespace

Aggregate run_trials_serial(const std::vector<std::string>& names, std::uint64_t count,
                            const TrialFn& fn) {
  std::vector<TrialOutcome> outs(count);
  for (std::uint64_t t = 0; t < count; ++t) {
    try {
      outs[t] = fn(t);
    } catch (...) {
      rethrow_with_index(t, std::current_exception());
    }
  }
  return merge_outcomes(names, outs);
}

Aggregate run_trials(const std::vector<std::string>& names, std::uint64_t count, const TrialFn& fn,
                     int workers) {
  std::vector<TrialOutcome> outs(count);
  std::uint64_t bad = std::numeric_limits<std::uint64_t>::max();
  std::exception_ptr err;
  const int nt = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt)
  for (std::int64_t t = 0; t < std::int64_t(count); ++t) {
    try {
      outs[std::size_t(t)] = fn(std::uint64_t(t));
    } catch (...) {
#pragma omp critical(fqm_trial_error)
      if (std::uint64_t(t) < bad) {
        bad = std::uint64_t(t);
        err = std::current_exception();
      }
    }
  }
  if (err) rethrow_with_index(bad, err);
  return merge_outcomes(names, outs);
}

PmfVerdict compare_pmf(const std::map<long, double>& empirical,
                       const std::map<long, double>& predicted, double tolerance) {
  PmfVerdict v;
  auto consider = [&](long k) {
    const auto a = empirical.find(k), b = predicted.find(k);
    const double d = std::fabs((a == empirical.end() ? 0.0 : a->second) -
                               (b == predicted.end() ? 0.0 : b->second));
    if (d > v.distance) {
      v.distance = d;
      v.argmax = k;
    }
  };
  for (const auto& [k, p] : empirical) consider(k);
  for (const auto& [k, p] : predicted) consider(k);
  v.pass = v.distance <= tolerance;
  return v;
}

double chi_square_two_sample(const std::vector<std::uint64_t>& a,
                             const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size()) throw InvalidParam("chi_square_two_sample: category mismatch");
  double na = 0, nb = 0;
  for (auto x : a) na += double(x);
  for (auto x : b) nb += double(x);
  if (na == 0 || nb == 0) throw InvalidParam("chi_square_two_sample: empty sample");
  double stat = 0;
  int df = -1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = double(a[i]) + double(b[i]);
    if (col == 0) continue;
    ++df;
    const double ea = col * na / (na + nb), eb = col * nb / (na + nb);
    stat += (double(a[i]) - ea) * (double(a[i]) - ea) / ea + (double(b[i]) - eb) * (double(b[i]) - eb) / eb;
  }
  if (df <= 0) return 1.0;
  return boost::math::gamma_q(df / 2.0, stat / 2.0);
}

}  // namespace fqm::mc
