#include <chrono>
#include <cmath>
#include <functional>
#include <set>

#include "fqm/errors.hpp"
#include "fqm/matroid.hpp"
#include "fqm/montecarlo.hpp"
#include "fqm/process.hpp"
#include "fqm/theory.hpp"

namespace fqm::mc {

namespace th = fqm::theory;

namespace {

struct Phase {
  std::string prefix;  // prepended to stat names
  std::vector<std::string> names;
  std::uint64_t count = 0;
  TrialFn fn;
};

struct Plan {
  std::vector<Phase> phases;
  std::function<void(const ExperimentConfig&, const Aggregate&, ComparisonReport&)> compare;
};

struct PresetDef {
  std::string id, description;
  std::size_t n;
  std::uint64_t trials;
  std::map<std::string, double> params;
  std::function<Plan(const ExperimentConfig&)> plan;
};

double P(const ExperimentConfig& c, const std::string& k) {
  const auto it = c.params.find(k);
  if (it == c.params.end()) throw ConfigError("missing preset parameter: " + k);
  return it->second;
}

std::size_t Pu(const ExperimentConfig& c, const std::string& k) {
  const double v = P(c, k);
  if (v < 0 || v != std::floor(v)) throw ConfigError("parameter " + k + " must be a non-negative integer");
  return std::size_t(v);
}

// independent streams per phase
std::uint64_t stream_of(std::size_t phase, std::uint64_t trial) {
  return (std::uint64_t(phase) << 40) | trial;
}

long L(std::size_t v) { return long(v); }

std::size_t ceil_log(std::size_t n, unsigned q) {
  std::size_t e = 0;
  std::uint64_t p = 1;
  while (p < n) {
    p *= q;
    ++e;
  }
  return e;
}

Check make_check(std::string name, std::string kind, double predicted, double empirical,
                 double statistic, double tol, bool pass) {
  Check c;
  c.name = std::move(name);
  c.kind = std::move(kind);
  c.predicted = predicted;
  c.empirical = empirical;
  c.statistic = statistic;
  c.tolerance = tol;
  c.verdict = pass ? "pass" : "fail";
  return c;
}

Check z_check(const std::string& name, double p, std::uint64_t hits, std::uint64_t n, double zmax) {
  const double ph = double(hits) / double(n);
  const double sd = std::sqrt(p * (1 - p) / double(n));
  const double z = sd > 0 ? (ph - p) / sd : (ph == p ? 0.0 : INFINITY);
  return make_check(name, "z", p, ph, z, zmax, std::fabs(z) <= zmax);
}

Check abs_check(const std::string& name, double predicted, double empirical, double tol) {
  const double d = std::fabs(empirical - predicted);
  return make_check(name, "abs", predicted, empirical, d, tol, d <= tol);
}

Check range_check(const std::string& name, double predicted, double empirical, double lo, double hi) {
  Check c = make_check(name, "range", predicted, empirical, empirical, 0, empirical >= lo && empirical <= hi);
  c.lo = lo;
  c.hi = hi;
  return c;
}

Check at_least(const std::string& name, double bound, double empirical) {
  return make_check(name, "at_least", bound, empirical, empirical, bound, empirical >= bound);
}

Check at_most(const std::string& name, double bound, double empirical) {
  return make_check(name, "at_most", bound, empirical, empirical, bound, empirical <= bound);
}

Check exact_check(const std::string& name, double predicted, double empirical, double tol = 0) {
  Check c = abs_check(name, predicted, empirical, tol);
  c.kind = "exact";
  return c;
}

std::uint64_t count_of(const Histogram& h, long v) {
  const auto it = h.counts.find(v);
  return it == h.counts.end() ? 0 : it->second;
}

const Histogram& S(const Aggregate& a, const std::string& k) {
  const auto it = a.stats.find(k);
  if (it == a.stats.end()) throw ConsistencyError("missing statistic " + k);
  return it->second;
}

// ---------------------------------------------------------------- E1

Plan plan_e1(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t n = c.n, m = Pu(c, "m");
  Plan p;
  p.phases.push_back({"", {"rank"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        Rng rng(seed, stream_of(0, t));
                        return {L(rank(random_uniform_matrix(n, m, f, rng)))};
                      }});
  p.compare = [n, m](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& r) {
    const auto& h = S(a, "rank");
    const double pf = th::rank_full_prob(unsigned(n), unsigned(m), c.q);
    r.predictors["rank_full_prob"] = pf;
    r.predictors["rank_full_prob_2_2_2"] = th::to_double(th::rank_full_prob_exact(2, 2, 2));
    if (m <= n) r.checks.push_back(z_check("P(full rank)", pf, count_of(h, L(m)), h.total(), P(c, "zmax")));
    std::map<long, double> pred;
    const auto cp = th::corank_pmf(unsigned(n), c.q, unsigned(m));
    for (std::size_t k = 0; k < cp.size(); ++k)
      if (cp[k] > 0) pred[L(m - k)] = cp[k];
    const auto v = compare_pmf(h.pmf(), pred, P(c, "tol_sup"));
    r.checks.push_back(make_check("rank pmf sup-distance", "sup", 0, v.distance, v.distance,
                                  P(c, "tol_sup"), v.pass));
  };
  return p;
}

// ---------------------------------------------------------------- E2

Plan plan_e2(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t n = c.n, cc = Pu(c, "c");
  Plan p;
  p.phases.push_back({"", {"tau_minus_n"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        ProcessState st(n, f, seed, stream_of(0, t), {false, false});
                        std::size_t tau;
                        if (cc == 1)
                          tau = track_minor(st, catalog_matroid("U12", f), "U12");
                        else
                          tau = run_until_corank(st, cc);
                        return {long(tau) - long(n)};
                      }});
  p.compare = [n, cc](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& r) {
    std::map<long, double> limit;
    for (long k = -60; k <= long(cc); ++k) limit[k] = th::limit_Cck(c.q, unsigned(cc), k);
    for (long k = long(cc); k >= long(cc) - 3; --k)
      r.predictors["C_" + std::to_string(cc) + "," + std::to_string(k)] = limit[k];
    for (unsigned c2 : {1u, 2u}) {
      const auto dp = th::tau_crk_exact_pmf(unsigned(n), c.q, c2);
      std::map<long, double> shifted, lim;
      for (std::size_t i = 0; i < dp.p.size(); ++i) shifted[dp.offset + long(i) - long(n)] = dp.p[i];
      for (long k = -60; k <= long(c2); ++k) lim[k] = th::limit_Cck(c.q, c2, k);
      const auto v = compare_pmf(shifted, lim, P(c, "tol_dp"));
      r.checks.push_back(make_check("exact pmf vs limit, c=" + std::to_string(c2), "sup", 0,
                                    v.distance, v.distance, P(c, "tol_dp"), v.pass));
      const double g = th::gamma_qc(c.q, c2), cck = th::limit_Cck(c.q, c2, long(c2));
      r.checks.push_back(exact_check("C_{c,c} = gamma_{q,c}, c=" + std::to_string(c2), g, cck, 1e-12));
    }
    const auto v = compare_pmf(S(a, "tau_minus_n").pmf(), limit, P(c, "tol_sup"));
    r.checks.push_back(make_check(cc == 1 ? "simulated tau_U12-minor - n vs limit"
                                          : "simulated tau_crk - n vs limit",
                                  "sup", 0, v.distance, v.distance, P(c, "tol_sup"), v.pass));
  };
  return p;
}

// ---------------------------------------------------------------- E3

Plan plan_e3(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t n = c.n;
  Plan p;
  p.phases.push_back({"", {"tau_minor_minus_n", "tau_crk1_minus_n", "same"}, c.trials,
                      [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        ProcessState st(n, f, seed, stream_of(0, t), {false, false});
                        CorankTracker crk(1);
                        MinorTracker mn(catalog_matroid("U23", f), "U23");
                        Tracker* list[] = {&crk, &mn};
                        run_trackers(st, list, 100 * n + 1000);
                        if (!crk.done() || !mn.done()) throw BudgetExceeded("E3: step cap reached");
                        const long a = long(*mn.hit()), b = long(*crk.hit());
                        return {a - long(n), b - long(n), long(a == b)};
                      }});
  p.compare = [](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& r) {
    const auto& tau = S(a, "tau_minor_minus_n");
    const double g = th::gamma_qc(c.q, 1);
    r.predictors["gamma_q1"] = g;
    r.checks.push_back(at_least("P(tau_U23-minor = tau_crk=1)", P(c, "min_same"), S(a, "same").freq(1)));
    r.checks.push_back(at_least("P(tau <= n+1)", P(c, "min_le"), tau.cdf(1)));
    r.checks.push_back(abs_check("P(tau = n+1) vs gamma_{q,1}", g, tau.freq(1), P(c, "tol_gamma")));
  };
  return p;
}

// ---------------------------------------------------------------- E4

// parallel classes of nonzero columns: number of parallel pairs
long parallel_pairs(const FqMatrix& a) {
  std::map<FqVector, long> cls;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    FqVector v(a.column(j).begin(), a.column(j).end());
    bool zero = true;
    for (auto e : v) zero = zero && e == 0;
    if (zero) continue;
    normalize_projective(a.field(), v);
    ++cls[v];
  }
  long s = 0;
  for (const auto& [v, k] : cls) s += k * (k - 1) / 2;
  return s;
}

Plan plan_e4(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t n = c.n, m = Pu(c, "m"), n2 = Pu(c, "n2"), m2 = Pu(c, "m2");
  const Budget b = c.budget;
  Plan p;
  p.phases.push_back({"", {"circuits2"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        Rng rng(seed, stream_of(0, t));
                        const auto spec = circuit_spectrum(RepMatroid(random_uniform_matrix(n, m, f, rng)), b);
                        const auto it = spec.find(2);
                        return {it == spec.end() ? 0L : long(it->second)};
                      }});
  p.phases.push_back({"", {"no_2circuit"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        Rng rng(seed, stream_of(1, t));
                        return {long(parallel_pairs(random_uniform_matrix(n2, m2, f, rng)) == 0)};
                      }});
  p.compare = [=](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& r) {
    const auto& h = S(a, "circuits2");
    const double mu2 = th::mu_k(unsigned(m), 2, c.q, unsigned(n));
    const double qn = std::pow(double(c.q), -double(n));
    const double exact = double(m) * double(m - 1) / 2 * (1 - qn) * (c.q - 1) * qn;
    r.predictors["mu_2"] = mu2;
    r.predictors["exact_mean_2_circuits"] = exact;
    const double se = std::sqrt(h.variance() / double(h.total()));
    const double z = (h.mean() - mu2) / se;
    r.checks.push_back(make_check("mean 2-circuits vs mu_2", "z", mu2, h.mean(), z, P(c, "zmax"),
                                  std::fabs(z) <= P(c, "zmax")));
    const double ze = (h.mean() - exact) / se;
    r.checks.push_back(make_check("mean 2-circuits vs exact expectation", "z", exact, h.mean(), ze,
                                  P(c, "zmax"), std::fabs(ze) <= P(c, "zmax")));
    const double approx = th::no_kcircuit_prob_approx(double(m2), 2, c.q, unsigned(n2));
    r.predictors["no_2circuit_approx"] = approx;
    r.checks.push_back(abs_check("P(no 2-circuit) vs exponential approximation", approx,
                                 S(a, "no_2circuit").freq(1), P(c, "tol_abs")));
  };
  return p;
}

// ---------------------------------------------------------------- E5

Plan plan_e5(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t n = c.n;
  Plan p;
  p.phases.push_back({"", {"first_circuit_length", "first_circuit_step"}, c.trials,
                      [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        ProcessState st(n, f, seed, stream_of(0, t));
                        const auto [step, len] = track_first_circuit(st);
                        return {L(len), L(step)};
                      }});
  p.compare = [n](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& r) {
    const double pred = 1.0 - 1.0 / c.q;
    r.predictors["length_over_n"] = pred;
    const double emp = S(a, "first_circuit_length").mean() / double(n);
    double lo = pred - P(c, "tol_range"), hi = pred + P(c, "tol_range");
    if (c.q == 2) lo = 0.45, hi = 0.55;
    if (c.q == 3) lo = 0.61, hi = 0.72;
    if (P(c, "lo") >= 0) lo = P(c, "lo");
    if (P(c, "hi") >= 0) hi = P(c, "hi");
    r.checks.push_back(range_check("mean first-circuit length / n", pred, emp, lo, hi));
  };
  return p;
}

// ---------------------------------------------------------------- E6

Plan plan_e6(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t n = c.n, cap = std::size_t(P(c, "max_factor") * double(n));
  const Budget b = c.budget;
  Plan p;
  // a trial over the sweep budget or the step cap is censored (missing)
  p.phases.push_back({"", {"tau_hamilton"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        ProcessState st(n, f, seed, stream_of(0, t));
                        KCircuitTracker tr(n, b);
                        Tracker* list[] = {&tr};
                        try {
                          run_trackers(st, list, cap);
                        } catch (const BudgetExceeded&) {
                          return {std::nullopt};
                        }
                        if (!tr.hit()) return {std::nullopt};
                        return {L(*tr.hit())};
                      }});
  p.compare = [n](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& r) {
    const auto& h = S(a, "tau_hamilton");
    const double b1 = th::b_of_a(c.q, 1.0);
    r.predictors["b(1)"] = b1;
    r.predictors["censored_fraction"] = double(h.missing) / double(h.total());
    const auto med = h.median();
    r.checks.push_back(range_check("median tau_ham / n", b1, med ? *med / double(n) : INFINITY,
                                   P(c, "median_lo"), P(c, "median_hi")));
    r.checks.push_back(at_least("P(tau_ham < 2n)", P(c, "min_below_2n"), h.cdf(long(2 * n) - 1)));
  };
  return p;
}

// ---------------------------------------------------------------- E7

Plan plan_e7(const ExperimentConfig&) {
  Plan p;
  p.compare = [](const ExperimentConfig& c, const Aggregate&, ComparisonReport& r) {
    const unsigned q = c.q;
    const double astar = (q - 1.0) / q;
    r.predictors["a*"] = astar;
    r.predictors["b(a*)"] = th::b_of_a(q, astar);
    r.predictors["b(1)"] = th::b_of_a(q, 1.0);
    r.checks.push_back(exact_check("b(a*) = 1", 1.0, th::b_of_a(q, astar), P(c, "tol_b")));
    const double b1 = th::b_of_a(q, 1.0);
    r.checks.push_back(range_check("b(1) in (1, 2)", b1, b1, std::nextafter(1.0, 2.0), std::nextafter(2.0, 1.0)));
    const std::size_t grid = Pu(c, "grid");
    const double lo = 0.01, hi = 1.0, h = (hi - lo) / double(grid - 1);
    double worst = INFINITY;
    for (std::size_t i = 1; i + 1 < grid; ++i) {
      const double a = lo + h * double(i);
      worst = std::min(worst, th::b_of_a(q, a - h) - 2 * th::b_of_a(q, a) + th::b_of_a(q, a + h));
    }
    r.checks.push_back(at_least("min second difference of b", -P(c, "tol_convex"), worst));
    double rel = 0;
    for (double a : {0.3, 0.7}) {
      const double d = 1e-5;
      const double fd = (th::b_of_a(q, a + d) - th::b_of_a(q, a - d)) / (2 * d);
      rel = std::max(rel, std::fabs(fd - th::b_prime(q, a)) / std::fabs(fd));
    }
    r.checks.push_back(at_most("b' vs finite differences (relative)", P(c, "tol_fd"), rel));
    r.checks.push_back(exact_check("b'(a*) = 0", 0.0, th::b_prime(q, astar), P(c, "tol_bprime")));
  };
  return p;
}

// ---------------------------------------------------------------- E8

Plan plan_e8(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t n = c.n, k = Pu(c, "k");
  const std::size_t m = n + ceil_log(n, c.q);
  const std::size_t mon_n = Pu(c, "mon_n"), mon_steps = Pu(c, "mon_factor") * mon_n;
  const Budget b = c.budget;
  Plan p;
  p.phases.push_back({"identity_", {"mismatch"}, Pu(c, "identity_trials"),
                      [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        Rng rng(seed, stream_of(0, t));
                        const unsigned q = rng.below(2) ? 3 : 2;
                        const std::size_t nn = 1 + rng.below(5), mm = 3 + rng.below(6);
                        const RepMatroid mt(random_uniform_matrix(nn, mm, make_field(q), rng));
                        const ExtInt tt = tutte_connectivity(mt, b).value;
                        const auto u = is_uniform(mt);
                        if (u && u->second >= 2 * u->first - 1) return {0L};
                        const ExtInt kap = vertical_connectivity(mt, b).value;
                        const ExtInt gir = girth(mt, b);
                        return {long(tt != std::min(kap, gir))};
                      }});
  p.phases.push_back({"", {"kappa_at_least_k"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        Rng rng(seed, stream_of(1, t));
                        const RepMatroid mt(random_uniform_matrix(n, m, f, rng));
                        const ExtInt kap = vertical_connectivity(mt, b).value;
                        return {long(kap >= ExtInt(std::int64_t(k)))};
                      }});
  p.phases.push_back({"monitor_", {"drops", "final_kappa"}, Pu(c, "mon_trials"),
                      [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        ProcessState st(mon_n, f, seed, stream_of(2, t), {false, false});
                        KappaMonitor mon(mon_steps, b);
                        Tracker* list[] = {&mon};
                        run_trackers(st, list, mon_steps);
                        std::optional<long> fin;
                        if (!mon.trajectory().empty() && mon.trajectory().back().second.is_finite())
                          fin = long(mon.trajectory().back().second.value());
                        return {L(mon.decreases().size()), fin};
                      }});
  p.compare = [=](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& r) {
    const RepMatroid pg(projective_geometry(make_field(2), 2));
    r.checks.push_back(exact_check("kappa(PG(1,2)) is infinite", 1.0,
                                   double(vertical_connectivity(pg).value.is_infinite())));
    const auto& mis = S(a, "identity_mismatch");
    r.checks.push_back(exact_check("t = min(kappa, girth) mismatches", 0.0,
                                   double(mis.total() - count_of(mis, 0))));
    const double lim = th::conn_limit_prob(c.q, unsigned(k), 0.0);
    const double cshift = double(m) - double(n) - std::log(double(n)) / std::log(double(c.q));
    r.predictors["m"] = double(m);
    r.predictors["limit_c0"] = lim;
    r.predictors["limit_at_m"] = th::conn_limit_prob(c.q, unsigned(k), cshift);
    r.predictors["tau_conn_asymptotic"] = th::tau_conn_asymptotic(c.q, unsigned(k), unsigned(n));
    r.checks.push_back(abs_check("P(kappa >= k) at m vs exp(-(q-1)^(k-2)/(k-1)!)", lim,
                                 S(a, "kappa_at_least_k").freq(1), P(c, "tol_abs")));
    const auto& d = S(a, "monitor_drops");
    r.checks.push_back(at_most("fraction of trials with a kappa decrease after full rank",
                               P(c, "max_drop_fraction"), 1.0 - d.freq(0)));
  };
  return p;
}

// ---------------------------------------------------------------- E9

Plan plan_e9(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t r = c.n;
  const double zeta = th::to_double(th::projective_size(unsigned(r), c.q));
  const std::size_t b = std::size_t(std::ceil(zeta * std::log(zeta)) + P(c, "omega") * zeta);
  Plan p;
  p.phases.push_back({"", {"covered", "nonzero"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        Rng rng(seed, stream_of(0, t));
                        const FqMatrix a = random_uniform_matrix(r, b, f, rng);
                        long nz = 0;
                        for (std::size_t j = 0; j < a.cols(); ++j) {
                          bool z = true;
                          for (auto e : a.column(j)) z = z && e == 0;
                          nz += !z;
                        }
                        return {long(contains_pg(a, r)), nz};
                      }});
  p.compare = [=](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& rep) {
    rep.predictors["zeta"] = zeta;
    rep.predictors["columns"] = double(b);
    rep.predictors["window_offset"] = th::pg_tau_window(c.q, unsigned(r), P(c, "omega"));
    // P(miss | B nonzero columns) <= 2 zeta e^{-B/zeta}; averaged over B ~ Bin(b, 1 - q^-r)
    const double pnz = 1 - std::pow(double(c.q), -double(r));
    double bound = 0;
    for (std::size_t B = 0; B <= b; ++B) {
      const double lp = std::lgamma(b + 1.0) - std::lgamma(B + 1.0) - std::lgamma(b - B + 1.0) +
                        B * std::log(pnz) + (b - B) * std::log1p(-pnz);
      bound += std::exp(lp) * th::poisson_bounds(double(B), zeta).missed;
    }
    rep.predictors["miss_bound"] = bound;
    rep.predictors["miss_bound_at_mean"] = th::poisson_bounds(pnz * double(b), zeta).missed;
    const double covered = S(a, "covered").freq(1);
    rep.checks.push_back(at_least("P(all points covered)", P(c, "min_cover"), covered));
    rep.checks.push_back(at_most("miss rate vs 2k e^{-lambda}", bound, 1 - covered));
  };
  return p;
}

// ---------------------------------------------------------------- E10

Plan plan_e10(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t n = c.n, cn = Pu(c, "crt_n"), k = Pu(c, "k");
  const Budget b = c.budget;
  Plan p;
  p.phases.push_back({"", {"skips", "final_chi", "steps"}, c.trials,
                      [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        ProcessState st(n, f, seed, stream_of(0, t), {false, false});
                        CriticalTracker tr(n, b);
                        Tracker* list[] = {&tr};
                        run_trackers(st, list, 1'000'000);
                        return {L(tr.skips().size()), L(tr.chi()), L(st.steps())};
                      }});
  p.phases.push_back({"crt_", {"tau"}, Pu(c, "crt_trials"), [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        ProcessState st(cn, f, seed, stream_of(1, t), {false, false});
                        return {L(track_critical(st, k, b))};
                      }});
  p.compare = [=](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& r) {
    for (unsigned q : {2u, 3u})
      for (std::size_t nn = 1; nn <= 4; ++nn) {
        const RepMatroid pg(projective_geometry(make_field(q), nn));
        r.checks.push_back(exact_check("chi(PG(" + std::to_string(nn - 1) + "," + std::to_string(q) + "))",
                                       double(nn), double(critical_number(pg, b))));
      }
    const auto& sk = S(a, "skips");
    r.checks.push_back(exact_check("trials where chi skipped a value", 0.0, double(sk.total() - count_of(sk, 0))));
    const auto& fc = S(a, "final_chi");
    r.checks.push_back(exact_check("trials reaching chi = n", double(fc.total()), double(count_of(fc, L(n)))));
    const auto pr = th::crt_predictors(c.q, unsigned(k), unsigned(cn), unsigned(cn));
    r.predictors["tau_asym"] = pr.tau_asym;
    r.checks.push_back(range_check("mean tau_k-crt / n", pr.tau_asym / double(cn),
                                   S(a, "crt_tau").mean() / double(cn), P(c, "crt_lo"), P(c, "crt_hi")));
    long bad = 0;
    for (unsigned q = 2; q <= 5; ++q)
      for (unsigned kk = 1; kk <= 10; ++kk) bad += th::check_inequality(q, kk) != !(q == 2 && kk == 1);
    r.checks.push_back(exact_check("check_inequality truth table mismatches", 0.0, double(bad)));
  };
  return p;
}

// ---------------------------------------------------------------- E11

Plan plan_e11(const ExperimentConfig& c) {
  const auto f = make_field(c.q);
  const std::size_t n = c.n, m = Pu(c, "m");
  const double pts = th::to_double(th::projective_size(unsigned(n), c.q));
  if (double(m) > pts) throw ConfigError("E11: m exceeds the number of projective points");
  Plan p;
  p.phases.push_back({"m1_", {"rank"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        Rng rng(seed, stream_of(0, t));
                        for (;;) {
                          RepMatroid mt(random_uniform_matrix(n, m, f, rng));
                          if (is_simple(mt)) return {L(mt.rank())};
                        }
                      }});
  p.phases.push_back({"m2_", {"rank"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        Rng rng(seed, stream_of(1, t));
                        return {L(rank(sample_m2(n, f, m, rng).matrix))};
                      }});
  p.phases.push_back({"m3_", {"rank"}, c.trials, [=, seed = c.seed](std::uint64_t t) -> TrialOutcome {
                        Rng rng(seed, stream_of(2, t));
                        for (;;) {
                          auto s = sample_m3(n, f, double(m) / pts, rng);
                          if (s.points.size() == m) return {L(rank(s.matrix))};
                        }
                      }});
  p.compare = [n, m](const ExperimentConfig& c, const Aggregate& a, ComparisonReport& r) {
    auto vec = [&](const Histogram& h) {
      std::vector<std::uint64_t> v(std::min(n, m) + 1, 0);
      for (const auto& [k, cnt] : h.counts) v.at(std::size_t(k)) = cnt;
      return v;
    };
    const auto v1 = vec(S(a, "m1_rank")), v2 = vec(S(a, "m2_rank")), v3 = vec(S(a, "m3_rank"));
    const double p12 = chi_square_two_sample(v1, v2), p32 = chi_square_two_sample(v3, v2);
    r.checks.push_back(at_least("chi-square p: M1 | simple vs M2", P(c, "min_p"), p12));
    r.checks.push_back(at_least("chi-square p: M3 | size m vs M2", P(c, "min_p"), p32));
  };
  return p;
}

const std::vector<PresetDef>& presets() {
  static const std::vector<PresetDef> list = {
      {"E1", "rank law of a uniform n x m matrix", 16, 100000, {{"m", 16}, {"zmax", 3}, {"tol_sup", 0.01}}, plan_e1},
      {"E2", "tau_U12-minor - n against the limiting pmf C_{c,k}", 60, 100000,
       {{"c", 1}, {"tol_sup", 0.02}, {"tol_dp", 0.01}}, plan_e2},
      {"E3", "tau_U23-minor against tau_crk=1", 200, 10000,
       {{"min_same", 0.95}, {"min_le", 0.99}, {"tol_gamma", 0.03}}, plan_e3},
      {"E4", "2-circuit counts and the no-2-circuit probability", 3, 100000,
       {{"m", 4}, {"n2", 10}, {"m2", 40}, {"zmax", 3}, {"tol_abs", 0.05}}, plan_e4},
      {"E5", "length of the first circuit", 100, 10000,
       {{"tol_range", 0.05}, {"lo", -1}, {"hi", -1}}, plan_e5},
      {"E6", "Hamilton circuit hitting time", 16, 1000,
       {{"max_factor", 4}, {"median_lo", 1.1}, {"median_hi", 1.7}, {"min_below_2n", 0.85}}, plan_e6},
      {"E7", "properties of the threshold root b(a)", 1, 1,
       {{"grid", 100}, {"tol_b", 1e-9}, {"tol_convex", 1e-6}, {"tol_fd", 1e-4}, {"tol_bprime", 1e-6}},
       plan_e7},
      {"E8", "vertical connectivity: identities, limit law, monotonicity", 10, 10000,
       {{"k", 2}, {"tol_abs", 0.1}, {"identity_trials", 1000}, {"mon_n", 12}, {"mon_factor", 3},
        {"mon_trials", 300}, {"max_drop_fraction", 0.05}}, plan_e8},
      {"E9", "coverage of PG(r-1,q) by uniform columns", 3, 10000, {{"omega", 3}, {"min_cover", 0.9}}, plan_e9},
      {"E10", "critical number along the process", 8, 1000,
       {{"crt_n", 10}, {"crt_trials", 1000}, {"k", 1}, {"crt_lo", 0.8}, {"crt_hi", 1.3}}, plan_e10},
      {"E11", "equivalence of the three models", 4, 100000, {{"m", 3}, {"min_p", 0.01}}, plan_e11},
  };
  return list;
}

const PresetDef& find_preset(const std::string& id) {
  for (const auto& p : presets())
    if (p.id == id) return p;
  throw ConfigError("unknown preset: " + id);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> preset_list() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : presets()) out.emplace_back(p.id, p.description);
  return out;
}

ExperimentConfig resolve(ExperimentConfig cfg) {
  const auto& d = find_preset(cfg.preset);
  if (cfg.n == 0) cfg.n = d.n;
  if (cfg.trials == 0) cfg.trials = d.trials;
  for (const auto& [k, v] : d.params) cfg.params.emplace(k, v);
  for (const auto& [k, v] : cfg.params)
    if (!d.params.count(k)) throw ConfigError("preset " + cfg.preset + " has no parameter " + k);
  return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& in) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult res;
  res.config = resolve(in);
  const auto& cfg = res.config;
  make_field(cfg.q);  // NotPrimePower / TooLarge early
  const Plan plan = find_preset(cfg.preset).plan(cfg);
  res.aggregate.trials = cfg.trials;
  std::uint64_t smallest = cfg.trials;
  for (const auto& ph : plan.phases) {
    const Aggregate a = cfg.serial ? run_trials_serial(ph.names, ph.count, ph.fn)
                                   : run_trials(ph.names, ph.count, ph.fn, cfg.workers);
    for (const auto& [k, h] : a.stats) res.aggregate.stats[ph.prefix + k].merge(h);
    smallest = std::min(smallest, ph.count);
  }
  plan.compare(cfg, res.aggregate, res.report);
  if (!plan.phases.empty() && smallest < kMinTrials) {
    res.report.insufficient = true;
    for (auto& c : res.report.checks)
      if (c.kind != "exact") c.verdict = "insufficient";
  }
  res.report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace fqm::mc
