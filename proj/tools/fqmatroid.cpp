// fqmatroid: predictors, presets, figure tables and self-check oracles.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "fqm/errors.hpp"
#include "fqm/field.hpp"
#include "fqm/montecarlo.hpp"
#include "fqm/selfcheck.hpp"
#include "fqm/theory.hpp"
#include "json.hpp"

namespace th = fqm::theory;
namespace mc = fqm::mc;

namespace {

enum Exit { kOk = 0, kSelfcheckFail = 1, kUsage = 2, kBudget = 3, kIo = 4 };

struct Flags {
  unsigned q = 2;
  long n = -1, k = 0, c = 1, r = 1, m = -1, j = 0, ell = 0, d_size = 0, big_n = 0, big_m = 0;
  double a = 0.5, t = 0.5, y = 1, omega = 3, balls = 0, bins = 1;
  std::uint64_t trials = 0, seed = 0, budget = 0;
  bool seed_given = false;
  std::string what, preset, out, format = "text";
  std::vector<std::string> params;
  int workers = 0;
  bool serial = false, timing = false, corrupt = false;
  double lo = 0.01, hi = 1.0;
  std::size_t points = 100;
};

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fqm::Budget budget_of(const Flags& f) {
  return f.budget ? fqm::Budget::with_cap(f.budget) : fqm::Budget::from_env();
}

long need(long v, const char* name) {
  if (v < 0) throw fqm::ConfigError(std::string("--") + name + " is required");
  return v;
}

// name=value lines (text) or a flat JSON object
void print_values(const std::vector<std::pair<std::string, std::string>>& kv, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : kv) j[k] = v;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& [k, v] : kv) std::cout << k << "=" << v << "\n";
  }
}

void check_order(unsigned q) {
  unsigned p = 0, e = 0;
  if (q > 65536) throw fqm::TooLarge("field order " + std::to_string(q) + " exceeds 2^16");
  if (!fqm::prime_power(q, p, e)) throw fqm::NotPrimePower(std::to_string(q) + " is not a prime power");
}

int cmd_predict(const Flags& f) {
  check_order(f.q);
  std::vector<std::pair<std::string, std::string>> kv;
  const std::string& w = f.what;
  auto put = [&](const std::string& k, double v) { kv.emplace_back(k, g17(v)); };
  if (w == "gbinom") {
    kv.emplace_back("gbinom", th::gaussian_binomial(unsigned(need(f.n, "n")), unsigned(f.k), f.q).str());
  } else if (w == "rankfull") {
    const auto p = th::rank_full_prob_exact(unsigned(need(f.n, "n")), unsigned(need(f.m, "m")), f.q);
    kv.emplace_back("rank_full_prob", p.str());
    put("rank_full_prob_float", th::to_double(p));
  } else if (w == "corank") {
    const auto p = th::corank_pmf(unsigned(need(f.n, "n")), f.q, unsigned(need(f.m, "m")));
    for (std::size_t i = 0; i < p.size(); ++i) put("P(crk=" + std::to_string(i) + ")", p[i]);
  } else if (w == "taupmf") {
    const auto p = th::tau_crk_exact_pmf(unsigned(need(f.n, "n")), f.q, unsigned(f.c));
    for (std::size_t i = 0; i < p.p.size(); ++i)
      if (p.p[i] >= 1e-12) put("P(tau=" + std::to_string(p.offset + long(i)) + ")", p.p[i]);
  } else if (w == "cck") {
    put("C", th::limit_Cck(f.q, unsigned(f.c), f.k));
  } else if (w == "gamma") {
    put("gamma", th::gamma_qc(f.q, unsigned(f.c)));
  } else if (w == "muk") {
    put("mu_k", th::mu_k(unsigned(need(f.m, "m")), unsigned(f.k), f.q, unsigned(need(f.n, "n"))));
  } else if (w == "nokcirc") {
    put("no_kcircuit_prob", th::no_kcircuit_prob_approx(double(need(f.m, "m")), unsigned(f.k), f.q,
                                                        unsigned(need(f.n, "n"))));
  } else if (w == "bofa") {
    put("b", th::b_of_a(f.q, f.a));
  } else if (w == "bprime") {
    put("b_prime", th::b_prime(f.q, f.a));
  } else if (w == "g") {
    put("g", th::g_a(f.q, f.a, f.y));
  } else if (w == "connlimit") {
    put("conn_limit_prob", th::conn_limit_prob(f.q, unsigned(f.k), double(f.c)));
  } else if (w == "koalpha") {
    put("ko_alpha_bound", th::ko_alpha_bound(f.q));
  } else if (w == "kocond") {
    kv.emplace_back("ko_condition", th::ko_condition(f.q, f.t, f.a) ? "true" : "false");
  } else if (w == "koupper") {
    put("ko_upper_alpha", th::ko_upper_alpha(f.q, f.t));
  } else if (w == "lbalpha") {
    put("lb_alpha", th::lb_alpha(f.q, f.t));
  } else if (w == "kob") {
    put("b", th::kelly_oxley_b(f.ell, f.j, need(f.n, "n"), need(f.m, "m"), f.q, f.d_size));
  } else if (w == "firstmoment") {
    const auto r = th::first_moment_sep(f.q, unsigned(f.k), unsigned(need(f.n, "n")), unsigned(need(f.m, "m")));
    put("mu", r.mu());
    put("EX", r.ex());
    put("log_EX", r.log_ex);
  } else if (w == "tauconn") {
    put("tau_conn", th::tau_conn_asymptotic(f.q, unsigned(f.k), unsigned(need(f.n, "n"))));
  } else if (w == "subspacecount") {
    kv.emplace_back("N", th::subspace_count(need(f.n, "n"), f.k, f.j, f.ell, f.q).str());
  } else if (w == "crt") {
    const long n = need(f.n, "n");
    const auto r = th::crt_predictors(f.q, unsigned(f.k), unsigned(n), unsigned(f.m < 0 ? n : f.m));
    put("tau_asym", r.tau_asym);
    put("log_EX", r.log_ex);
    put("mu", r.mu);
    for (const auto& row : r.rows) {
      put("pi_" + std::to_string(row.h), row.pi_h);
      put("log_N_" + std::to_string(row.h), row.log_n_h);
    }
  } else if (w == "ineq") {
    kv.emplace_back("holds", th::check_inequality(f.q, unsigned(f.k)) ? "true" : "false");
  } else if (w == "poisson") {
    const auto b = th::poisson_bounds(f.balls, f.bins);
    put("upper_all_covered", b.all_covered);
    put("upper_missed", b.missed);
  } else if (w == "pgwindow") {
    put("offset", th::pg_tau_window(f.q, unsigned(f.r), f.omega));
  } else if (w == "gbinomcheck") {
    put("relative_error", th::gbinom_asymptotic_check(unsigned(f.big_n), unsigned(f.big_m), unsigned(f.k), f.q));
  } else {
    throw fqm::ConfigError("unknown predictor: " + w);
  }
  print_values(kv, f.format);
  return kOk;
}

mc::ExperimentConfig config_of(const Flags& f, const std::map<std::string, std::string>& echo) {
  mc::ExperimentConfig c;
  c.preset = f.preset;
  c.q = f.q;
  c.n = f.n > 0 ? std::size_t(f.n) : 0;
  c.trials = f.trials;
  c.seed = f.seed;
  c.budget = budget_of(f);
  c.workers = f.workers;
  c.serial = f.serial;
  c.timing = f.timing;
  c.flags = echo;
  for (const auto& p : f.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw fqm::ConfigError("--param expects key=value: " + p);
    try {
      c.params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw fqm::ConfigError("--param value is not a number: " + p);
    }
  }
  return c;
}

void print_checks(const mc::ExperimentResult& r) {
  std::cout << "preset " << r.config.preset << " (q=" << r.config.q << ", n=" << r.config.n
            << ", trials=" << r.config.trials << ", seed=" << r.config.seed << ")\n";
  for (const auto& [k, v] : r.report.predictors) std::cout << "  " << k << " = " << g17(v) << "\n";
  for (const auto& c : r.report.checks) {
    std::cout << "  [" << c.verdict << "] " << c.name << ": empirical " << g17(c.empirical);
    if (c.kind == "range") std::cout << " in [" << c.lo << ", " << c.hi << "]";
    else std::cout << ", predicted " << g17(c.predicted) << ", statistic " << g17(c.statistic)
                   << " (" << c.kind << " " << c.tolerance << ")";
    std::cout << "\n";
  }
  if (r.report.insufficient) std::cout << "  insufficient for tolerance check\n";
}

int cmd_simulate(const Flags& f, const std::map<std::string, std::string>& echo, bool compare_only) {
  const auto res = mc::run_experiment(config_of(f, echo));
  std::cout << "seed=" << res.config.seed << "\n";
  if (compare_only) {
    print_checks(res);
    return kOk;
  }
  const std::string fmt = f.format == "text" ? "json" : f.format;
  const std::string path = f.out.empty() ? res.config.preset + "_seed" + std::to_string(res.config.seed) + "." + fmt : f.out;
  mc::emit(res, fmt, path);
  std::cout << "wrote " << path << "\n";
  return kOk;
}

int cmd_table(const Flags& f, const std::map<std::string, std::string>& echo) {
  check_order(f.q);
  if (f.points == 0) throw fqm::ConfigError("empty grid");
  std::ostringstream o;
  o << "# schema_version=" << mc::kSchemaVersion << "\n# flags:";
  for (const auto& [k, v] : echo) o << " --" << k << " " << v;
  o << "\n";
  auto grid = [&](std::size_t i) {
    return f.points == 1 ? f.lo : f.lo + (f.hi - f.lo) * double(i) / double(f.points - 1);
  };
  if (f.what == "bofa") {
    o << "a,b\n";
    for (std::size_t i = 0; i < f.points; ++i) o << g17(grid(i)) << "," << g17(th::b_of_a(f.q, grid(i))) << "\n";
  } else if (f.what == "bounds") {
    o << "t,lb_alpha,ko_upper_alpha,ko_alpha_bound\n";
    for (std::size_t i = 0; i < f.points; ++i) {
      const double t = grid(i);
      o << g17(t) << "," << g17(th::lb_alpha(f.q, t)) << "," << g17(th::ko_upper_alpha(f.q, t)) << ","
        << g17(th::ko_alpha_bound(f.q)) << "\n";
    }
  } else if (f.what == "cck") {
    o << "k,C\n";
    for (long k = long(f.c) - long(f.points) + 1; k <= long(f.c); ++k)
      o << k << "," << g17(th::limit_Cck(f.q, unsigned(f.c), k)) << "\n";
  } else {
    throw fqm::ConfigError("unknown table: " + f.what);
  }
  if (f.out.empty()) {
    std::cout << o.str();
  } else {
    std::ofstream out(f.out, std::ios::binary);
    if (!out || !(out << o.str())) throw fqm::IoError("cannot write " + f.out);
    std::cout << "wrote " << f.out << "\n";
  }
  return kOk;
}

int cmd_selfcheck(const Flags& f) {
  fqm::SelfCheckOptions o;
  o.corrupt_field = f.corrupt;
  const auto items = fqm::run_selfcheck(o);
  bool ok = true;
  for (const auto& it : items) {
    std::printf("%-42s %s  %7.2fs  %s\n", it.name.c_str(), it.pass ? "PASS" : "FAIL", it.seconds, it.detail.c_str());
    ok = ok && it.pass;
  }
  std::printf("%s\n", ok ? "all suites passed" : "self-check FAILED");
  return ok ? kOk : kSelfcheckFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random matroids over finite fields: predictors, simulation and oracles"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* s) {
    s->add_option("--q", f.q, "field order")->check(CLI::Range(2u, 65536u));
    s->add_option("--n", f.n, "dimension (rows)");
    s->add_option("--budget", f.budget, "enumeration cap (overrides FQMATROID_BUDGET)")->check(CLI::PositiveNumber);
    s->add_option("--format", f.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
    s->add_option("--out", f.out, "output path");
  };

  auto* predict = app.add_subcommand("predict", "evaluate a closed-form predictor");
  common(predict);
  predict->add_option("--what", f.what, "predictor name")->required();
  predict->add_option("--k", f.k);
  predict->add_option("--c", f.c);
  predict->add_option("--r", f.r);
  predict->add_option("--m", f.m);
  predict->add_option("--j", f.j);
  predict->add_option("--ell", f.ell);
  predict->add_option("--dsize", f.d_size);
  predict->add_option("--N", f.big_n);
  predict->add_option("--M", f.big_m);
  predict->add_option("--a", f.a);
  predict->add_option("--t", f.t);
  predict->add_option("--y", f.y);
  predict->add_option("--omega", f.omega);
  predict->add_option("--balls", f.balls);
  predict->add_option("--bins", f.bins);

  auto sim_opts = [&](CLI::App* s) {
    common(s);
    s->add_option("--preset", f.preset, "experiment preset (E1..E11)")->required();
    s->add_option("--trials", f.trials, "trial count")->check(CLI::PositiveNumber);
    s->add_option("--seed", f.seed, "master seed (generated when omitted)");
    s->add_option("--param", f.params, "preset parameter key=value");
    s->add_option("--workers", f.workers, "OpenMP threads (0: default)");
    s->add_flag("--serial", f.serial, "use the serial trial loop");
    s->add_flag("--timing", f.timing, "include wall-clock time in the output");
  };
  auto* simulate = app.add_subcommand("simulate", "run an experiment preset and write its report");
  sim_opts(simulate);
  auto* compare = app.add_subcommand("compare", "run an experiment preset and print the comparison");
  sim_opts(compare);

  auto* table = app.add_subcommand("table", "emit figure data as CSV");
  common(table);
  table->add_option("--what", f.what, "bofa | bounds | cck")->required();
  table->add_option("--c", f.c);
  table->add_option("--lo", f.lo);
  table->add_option("--hi", f.hi);
  table->add_option("--points", f.points, "grid size");

  auto* selfcheck = app.add_subcommand("selfcheck", "run the brute-force oracle suites");
  selfcheck->add_flag("--corrupt-field", f.corrupt, "test hook: corrupt one GF(4) product entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  std::map<std::string, std::string> echo;
  for (auto* sub : app.get_subcommands()) {
    echo["subcommand"] = sub->get_name();
    for (const auto* opt : sub->get_options()) {
      // the output path is not part of the run
      if (opt->count() == 0 || opt->get_name() == "--help" || opt->get_name() == "--out") continue;
      std::string v;
      for (const auto& s : opt->results()) v += (v.empty() ? "" : ",") + s;
      std::string name = opt->get_name();
      while (!name.empty() && name[0] == '-') name.erase(0, 1);
      echo[name] = v.empty() ? "true" : v;
    }
  }
  if ((simulate->parsed() || compare->parsed()) && !simulate->get_option("--seed")->count() &&
      !compare->get_option("--seed")->count()) {
    f.seed = (std::uint64_t(std::random_device{}()) << 32) | std::random_device{}();
  }
  if (simulate->parsed() || compare->parsed()) echo["seed"] = std::to_string(f.seed);

  try {
    if (predict->parsed()) return cmd_predict(f);
    if (simulate->parsed()) return cmd_simulate(f, echo, false);
    if (compare->parsed()) return cmd_simulate(f, echo, true);
    if (table->parsed()) return cmd_table(f, echo);
    if (selfcheck->parsed()) return cmd_selfcheck(f);
  } catch (const fqm::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const fqm::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const fqm::ConsistencyError& e) {
    std::cerr << "consistency check failed: " << e.what() << "\n";
    return kSelfcheckFail;
  } catch (const fqm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
