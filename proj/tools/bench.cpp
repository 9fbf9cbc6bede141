// Serial reference vs OpenMP kernels: bipartition scan and the trial loop.
#include <omp.h>

#include <chrono>
#include <cstdio>

#include "fqm/matroid.hpp"
#include "fqm/montecarlo.hpp"
#include "fqm/process.hpp"

using clk = std::chrono::steady_clock;

static double since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

int main(int argc, char** argv) {
  const std::size_t m = argc > 1 ? std::size_t(std::atoi(argv[1])) : 20;
  const std::uint64_t trials = argc > 2 ? std::uint64_t(std::atoll(argv[2])) : 20000;
  std::printf("threads available: %d\n", omp_get_max_threads());

  const auto f = fqm::make_field(2);
  fqm::Rng rng(5, 0);
  const fqm::FqMatrix a = fqm::random_uniform_matrix(m / 2, m, f, rng);
  auto t0 = clk::now();
  const auto table = fqm::SubsetRanker(a).rank_table();
  std::printf("rank table, m=%zu: %.3fs\n", m, since(t0));
  for (auto kind : {fqm::SeparationKind::Vertical, fqm::SeparationKind::Cyclic}) {
    t0 = clk::now();
    const auto s = fqm::scan_bipartitions(table, m, kind);
    const double ts = since(t0);
    t0 = clk::now();
    const auto p = fqm::scan_bipartitions_parallel(table, m, kind);
    const double tp = since(t0);
    std::printf("scan %-8s serial %.3fs  parallel %.3fs  same=%s\n",
                kind == fqm::SeparationKind::Vertical ? "vertical" : "cyclic", ts, tp,
                (s.order == p.order && s.part1 == p.part1) ? "yes" : "NO");
  }

  const std::vector<std::string> names = {"tau"};
  const fqm::mc::TrialFn fn = [&](std::uint64_t t) -> fqm::mc::TrialOutcome {
    fqm::ProcessState st(40, f, 9, t, {true, false});
    return {long(fqm::track_first_circuit(st).second)};
  };
  t0 = clk::now();
  const auto s = fqm::mc::run_trials_serial(names, trials, fn);
  const double ts = since(t0);
  t0 = clk::now();
  const auto p = fqm::mc::run_trials(names, trials, fn);
  const double tp = since(t0);
  std::printf("first-circuit trials x%llu: serial %.3fs  parallel %.3fs  same=%s\n",
              (unsigned long long)trials, ts, tp,
              s.stats.at("tau").counts == p.stats.at("tau").counts ? "yes" : "NO");
  return 0;
}
