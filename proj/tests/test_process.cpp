#include <set>

#include "doctest.h"
#include "fqm/errors.hpp"
#include "fqm/process.hpp"
#include "support.hpp"

using namespace fqm;

namespace {

FqMatrix prefix(const FqMatrix& a, std::size_t m) {
  IndexSet s;
  for (std::size_t j = 0; j < m; ++j) s.push_back(j);
  return a.select_columns(s);
}

}  // namespace

TEST_CASE("process is a function of seed and stream") {
  const auto f = make_field(3);
  ProcessState a(5, f, 9, 4), b(5, f, 9, 4), c(5, f, 9, 5);
  for (int i = 0; i < 12; ++i) {
    a.step();
    b.step();
    c.step();
  }
  CHECK(a.matrix() == b.matrix());
  CHECK_FALSE(a.matrix() == c.matrix());
}

TEST_CASE("corank history and first circuit") {
  for (unsigned q : {2u, 3u, 4u}) {
    const oracle::Gf g(q);
    for (std::uint64_t s = 0; s < 30; ++s) {
      ProcessState st(4, make_field(q), 31, s);
      std::optional<IndexSet> circ;
      std::size_t first = 0;
      while (st.corank() < 3) {
        const auto rep = st.step();
        if (rep.first_circuit) {
          circ = rep.first_circuit;
          first = rep.step;
        }
      }
      for (std::size_t m = 1; m <= st.steps(); ++m)
        CHECK(st.corank_history()[m - 1] == m - oracle::rank(g, to_oracle(prefix(st.matrix(), m))));
      REQUIRE(circ.has_value());
      CHECK(st.hits().crk.at(1) == first);
      oracle::Mat cols;
      for (auto j : *circ) cols.push_back(to_oracle(st.matrix())[j]);
      CHECK(oracle::rank(g, cols) == cols.size() - 1);
      CHECK(is_circuit(RepMatroid(st.matrix()), *circ));
    }
  }
  ProcessState st(6, make_field(2), 5, 0);
  const auto [step, len] = track_first_circuit(st);
  CHECK(st.hits().crk.at(1) == step);
  CHECK(st.hits().first_circuit_length == len);
  ProcessState st2(6, make_field(2), 5, 0);
  CHECK(run_until_corank(st2, 1) == step);
}

TEST_CASE("k-circuit hitting time") {
  for (unsigned q : {2u, 3u}) {
    const oracle::Gf g(q);
    for (std::size_t k : {1u, 2u, 3u, 4u}) {
      for (std::uint64_t s = 0; s < 10; ++s) {
        ProcessState st(4, make_field(q), 41, s);
        const std::size_t tau = track_k_circuit(st, k);
        if (k == 1) {
          const auto cols = to_oracle(st.matrix());
          const auto zero = [&](std::size_t j) { return oracle::rank(g, {cols[j]}) == 0; };
          CHECK(zero(tau - 1));
          for (std::size_t j = 0; j + 1 < tau; ++j) CHECK_FALSE(zero(j));
          continue;
        }
        REQUIRE(tau <= 22);
        const auto at = oracle::circuits(g, to_oracle(prefix(st.matrix(), tau)));
        const auto before = oracle::circuits(g, to_oracle(prefix(st.matrix(), tau - 1)));
        CHECK(at.count(k));
        CHECK_FALSE(before.count(k));
      }
    }
  }
}

TEST_CASE("connectivity hitting time") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    ProcessState st(4, make_field(2), 51, s);
    const std::size_t tau = track_connectivity(st, 2, {}, false, 40);
    const auto kap = [&](std::size_t m) { return vertical_connectivity(RepMatroid(prefix(st.matrix(), m))).value; };
    CHECK(kap(tau) >= ExtInt(2));
    for (std::size_t m = 1; m < tau; ++m) CHECK(kap(m) < ExtInt(2));
  }
}

TEST_CASE("critical tracker follows the loopless part") {
  const oracle::Space sp(2, 3);
  for (std::uint64_t s = 0; s < 10; ++s) {
    ProcessState st(3, make_field(2), 61, s);
    CriticalTracker tr(3);
    Tracker* list[] = {&tr};
    run_trackers(st, list, 200);
    CHECK(tr.chi() == 3);
    CHECK(tr.skips().empty());
    oracle::Mat cols;
    for (const auto& c : to_oracle(st.matrix()))
      if (sp.idx(c) != 0) cols.push_back(c);
    CHECK(oracle::critical_number(sp, cols) == 3);
    for (const auto& [step, chi] : tr.changes()) {
      oracle::Mat pre;
      for (const auto& c : to_oracle(prefix(st.matrix(), step)))
        if (sp.idx(c) != 0) pre.push_back(c);
      CHECK(oracle::critical_number(sp, pre) == chi);
    }
  }
}

TEST_CASE("minor tracker fast paths agree with the general search") {
  const auto f2 = make_field(2);
  const RepMatroid u23 = catalog_matroid("U23", f2);
  for (std::uint64_t s = 0; s < 10; ++s) {
    ProcessState st(4, f2, 71, s);
    const std::size_t tau = track_minor(st, u23, "U23");
    CHECK(has_minor(RepMatroid(prefix(st.matrix(), tau)), u23).has_value());
    CHECK_FALSE(has_minor(RepMatroid(prefix(st.matrix(), tau - 1)), u23).has_value());
  }
}

TEST_CASE("point models") {
  Rng rng(81, 0);
  const auto f = make_field(3);
  const auto m2 = sample_m2(3, f, 6, rng);
  CHECK(m2.points.size() == 6);
  CHECK(std::set<std::uint64_t>(m2.points.begin(), m2.points.end()).size() == 6);
  CHECK(m2.matrix.cols() == 6);
  CHECK(is_simple(RepMatroid(m2.matrix)));
  const auto m3 = sample_m3(3, f, 1.0, rng);
  CHECK(m3.points.size() == 13);
  CHECK(sample_m3(3, f, 0.0, rng).points.empty());
  const auto m1 = sample_m1(3, f, 5, rng);
  CHECK(m1.matrix.cols() == 5);
  CHECK_THROWS(sample_m2(2, f, 5, rng));
}
