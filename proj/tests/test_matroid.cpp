#include "doctest.h"
#include "fqm/errors.hpp"
#include "fqm/matroid.hpp"
#include "support.hpp"

using namespace fqm;

namespace {

ExtInt ext(std::size_t v) { return v == 0 ? ExtInt::infinity() : ExtInt(std::int64_t(v)); }

}  // namespace

TEST_CASE("girth and circuit spectrum against subset enumeration") {
  Rng rng(21, 0);
  for (unsigned q : {2u, 3u, 4u}) {
    const oracle::Gf g(q);
    for (int t = 0; t < 40; ++t) {
      const FqMatrix a = random_matrix(1 + rng.below(5), 1 + rng.below(9), q, rng);
      const RepMatroid m(a);
      const auto want = oracle::circuits(g, to_oracle(a));
      CHECK(girth(m) == ext(oracle::girth(g, to_oracle(a))));
      for (auto how : {SpectrumMethod::KernelSweep, SpectrumMethod::Subsets}) {
        auto got = circuit_spectrum(m, {}, how);
        std::erase_if(got, [](const auto& kv) { return kv.second == 0; });
        CHECK(got == want);
        CHECK(girth(m, {}, how) == ext(oracle::girth(g, to_oracle(a))));
      }
    }
  }
}

TEST_CASE("circuits, simplicity, uniformity") {
  const auto f2 = make_field(2);
  const RepMatroid fano(projective_geometry(f2, 3));
  CHECK(is_simple(fano));
  int third = 0;
  for (std::size_t k = 2; k < 7; ++k) third += is_circuit(fano, {0, 1, k});
  CHECK(third == 1);
  CHECK(circuit_spectrum(fano).at(3) == 7);
  CHECK(circuit_spectrum(fano).at(4) == 7);
  CHECK_FALSE(is_uniform(fano).has_value());
  const RepMatroid u24(projective_geometry(make_field(3), 2));
  CHECK(is_uniform(u24) == std::make_pair(std::size_t(2), std::size_t(4)));
  const RepMatroid par(FqMatrix::from_rows(f2, {{1, 1, 0}, {0, 0, 1}}));
  CHECK_FALSE(is_simple(par));
  CHECK(girth(par) == ExtInt(2));
  CHECK(girth(RepMatroid(FqMatrix::from_rows(f2, {{1, 0}, {0, 1}}))).is_infinite());
}

TEST_CASE("connectivities against the definitions") {
  Rng rng(22, 0);
  int checked = 0;
  for (unsigned q : {2u, 3u, 4u}) {
    const oracle::Gf g(q);
    for (int t = 0; t < 80; ++t) {
      const std::size_t m = 1 + rng.below(q == 2 ? 10 : 8);
      const FqMatrix a = random_matrix(1 + rng.below(5), m, q, rng);
      const RepMatroid mt(a);
      const auto cols = to_oracle(a);
      const ExtInt kv = ext(oracle::connectivity(g, cols, oracle::Sep::Vertical));
      const ExtInt kc = ext(oracle::connectivity(g, cols, oracle::Sep::Cyclic));
      const ExtInt kt = ext(oracle::connectivity(g, cols, oracle::Sep::Tutte));
      CHECK(vertical_connectivity(mt, {}, VerticalMethod::Bipartitions).value == kv);
      CHECK(vertical_connectivity(mt, {}, VerticalMethod::Flats).value == kv);
      CHECK(cyclic_connectivity(mt).value == kc);
      CHECK(tutte_connectivity(mt).value == kt);
      const auto w = vertical_connectivity(mt).witness;
      CHECK(w.has_value() == kv.is_finite());
      if (w) CHECK(w->part1.size() + w->part2.size() == m);
      ++checked;
    }
  }
  CHECK(checked == 240);
}

TEST_CASE("connectivity edge cases") {
  const auto f2 = make_field(2);
  CHECK(vertical_connectivity(RepMatroid(projective_geometry(f2, 2))).value.is_infinite());
  // U_{2,3} plus a parallel element: no vertical or cyclic separation, yet t = 2
  const RepMatroid m(FqMatrix::from_rows(f2, {{1, 0, 1, 1}, {1, 1, 0, 0}}));
  CHECK(vertical_connectivity(m).value.is_infinite());
  CHECK(cyclic_connectivity(m).value.is_infinite());
  CHECK(tutte_connectivity(m).value == ExtInt(2));
  // free matroid of rank 3 splits as a direct sum
  CHECK(vertical_connectivity(RepMatroid(FqMatrix::from_rows(f2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})))
            .value == ExtInt(1));
}

TEST_CASE("vertical search on larger instances") {
  Rng rng(23, 0);
  for (int t = 0; t < 12; ++t) {
    const FqMatrix a = random_matrix(6, 12 + rng.below(6), 2, rng);
    const RepMatroid mt(a);
    CHECK(vertical_connectivity(mt, {}, VerticalMethod::Flats).value ==
          vertical_connectivity(mt, {}, VerticalMethod::Bipartitions).value);
  }
  Budget tiny;
  tiny.flat_work = 10;
  tiny.partition_max_m = 8;
  CHECK_THROWS_AS(vertical_connectivity(RepMatroid(random_matrix(8, 20, 2, rng)), tiny), BudgetExceeded);
}

TEST_CASE("parallel and serial bipartition scans agree") {
  Rng rng(24, 0);
  for (int t = 0; t < 5; ++t) {
    const FqMatrix a = random_matrix(5, 14, 3, rng);
    const auto tab = SubsetRanker(a).rank_table();
    for (auto kind : {SeparationKind::Vertical, SeparationKind::Cyclic, SeparationKind::Tutte}) {
      const auto s = scan_bipartitions(tab, 14, kind);
      const auto p = scan_bipartitions_parallel(tab, 14, kind);
      CHECK(s.order == p.order);
      CHECK(s.part1 == p.part1);
    }
  }
}

TEST_CASE("critical number against subspace search") {
  Rng rng(25, 0);
  for (unsigned q : {2u, 3u}) {
    for (std::size_t n = 1; n <= 3; ++n) {
      const oracle::Space sp(q, n);
      for (int t = 0; t < 15; ++t) {
        const FqMatrix a = random_loopless(n, 1 + rng.below(8), q, rng);
        const std::size_t want = oracle::critical_number(sp, to_oracle(a));
        for (auto how : {CriticalMethod::Bitmap, CriticalMethod::Dual})
          CHECK(critical_number(RepMatroid(a), {}, how) == want);
      }
    }
  }
  for (unsigned q : {2u, 3u})
    for (std::size_t n = 1; n <= 4; ++n)
      CHECK(critical_number(RepMatroid(projective_geometry(make_field(q), n))) == n);
  const auto f2 = make_field(2);
  CHECK_THROWS_AS(critical_number(RepMatroid(FqMatrix::from_rows(f2, {{1, 0}, {0, 0}}))), LoopPresent);
}

TEST_CASE("minors") {
  const auto f2 = make_field(2), f3 = make_field(3);
  const RepMatroid fano(projective_geometry(f2, 3));
  const RepMatroid u23 = catalog_matroid("U23", f2);
  const RepMatroid u24(projective_geometry(f3, 2));
  const auto w = has_minor(fano, u23);
  REQUIRE(w.has_value());
  CHECK(verify_minor(fano, u23, *w));
  CHECK_FALSE(has_minor(fano, u24).has_value());
  CHECK_FALSE(has_minor(catalog_matroid("free:3", f2), u23).has_value());
  Budget big;
  big.minor_max_m = 13;
  CHECK(has_minor(RepMatroid(projective_geometry(f3, 3)), u24, big).has_value());
  CHECK(has_minor(catalog_matroid("PG:3", f2), catalog_matroid("U12", f2)).has_value());
  CHECK_THROWS(catalog_matroid("nonsense", f2));
}

TEST_CASE("projective geometry containment") {
  const auto f2 = make_field(2);
  FqMatrix a = projective_geometry(f2, 3);
  CHECK(contains_pg(a, 3));
  CHECK_FALSE(contains_pg(delete_columns(a, {4}), 3));
  a.append_column(FqVector{1, 1, 1});
  CHECK(contains_pg(a, 3));
}
