#include <set>

#include "doctest.h"
#include "fqm/errors.hpp"
#include "fqm/subspace.hpp"
#include "fqm/theory.hpp"
#include "support.hpp"

using namespace fqm;

namespace {

std::set<std::uint64_t> element_indices(const SubspaceHandle& s, unsigned q) {
  std::set<std::uint64_t> out;
  for (const auto& v : s.elements()) out.insert(vector_index(v, q));
  return out;
}

}  // namespace

TEST_CASE("enumerated subspaces are exactly the oracle's") {
  for (unsigned q : {2u, 3u, 4u}) {
    const std::size_t top = q == 2 ? 4 : 3;
    for (std::size_t n = 1; n <= top; ++n) {
      const oracle::Space sp(q, n);
      const auto f = make_field(q);
      for (std::size_t k = 0; k <= n; ++k) {
        CAPTURE(q);
        CAPTURE(n);
        CAPTURE(k);
        std::set<std::set<std::uint64_t>> got;
        for (const auto& s : enumerate_subspaces(f, n, k)) {
          CHECK(s.dim() == k);
          got.insert(element_indices(s, q));
        }
        CHECK(got == sp.subspaces(k));
        CHECK(theory::BigInt(gbinom_saturating(n, k, q)) == theory::gaussian_binomial(unsigned(n), unsigned(k), q));
      }
    }
  }
}

TEST_CASE("subspace counts up to n = 4 for q = 3") {
  const auto f = make_field(3);
  for (std::size_t k = 0; k <= 4; ++k) {
    std::size_t count = 0;
    for_each_subspace(f, 4, k, 1u << 20, [&](const SubspaceHandle&) {
      ++count;
      return true;
    });
    CHECK(theory::BigInt(count) == theory::gaussian_binomial(4, unsigned(k), 3));
  }
  CHECK_THROWS_AS(for_each_subspace(f, 4, 2, 10, [](const SubspaceHandle&) { return true; }),
                  BudgetExceeded);
}

TEST_CASE("span and membership") {
  const auto f = make_field(5);
  const SubspaceHandle s = SubspaceHandle::span_of(f, 3, {{1, 2, 0}, {2, 4, 0}, {0, 0, 3}});
  CHECK(s.dim() == 2);
  CHECK(s.contains(FqVector{3, 1, 4}));
  CHECK_FALSE(s.contains(FqVector{0, 1, 0}));
  CHECK(s.elements().size() == 25);
  const SubspaceHandle t = SubspaceHandle::span_of(f, 3, {{0, 0, 1}, {1, 2, 1}});
  CHECK(s == t);
}

TEST_CASE("projective points") {
  for (unsigned q : {2u, 3u, 4u, 5u}) {
    const auto f = make_field(q);
    for (std::size_t n = 1; n <= 4; ++n) {
      const std::uint64_t N = projective_count(n, q);
      CHECK(theory::BigInt(N) == theory::projective_size(unsigned(n), q));
      std::set<FqVector> seen;
      for (std::uint64_t i = 0; i < N; ++i) {
        FqVector v = projective_point(i, n, q);
        std::size_t lead = 0;
        while (v[lead] == 0) ++lead;
        CHECK(v[lead] == 1);
        CHECK(projective_index(*f, v) == i);
        FqVector w = v;
        for (auto& e : w) e = f->mul(e, f->primitive());
        CHECK(projective_index(*f, w) == i);
        seen.insert(v);
      }
      CHECK(seen.size() == N);
      const FqMatrix pg = projective_geometry(f, n);
      CHECK(pg.cols() == N);
      CHECK(rank(pg) == n);
    }
  }
  CHECK_THROWS_AS(projective_point(7, 3, 2), InvalidParam);
  CHECK_THROWS_AS(projective_index(*make_field(2), FqVector{0, 0}), InvalidParam);
}

TEST_CASE("vector indices") {
  CHECK(vector_index(FqVector{1, 2, 0}, 3) == 7);
  CHECK(vector_from_index(7, 3, 3) == FqVector{1, 2, 0});
}
