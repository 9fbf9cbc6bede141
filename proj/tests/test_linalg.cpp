#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "fqm/errors.hpp"
#include "fqm/matrix.hpp"
#include "fqm/ranker.hpp"
#include "fqm/rref.hpp"
#include "support.hpp"

using namespace fqm;

namespace {

FqVector times(const FqMatrix& a, const FqVector& x) {
  const Field& f = a.field();
  FqVector y(a.rows(), 0);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = f.add(y[i], f.mul(a.at(i, j), x[j]));
  return y;
}

bool is_zero(const FqVector& v) {
  return std::all_of(v.begin(), v.end(), [](Elem e) { return e == 0; });
}

}  // namespace

TEST_CASE("philox known answers") {
  using A = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("rng streams") {
  Rng a(5, 1), b(5, 1), c(5, 2), d(6, 1);
  bool diff_stream = false, diff_seed = false;
  for (int i = 0; i < 16; ++i) {
    const auto x = a(), y = b(), z = c(), w = d();
    CHECK(x == y);
    diff_stream = diff_stream || x != z;
    diff_seed = diff_seed || x != w;
  }
  CHECK(diff_stream);
  CHECK(diff_seed);
  Rng r(1, 0);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[r.below(7)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform01();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("rank matches plain elimination") {
  Rng rng(11, 0);
  for (unsigned q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 27u}) {
    const oracle::Gf g(q);
    for (int t = 0; t < 60; ++t) {
      const std::size_t n = 1 + rng.below(7), m = 1 + rng.below(9);
      const FqMatrix a = random_matrix(n, m, q, rng);
      REQUIRE(rank(a) == oracle::rank(g, to_oracle(a)));
    }
  }
  // wide binary matrices use the packed path
  const oracle::Gf g2(2);
  for (int t = 0; t < 20; ++t) {
    const FqMatrix a = random_matrix(70, 80, 2, rng);
    CHECK(rank(a) == oracle::rank(g2, to_oracle(a)));
  }
}

TEST_CASE("kernel basis") {
  Rng rng(12, 0);
  for (unsigned q : {2u, 3u, 4u, 7u}) {
    const oracle::Gf g(q);
    for (int t = 0; t < 40; ++t) {
      const FqMatrix a = random_matrix(1 + rng.below(5), 1 + rng.below(8), q, rng);
      const auto ker = kernel_basis(a);
      CHECK(ker.size() == a.cols() - rank(a));
      for (const auto& x : ker) CHECK(is_zero(times(a, x)));
      oracle::Mat kv;
      for (const auto& x : ker) kv.push_back(oracle::Vec(x.begin(), x.end()));
      CHECK(oracle::rank(g, kv) == ker.size());
    }
  }
}

TEST_CASE("contraction and deletion ranks") {
  Rng rng(13, 0);
  for (unsigned q : {2u, 3u, 5u}) {
    const oracle::Gf g(q);
    for (int t = 0; t < 40; ++t) {
      const std::size_t m = 2 + rng.below(6);
      const FqMatrix a = random_matrix(1 + rng.below(4), m, q, rng);
      const auto tab = oracle::rank_table(g, to_oracle(a));
      IndexSet x, rest;
      std::uint64_t xm = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (rng.below(2)) {
          x.push_back(j);
          xm |= std::uint64_t(1) << j;
        } else {
          rest.push_back(j);
        }
      const FqMatrix c = contract(a, x), d = delete_columns(a, x);
      REQUIRE(c.cols() == rest.size());
      REQUIRE(d.cols() == rest.size());
      const auto tc = oracle::rank_table(g, to_oracle(c));
      const auto td = oracle::rank_table(g, to_oracle(d));
      for (std::uint64_t s = 0; s < tc.size(); ++s) {
        std::uint64_t y = 0;
        for (std::size_t i = 0; i < rest.size(); ++i)
          if (s >> i & 1) y |= std::uint64_t(1) << rest[i];
        CHECK(tc[s] == tab[y | xm] - tab[xm]);
        CHECK(td[s] == tab[y]);
      }
    }
  }
}

TEST_CASE("incremental echelon state") {
  Rng rng(14, 0);
  for (unsigned q : {2u, 3u, 4u, 5u}) {
    for (int t = 0; t < 30; ++t) {
      const std::size_t n = 1 + rng.below(6), m = 1 + rng.below(10);
      const FqMatrix a = random_matrix(n, m, q, rng);
      RrefState st(a.field_ptr(), n, true, true);
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t before = st.rank();
        const bool in = st.in_span(a.column(j));
        const bool raised = st.insert(a.column(j));
        CHECK(raised == !in);
        CHECK(st.rank() == before + (raised ? 1 : 0));
        CHECK(st.rank() == rank(a.select_columns([&] {
                IndexSet s;
                for (std::size_t i = 0; i <= j; ++i) s.push_back(i);
                return s;
              }())));
        if (!raised) {
          const FqVector x = st.last_dependency().kernel_vector(a.field(), m);
          CHECK(x[j] == 1);
          CHECK(is_zero(times(a, x)));
        }
      }
      CHECK(st.dependencies().size() == st.corank());
      CHECK(rank(st.reduced_basis()) == st.rank());
    }
  }
}

TEST_CASE("subset ranks and row reduction") {
  Rng rng(15, 0);
  for (unsigned q : {2u, 3u, 4u}) {
    const oracle::Gf g(q);
    for (int t = 0; t < 20; ++t) {
      const FqMatrix a = random_matrix(1 + rng.below(5), 1 + rng.below(9), q, rng);
      const auto want = oracle::rank_table(g, to_oracle(a));
      const auto got = SubsetRanker(a).rank_table();
      const FqMatrix b = row_reduce(a);
      CHECK(b.rows() == rank(a));
      const auto viaB = SubsetRanker(b).rank_table();
      for (std::size_t s = 0; s < want.size(); ++s) {
        REQUIRE(got[s] == want[s]);
        REQUIRE(viaB[s] == want[s]);
        REQUIRE(SubsetRanker(a).rank(s) == want[s]);
      }
    }
  }
}

TEST_CASE("matrix text format") {
  Rng rng(16, 0);
  const FqMatrix a = random_matrix(3, 5, 9, rng);
  std::stringstream ss;
  write_matrix(ss, a);
  const FqMatrix b = read_matrix(ss);
  CHECK(a == b);
  std::stringstream bad1("2 2");
  CHECK_THROWS_AS(read_matrix(bad1), IoError);
  std::stringstream bad2("2 1 2\n0 2\n");
  CHECK_THROWS_AS(read_matrix(bad2), IoError);
  std::stringstream bad3("6 1 1\n0\n");
  CHECK_THROWS(read_matrix(bad3));
  CHECK_THROWS_AS(load_matrix("/nonexistent/matrix.txt"), IoError);
  const auto f = make_field(3);
  const FqMatrix c = FqMatrix::from_rows(f, {{1, 0, 2}, {0, 1, 1}});
  CHECK(c.rows() == 2);
  CHECK(c.at(0, 2) == 2);
  CHECK_THROWS_AS(FqMatrix::from_rows(f, {{1, 0}, {0}}), InvalidParam);
  CHECK_THROWS_AS(FqMatrix::from_rows(f, {{3}}), InvalidParam);
}
