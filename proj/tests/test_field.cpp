#include "doctest.h"
#include "fqm/errors.hpp"
#include "fqm/field.hpp"
#include "fqm/rng.hpp"
#include "oracle.hpp"

using namespace fqm;

namespace {

std::vector<unsigned> prime_powers(unsigned limit) {
  std::vector<unsigned> out;
  for (unsigned q = 2; q <= limit; ++q) {
    unsigned p = 0, e = 0;
    if (prime_power(q, p, e)) out.push_back(q);
  }
  return out;
}

}  // namespace

TEST_CASE("prime power detection") {
  unsigned p, e;
  CHECK(prime_power(2, p, e));
  CHECK((p == 2 && e == 1));
  CHECK(prime_power(81, p, e));
  CHECK((p == 3 && e == 4));
  CHECK(prime_power(65536, p, e));
  CHECK((p == 2 && e == 16));
  CHECK_FALSE(prime_power(6, p, e));
  CHECK_FALSE(prime_power(1, p, e));
  CHECK_FALSE(prime_power(100, p, e));
  CHECK(prime_powers(64).size() == 27);
}

TEST_CASE("tables agree with polynomial arithmetic") {
  for (unsigned q : prime_powers(32)) {
    CAPTURE(q);
    const auto f = make_field(q);
    const oracle::Gf g(q);
    CHECK(f->characteristic() == g.p);
    CHECK(f->degree() == g.e);
    CHECK(f->modulus() == g.mod);
    for (unsigned a = 0; a < q; ++a) {
      CHECK(f->neg(Elem(a)) == g.neg(a));
      if (a) CHECK(f->inv(Elem(a)) == g.inv(a));
      for (unsigned b = 0; b < q; ++b) {
        REQUIRE(f->add(Elem(a), Elem(b)) == g.add(a, b));
        REQUIRE(f->mul(Elem(a), Elem(b)) == g.mul(a, b));
      }
    }
  }
}

TEST_CASE("large fields on random pairs") {
  Rng rng(3, 0);
  for (unsigned q : {243u, 256u, 343u, 729u, 1024u, 4096u, 65521u, 65536u}) {
    CAPTURE(q);
    const auto f = make_field(q);
    const oracle::Gf g(q);
    CHECK(f->modulus() == g.mod);
    for (int i = 0; i < 2000; ++i) {
      const unsigned a = rng.below(q), b = rng.below(q);
      REQUIRE(f->add(Elem(a), Elem(b)) == g.add(a, b));
      REQUIRE(f->mul(Elem(a), Elem(b)) == g.mul(a, b));
    }
    const Elem x = Elem(1 + rng.below(q - 1));
    CHECK(f->mul(x, f->inv(x)) == 1);
  }
}

TEST_CASE("primitive element generates the multiplicative group") {
  for (unsigned q : {2u, 3u, 4u, 8u, 9u, 25u, 49u, 64u}) {
    const auto f = make_field(q);
    Elem x = 1;
    unsigned order = 0;
    do {
      x = f->mul(x, f->primitive());
      ++order;
    } while (x != 1);
    CHECK(order == q - 1);
  }
}

TEST_CASE("axiom checker") {
  for (unsigned q : prime_powers(64)) CHECK(check_field_axioms(*make_field(q)).ok);
  CHECK(check_field_axioms(*make_field(65536), 64, 20000).ok);
  const auto bad = make_field(4)->corrupted_copy(2, 3, 2);
  const auto rep = check_field_axioms(*bad);
  CHECK_FALSE(rep.ok);
  CHECK(!rep.failure.empty());
}

TEST_CASE("field construction errors") {
  CHECK_THROWS_AS(make_field(6), NotPrimePower);
  CHECK_THROWS_AS(make_field(1), NotPrimePower);
  CHECK_THROWS_AS(make_field(0), NotPrimePower);
  CHECK_THROWS_AS(make_field(65537), TooLarge);
  CHECK(make_field(9) == make_field(9));
}
