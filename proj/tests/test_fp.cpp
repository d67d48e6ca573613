#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kolab/fp.hpp"

#include <cstdint>
#include <vector>

using namespace kolab;

// Independent oracle: Pascal triangle over uint64, exact for a <= 60.
static std::uint64_t binom_exact(unsigned a, unsigned b) {
  if (b > a) return 0;
  std::vector<std::uint64_t> row(a + 1, 0);
  row[0] = 1;
  for (unsigned i = 1; i <= a; ++i)
    for (unsigned j = i; j >= 1; --j) row[j] += row[j - 1];
  return row[b];
}

TEST_CASE("modulus validation") {
  CHECK_THROWS_AS(PrimeField(0), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(1), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(2), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(4), std::invalid_argument);
  CHECK_THROWS_AS(PrimeField(9), std::invalid_argument);
  CHECK_NOTHROW(PrimeField(3));
  CHECK_NOTHROW(PrimeField(7));
}

TEST_CASE("pinned arithmetic values") {
  PrimeField f3(3), f5(5), f7(7);
  CHECK(f3.add(2, 2) == 1);
  CHECK(f5.add(0, 4) == 4);
  CHECK(f7.add(3, 4) == 0);
  CHECK(f5.inv(2) == 3);
  CHECK(f3.inv(2) == 2);
  CHECK(f7.inv(1) == 1);
  CHECK_THROWS_AS(f5.inv(0), std::domain_error);
}

TEST_CASE("field axioms exhaustively for p <= 7") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    PrimeField f(p);
    for (residue a = 0; a < p; ++a) {
      CHECK(f.add(a, 0) == a);
      CHECK(f.mul(a, 1) == a);
      CHECK(f.add(a, f.neg(a)) == 0);
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
      for (residue b = 0; b < p; ++b) {
        CHECK(f.add(a, b) == f.add(b, a));
        CHECK(f.mul(a, b) == f.mul(b, a));
        for (residue c = 0; c < p; ++c) {
          CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
          CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
          CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("pinned binomials") {
  PrimeField f3(3);
  BinomTable b3(f3);
  CHECK(b3.binom(2, 1) == 2);
  CHECK(b3.binom(3, 1) == 0);  // p | C(p,1)
  CHECK(b3.binom(1, 2) == 0);

  PrimeField f5(5);
  BinomTable b5(f5);
  // C(7,3) = 35, frozen from the factorial oracle below.
  CHECK(binom_exact(7, 3) == 35);
  CHECK(b5.binom(7, 3) == 35 % 5);
}

TEST_CASE("digit rule agrees with exact binomials up to p^2") {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    PrimeField f(p);
    BinomTable bt(f);
    for (unsigned a = 0; a <= p * p; ++a)
      for (unsigned b = 0; b <= p * p; ++b)
        CHECK(bt.binom(a, b) == binom_exact(a, b) % p);
  }
}

TEST_CASE("sign helper") {
  PrimeField f5(5);
  CHECK(f5.sign(0) == 1);
  CHECK(f5.sign(1) == 4);
  CHECK(f5.apply_sign(3, 2) == 3);
  CHECK(f5.apply_sign(2, 2) == 2);
}
