#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kolab/witt.hpp"

#include <random>

using namespace kolab;

namespace {

struct Fixture {
  DividedPowerAlgebra O;
  WittAlgebra W;
  Fixture(std::uint32_t p = 3, int n = 1, std::vector<int> t = {1})
      : O(Shape::contact(p, n, std::move(t))), W(O) {}
};

std::vector<SuperDerivation> witt_basis(const Fixture& fx) {
  std::vector<SuperDerivation> out;
  for (auto& mo : fx.O.basis())
    for (int r = 1; r <= fx.O.shape().vars(); ++r)
      out.push_back(fx.W.term(fx.O.monomial(mo), r));
  return out;
}

}  // namespace

TEST_CASE("apply") {
  Fixture fx;
  auto& O = fx.O;
  auto& W = fx.W;
  // Euler-type action: (x1 d1)(x^(2e1)) = x1 * x1 = 2 x^(2e1)
  SuperDerivation D = W.term(O.variable(1), 1);
  CHECK(W.apply(D, O.divided_power(1, 2)) == O.scale(2, O.divided_power(1, 2)));
  CHECK(W.apply(W.direction(3), O.one()).is_zero());
}

TEST_CASE("euler operator") {
  Fixture fx;
  auto& O = fx.O;
  auto& W = fx.W;
  CHECK(W.euler(O.one()).is_zero());
  CHECK(W.euler(O.variable(3)).is_zero());  // the distinguished variable is not summed
  Poly x1x2 = O.multiply(O.variable(1), O.variable(2));
  CHECK(W.euler(x1x2) == O.scale(2, x1x2));

  // eigenvalue = degree in the first 2n variables; take p = 5 so 3 is visible
  Fixture fx5(5, 1, {1});
  Poly f = fx5.O.multiply(fx5.O.divided_power(1, 2), fx5.O.variable(2));
  CHECK(fx5.W.euler(f) == fx5.O.scale(3, f));

  // agreement with the generic sum x_i d_i
  for (auto& mo : O.basis()) {
    Poly f2 = O.monomial(mo);
    Poly sum = O.zero();
    for (int i = 1; i <= 2; ++i)
      sum = O.add(sum, O.multiply(O.variable(i), O.derive(i, f2)));
    CHECK(W.euler(f2) == sum);
  }
}

TEST_CASE("bracket matches pinned examples") {
  Fixture fx;
  auto& O = fx.O;
  auto& W = fx.W;
  // [d1, x1 d2] = d2
  CHECK(W.bracket(W.direction(1), W.term(O.variable(1), 2)) == W.direction(2));
  // odd coefficient squares vanish: [x3 d1, x3 d2] = 0
  CHECK(W.bracket(W.term(O.variable(3), 1), W.term(O.variable(3), 2)).is_zero());
  // [x2 d1, x1 d2] = x2 d2 + x1 d1 (value fixed by the apply-composition oracle)
  SuperDerivation lhs = W.bracket(W.term(O.variable(2), 1), W.term(O.variable(1), 2));
  SuperDerivation expect = W.add(W.term(O.variable(2), 2), W.term(O.variable(1), 1));
  CHECK(lhs == expect);
  CHECK(W.bracket_via_apply(W.term(O.variable(2), 1), W.term(O.variable(1), 2)) == expect);

  CHECK_THROWS_AS(W.bracket(W.add(W.direction(1), W.direction(2)), W.direction(1)),
                  std::domain_error);
}

TEST_CASE("bracket equals the operator-composition oracle on the whole basis") {
  Fixture fx;
  auto basis = witt_basis(fx);
  for (auto& A : basis)
    for (auto& B : basis) {
      SuperDerivation fast = fx.W.bracket(A, B);
      SuperDerivation slow = fx.W.bracket_via_apply(A, B);
      CHECK(fast == slow);
      // operator equality on every basis poly as well
      for (auto& mo : fx.O.basis()) {
        Poly f = fx.O.monomial(mo);
        int pa = *fx.W.parity(A), pb = *fx.W.parity(B);
        Poly composed = fx.O.sub(fx.W.apply(A, fx.W.apply(B, f)),
                                 fx.O.scale(fx.O.field().sign(pa * pb),
                                            fx.W.apply(B, fx.W.apply(A, f))));
        CHECK(fx.W.apply(fast, f) == composed);
      }
    }
}

TEST_CASE("super anticommutativity and Jacobi, exhaustive then sampled") {
  Fixture fx;
  auto& W = fx.W;
  auto& fp = fx.O.field();
  auto basis = witt_basis(fx);
  for (auto& A : basis)
    for (auto& B : basis) {
      int pa = *W.parity(A), pb = *W.parity(B);
      CHECK(W.bracket(A, B) == W.scale(fp.neg(fp.sign(pa * pb)), W.bracket(B, A)));
    }
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    auto& A = basis[rng() % basis.size()];
    auto& B = basis[rng() % basis.size()];
    auto& C = basis[rng() % basis.size()];
    int pa = *W.parity(A), pb = *W.parity(B), pc = *W.parity(C);
    SuperDerivation j =
        W.add(W.scale(fp.sign(pa * pc), W.bracket(A, W.bracket(B, C))),
              W.add(W.scale(fp.sign(pb * pa), W.bracket(B, W.bracket(C, A))),
                    W.scale(fp.sign(pc * pb), W.bracket(C, W.bracket(A, B)))));
    CHECK(j.is_zero());
  }
}

TEST_CASE("grading compatibility of the bracket") {
  Fixture fx;
  auto basis = witt_basis(fx);
  for (auto& A : basis)
    for (auto& B : basis) {
      SuperDerivation C = fx.W.bracket(A, B);
      if (C.is_zero()) continue;
      CHECK(*fx.W.pdeg(C) == *fx.W.pdeg(A) + *fx.W.pdeg(B));
      CHECK(*fx.W.sdeg(C) == *fx.W.sdeg(A) + *fx.W.sdeg(B));
    }
}

TEST_CASE("hamiltonian field") {
  Fixture fx;
  auto& O = fx.O;
  auto& W = fx.W;
  CHECK(W.hamiltonian(O.one()).is_zero());
  CHECK(W.hamiltonian(O.variable(3)).is_zero());
  // two-term identity for products of two variables
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      Poly a = O.multiply(O.variable(i), O.variable(j));
      if (a.is_zero()) continue;
      int mui = i <= 1 ? 0 : 1, muj = j <= 1 ? 0 : 1;
      SuperDerivation expect = W.add(
          W.term(O.scale(O.field().sign(mui + mui * muj), O.variable(j)), W.conjugate(i)),
          W.term(O.scale(O.field().sign(muj), O.variable(i)), W.conjugate(j)));
      CHECK(W.hamiltonian(a) == expect);
    }
  CHECK(W.hamiltonian(O.variable(1)) == W.direction(2));
}

TEST_CASE("laplace pairing and divergence-free membership") {
  Fixture fx2(3, 2, {1, 1});
  auto& O = fx2.O;
  auto& W = fx2.W;
  Poly x1x3 = O.multiply(O.variable(1), O.variable(3));  // paired: 1' = 3
  CHECK(W.laplace(x1x3) == O.one());
  Poly x1x4 = O.multiply(O.variable(1), O.variable(4));  // unpaired cross term
  CHECK(W.laplace(x1x4).is_zero());
  Poly diff = O.sub(x1x3, O.multiply(O.variable(2), O.variable(4)));
  CHECK(W.laplace(diff).is_zero());

  CHECK_FALSE(W.divergence_free(x1x3));
  CHECK(W.divergence_free(diff));
  CHECK(W.divergence_free(O.multiply(O.variable(1), O.variable(2))));
  CHECK_THROWS_AS(W.divergence_free(O.variable(5)), std::domain_error);
}

TEST_CASE("principal degrees of derivations") {
  Fixture fx;
  auto& W = fx.W;
  auto& O = fx.O;
  CHECK(W.pdeg(W.direction(3)) == -2);
  CHECK(W.pdeg(W.term(O.variable(3), 1)) == 1);
  CHECK(W.pdeg(W.direction(1)) == -1);
  CHECK_FALSE(W.pdeg(W.add(W.direction(3), W.direction(1))).has_value());
}

TEST_CASE("sho-type closure: [H(a), H(b)] = H(H(a)(b)) when laplace(a) = 0") {
  Fixture fx2(3, 2, {1, 1});
  auto& O = fx2.O;
  auto& W = fx2.W;
  auto inside = [&](const Monomial& mo) {
    return ((mo.umask >> (O.shape().m - 1)) & 1u) == 0;  // omits the distinguished variable
  };
  for (auto& ma : O.basis_filtered(inside)) {
    Poly a = O.monomial(ma);
    if (!W.laplace(a).is_zero()) continue;
    for (auto& mb : O.basis_filtered(inside)) {
      Poly b = O.monomial(mb);
      SuperDerivation lhs = W.bracket(W.hamiltonian(a), W.hamiltonian(b));
      SuperDerivation rhs = W.hamiltonian(W.apply(W.hamiltonian(a), b));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("derivation print and coords") {
  Fixture fx;
  auto& W = fx.W;
  auto& O = fx.O;
  SuperDerivation D = W.add(W.term(O.variable(1), 1), W.scale(2, W.direction(3)));
  CHECK(W.print(D) == "x1*d1 + 2*d3");
  CHECK(W.print(SuperDerivation{}) == "0");
  CHECK(W.from_coords(W.coords(D)) == D);
}
