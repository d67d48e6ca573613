#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kolab/invariants.hpp"

using namespace kolab;

namespace {

struct Fix {
  ContactAlgebra K;
  ContactModel M;
  Fix(std::uint32_t p, int n) : K(p, n, std::vector<int>(n, 1)), M(K) {}
};

}  // namespace

TEST_CASE("nil classification of the degree-0 even part at n=2") {
  Fix fx(3, 2);
  InvariantLab lab(fx.M);
  Subspace deg0even = fx.M.predicate_space(
      [&](int i) { return fx.M.basis_degree(i) == 0 && fx.M.basis_parity(i) == 0; });
  CHECK(deg0even.dim() == 5);  // n^2 + 1
  auto cls = lab.nil_classify(deg0even);
  int nil = 0, notnil = 0;
  for (auto& [name, v] : cls.verdicts) {
    if (v.kind == NilKind::NilpotentStable) ++nil;
    if (v.kind == NilKind::NotNilpotent) ++notnil;
    CHECK(v.kind != NilKind::Inconclusive);
  }
  CHECK(nil == 2);     // the two off-diagonal quadratics
  CHECK(notnil == 3);  // the two diagonals and the distinguished potential
  CHECK(cls.span_nil.dim() == 2);
}

TEST_CASE("nil subalgebra of the even part") {
  Fix fx(3, 2);
  const auto& fp = fx.M.field();
  InvariantLab lab(fx.M);
  const auto& n0 = lab.nil0();
  CHECK(n0.report.verdict == Verdict::Match);

  // membership and exclusion pinned from the bracket identities
  CHECK(member(fp, n0.space, fx.M.coords(fx.K.parse("x1*x3 - x2*x4"))));
  CHECK_FALSE(member(fp, n0.space, fx.M.coords(fx.K.parse("x1*x3"))));
  CHECK_FALSE(member(fp, n0.space, fx.M.coords(fx.K.parse("x5"))));

  // every degree-0 member is a divergence-free potential
  const auto& W = fx.K.witt();
  for (auto& row : n0.space.rows) {
    Poly a = fx.M.poly(row);
    Poly deg0 = fx.K.degree_component(a, 0);
    if (deg0.is_zero()) continue;
    CHECK(fx.K.algebra().derive(fx.K.last(), deg0).is_zero());
    CHECK(W.laplace(deg0).is_zero());
  }
}

TEST_CASE("raw mode flags the truncation artifact") {
  Fix fx(3, 1);
  InvariantLab raw(fx.M, NilMode::Raw);
  const auto& n0 = raw.nil0();
  CHECK(n0.report.verdict == Verdict::Conditional);
  CHECK(member(fx.M.field(), n0.space, fx.M.coords(fx.K.parse("x2"))));
  bool artifact = false;
  for (auto& w : n0.report.witnesses) artifact = artifact || w.find("x2") != std::string::npos;
  CHECK(artifact);

  InvariantLab cert(fx.M, NilMode::Certified);
  CHECK(cert.nil0().report.verdict == Verdict::Match);
  CHECK_FALSE(member(fx.M.field(), cert.nil0().space, fx.M.coords(fx.K.parse("x2"))));
  CHECK(cert.nil0().space.dim() == 3);  // everything of degree >= 1 in the even part
}

TEST_CASE("normalizer invariant T") {
  for (int n : {1, 2}) {
    Fix fx(3, n);
    InvariantLab lab(fx.M);
    auto rep = lab.report_T();
    CHECK(rep.verdict == Verdict::Match);
    CHECK(lab.T() == fx.M.filtration_parity(0, 0));
  }
  // raw mode at n=1: conditional, and the certified rerun is reported
  Fix fx(3, 1);
  InvariantLab raw(fx.M, NilMode::Raw);
  auto rep = raw.report_T();
  CHECK(rep.verdict == Verdict::Conditional);
  bool rerun_note = false;
  for (auto& w : rep.witnesses)
    rerun_note = rerun_note || w.find("certificate-filtered rerun") != std::string::npos;
  CHECK(rerun_note);
}

TEST_CASE("odd stabilizer Q at n=2 satisfies the quadratic bound") {
  Fix fx(3, 2);
  InvariantLab lab(fx.M);
  auto rep = lab.report_Q();
  CHECK(rep.verdict == Verdict::Match);
  const auto& fp = fx.M.field();
  CHECK(member(fp, lab.Q(), fx.M.coords(fx.K.parse("x1*x3*x5"))));
  CHECK(member(fp, lab.Q(), fx.M.coords(fx.K.parse("x3*x2*x4"))));
  CHECK_FALSE(member(fp, lab.Q(), fx.M.coords(fx.K.parse("1"))));
}

TEST_CASE("Q at n=1 genuinely escapes the quadratic bound") {
  // The pivot argument behind the bound needs two distinct even indices, so
  // at n=1 the degree -1 potential x1 satisfies the defining condition. The
  // counterexample is re-verified here directly from the definition.
  Fix fx(3, 1);
  const auto& fp = fx.M.field();
  InvariantLab lab(fx.M);
  auto rep = lab.report_Q();
  CHECK(rep.verdict == Verdict::Mismatch);
  CHECK(member(fp, lab.Q(), fx.M.coords(fx.K.parse("x1"))));

  Subspace Texp = fx.M.filtration_parity(0, 0);
  Vec x1 = fx.M.coords(fx.K.parse("x1"));
  for (auto& row : fx.M.parity_part(1).rows)
    CHECK(member(fp, Texp, fx.M.bracket_vec(x1, row)));
}

TEST_CASE("odd stabilizer M") {
  Fix fx2(3, 2);
  InvariantLab lab2(fx2.M);
  CHECK(lab2.report_M().verdict == Verdict::Match);
  CHECK(lab2.Mspace() == fx2.M.filtration_parity(0, 1));

  // n=1 inherits the Q degeneracy: x1 also lands in M
  Fix fx1(3, 1);
  InvariantLab lab1(fx1.M);
  auto rep = lab1.report_M();
  CHECK(rep.verdict == Verdict::Mismatch);
  CHECK(member(fx1.M.field(), lab1.Mspace(), fx1.M.coords(fx1.K.parse("x1"))));
}

TEST_CASE("filtration recovery") {
  for (int n : {1, 2}) {
    Fix fx(3, n);
    InvariantLab lab(fx.M);
    for (int i = 1; i <= fx.K.max_degree(); ++i) {
      auto rep = lab.filtration_recover(i);
      CHECK(rep.verdict == Verdict::Match);
    }
    // one step past the top: the recovered space is zero
    auto top = lab.filtration_recover(fx.K.max_degree() + 1);
    CHECK(top.verdict == Verdict::Match);
    CHECK(top.computed_dim == 0);
    CHECK_THROWS_AS(lab.filtration_recover(0), std::invalid_argument);
  }
}

TEST_CASE("irreducible quotient sweep") {
  // clean at n=2
  Fix fx2(3, 2);
  InvariantLab lab2(fx2.M);
  auto rep2 = lab2.unique_irreducible();
  CHECK(rep2.verdict == Verdict::Match);

  // the n=1 model carries an extra stable line (no raising operator exists,
  // its candidate being the square of an odd variable)
  Fix fx1(3, 1);
  InvariantLab lab1(fx1.M);
  auto rep1 = lab1.unique_irreducible();
  CHECK(rep1.verdict == Verdict::Mismatch);
  bool line = false;
  for (auto& w : rep1.witnesses) line = line || w.find("dim 1") != std::string::npos;
  CHECK(line);
}

TEST_CASE("generators close to the full algebra") {
  Fix fx(3, 1);
  InvariantLab lab(fx.M);
  const auto& gens = lab.generator_indices();
  CHECK_FALSE(gens.empty());
  std::vector<Vec> units;
  for (int g : gens) units.push_back(fx.M.unit(g));
  CHECK(lie_closure(fx.M, units).dim() == fx.M.dim());
}

TEST_CASE("exponential automorphisms") {
  Fix fx(3, 1);
  InvariantLab lab(fx.M);
  const auto& fp = fx.M.field();

  auto id = lab.make_exp_automorphism(fx.K.parse("0"));
  REQUIRE(id.has_value());
  CHECK(id->mat == mat_identity(fx.M.dim()));

  // an odd element is refused
  std::string why;
  CHECK_FALSE(lab.make_exp_automorphism(fx.K.parse("x1*x2*x3"), &why).has_value());
  CHECK(why.find("even") != std::string::npos);

  // index reaching the characteristic is refused with a diagnostic
  CHECK_FALSE(lab.make_exp_automorphism(fx.K.parse("x1^(2)*x2"), &why).has_value());
  CHECK(why.find("characteristic") != std::string::npos);

  // a non-certified generator is refused
  CHECK_FALSE(lab.make_exp_automorphism(fx.K.parse("x2"), &why).has_value());

  // the degree-2 generator works and its exponential moves a degree -1 vector
  auto phi = lab.make_exp_automorphism(fx.K.parse("x1^(2)*x3"));
  REQUIRE(phi.has_value());
  CHECK_FALSE(phi->mat == mat_identity(fx.M.dim()));
  Vec x2 = fx.M.coords(fx.K.parse("x2"));
  Vec img = mat_vec(fp, phi->mat, x2);
  CHECK(img != x2);

  // exhaustive bracket preservation, re-checked on all basis pairs
  for (std::size_t i = 0; i < fx.M.dim(); ++i)
    for (std::size_t j = 0; j < fx.M.dim(); ++j) {
      Vec lhs = mat_vec(fp, phi->mat, fx.M.bracket_vec(fx.M.unit(i), fx.M.unit(j)));
      Vec rhs = fx.M.bracket_vec(mat_vec(fp, phi->mat, fx.M.unit(i)),
                                 mat_vec(fp, phi->mat, fx.M.unit(j)));
      CHECK(lhs == rhs);
    }
}

TEST_CASE("generated family and the structural checks") {
  Fix fx(3, 1);
  InvariantLab lab(fx.M, NilMode::Certified, 42);
  auto family = lab.generate_family(12);
  CHECK(family.size() == 12);

  CHECK(lab.filtration_invariance(family).verdict == Verdict::Match);
  CHECK(lab.invariant_subspace_stability(family).verdict == Verdict::Match);
  CHECK(lab.rigidity(family).verdict == Verdict::Match);

  auto cls = lab.classification(family);
  CHECK(cls.verdict == Verdict::Match);
  CHECK(lab.classification_invariant() == 3);

  Fix fx2(3, 2);
  InvariantLab lab2(fx2.M, NilMode::Certified, 42);
  CHECK(lab2.classification_invariant() == 5);

  // n = 3 from component dimensions alone
  ContactAlgebra K3(3, 3, {1, 1, 1});
  CHECK(K3.component_basis(-2).size() + K3.component_basis(-1).size() == 7);
}

TEST_CASE("report serialization") {
  Fix fx(3, 1);
  InvariantLab lab(fx.M);
  auto rep = lab.report_T();
  auto j = rep.to_json();
  CHECK(j["schema"] == 1);
  CHECK(j["name"] == "T");
  CHECK(j["verdict"] == "match");
  CHECK(j.contains("paper_ref"));
  CHECK(rep.line().find("[ OK ]") == 0);
}
