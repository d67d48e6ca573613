#pragma once

// Contact-type Lie superalgebra on a truncated model with n even and n+1 odd
// variables. Elements are stored through their generating polynomial (the
// "potential"); the expansion
//
//   field(a) = hamiltonian(a) + (-1)^{p(a)} d_last(a) E + (E(a) - 2a) d_last
//
// is injective on the truncated space, and the bracket closes on potentials:
//
//   [field(a), field(b)] = field( field(a)(b) - (-1)^{p(a)} 2 d_last(a) b ).
//
// A potential of parity p(a) represents an element of parity p(a)+1; its
// principal degree is pdeg(a) - 2.

#include "kolab/witt.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace kolab {

class ContactAlgebra {
 public:
  ContactAlgebra(std::uint32_t p, int n, std::vector<int> t)
      : O_(Shape::contact(p, n, std::move(t))), W_(O_) {}

  const DividedPowerAlgebra& algebra() const { return O_; }
  const WittAlgebra& witt() const { return W_; }
  const PrimeField& field() const { return O_.field(); }
  const Shape& shape() const { return O_.shape(); }
  int last() const { return O_.shape().distinguished(); }
  std::size_t dim() const { return O_.dim(); }

  SuperDerivation expand(const Poly& a) const {
    auto pa = O_.parity(a);
    if (!pa) throw std::domain_error("expand: mixed-parity potential");
    return expand_signed(a, *pa);
  }

  // Linear extension over the parity split.
  SuperDerivation expand_linear(const Poly& a) const {
    SuperDerivation out;
    for (int q = 0; q < 2; ++q) {
      Poly part = parity_component(a, q);
      if (!part.is_zero()) out = W_.add(out, expand_signed(part, q));
    }
    return out;
  }

  Poly bracket(const Poly& a, const Poly& b) const {
    auto pa = O_.parity(a);
    auto pb = O_.parity(b);
    if (!pa || !pb) throw std::domain_error("bracket: mixed-parity potential");
    return bracket_signed(a, b, *pa);
  }

  // Bilinear extension: only the left argument's parity enters the formula.
  Poly bracket_bilinear(const Poly& a, const Poly& b) const {
    Poly out = O_.zero();
    for (int q = 0; q < 2; ++q) {
      Poly part = parity_component(a, q);
      if (!part.is_zero()) out = O_.add(out, bracket_signed(part, b, q));
    }
    return out;
  }

  // Closed form available when a omits the distinguished variable and has
  // standard degree 2: the bracket reduces to the Hamiltonian field action.
  Poly bracket_via_hamiltonian(const Poly& a, const Poly& b) const {
    if (O_.mentions(a, last()))
      throw std::domain_error("bracket_via_hamiltonian: a mentions the distinguished variable");
    auto deg = O_.sdeg_homogeneous(a);
    if (!deg || *deg != 2)
      throw std::domain_error("bracket_via_hamiltonian: a must have standard degree 2");
    auto pa = O_.parity(a);
    if (!pa) throw std::domain_error("bracket_via_hamiltonian: mixed-parity potential");
    return W_.apply(W_.hamiltonian_signed(a, *pa), b);
  }

  int potential_parity(const Monomial& mo) const { return (mo.parity() + 1) & 1; }

  std::optional<int> potential_parity(const Poly& a) const {
    auto pa = O_.parity(a);
    if (!pa) return std::nullopt;
    return (*pa + 1) & 1;
  }

  int degree(const Monomial& mo) const { return O_.pdeg(mo) - 2; }

  std::optional<int> degree(const Poly& a) const {
    auto d = O_.pdeg_homogeneous(a);
    if (!d) return std::nullopt;
    return *d - 2;
  }

  int max_degree() const {
    int top = 0;
    for (auto& mo : O_.basis()) top = std::max(top, O_.pdeg(mo));
    return top - 2;
  }

  int min_component_degree(const Poly& a) const {
    int lo = max_degree() + 1;
    for (auto& [mo, c] : a.terms) {
      (void)c;
      lo = std::min(lo, degree(mo));
    }
    return lo;
  }

  Poly degree_component(const Poly& a, int i) const {
    Poly out;
    for (auto& [mo, c] : a.terms)
      if (degree(mo) == i) out.terms.emplace(mo, c);
    return out;
  }

  Poly parity_component(const Poly& a, int q) const {
    Poly out;
    for (auto& [mo, c] : a.terms)
      if (mo.parity() == q) out.terms.emplace(mo, c);
    return out;
  }

  // Ordered basis of the graded component of the given degree.
  std::vector<Monomial> component_basis(int i) const {
    if (i < -2 || i > max_degree())
      throw std::out_of_range("component_basis: degree out of range");
    return O_.basis_filtered([&](const Monomial& mo) { return degree(mo) == i; });
  }

  // Ordered basis of the filtration space: all degrees >= i.
  std::vector<Monomial> filtration_basis(int i) const {
    if (i < -2) throw std::invalid_argument("filtration_basis: degree must be >= -2");
    return O_.basis_filtered([&](const Monomial& mo) { return degree(mo) >= i; });
  }

  std::string print(const Poly& a) const { return O_.print(a); }
  Poly parse(const std::string& s) const { return O_.parse(s); }

  // Structure constants of the bracket on the monomial potential basis.
  nlohmann::ordered_json structure_constants() const {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["p"] = field().p();
    j["n"] = shape().n;
    j["t"] = shape().heights;
    j["classification_invariant"] = 2 * shape().n + 1;
    std::vector<std::string> names;
    names.reserve(dim());
    for (auto& mo : O_.basis()) names.push_back(O_.print(mo));
    j["basis"] = names;
    nlohmann::ordered_json brackets = nlohmann::ordered_json::array();
    const auto& basis = O_.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      Poly mi = O_.monomial(basis[i]);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        Poly b = bracket(mi, O_.monomial(basis[k]));
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        auto v = O_.coords(b);
        for (std::size_t r = 0; r < v.size(); ++r)
          if (v[r] != 0) entries.push_back({r, v[r]});
        brackets.push_back({i, k, entries});
      }
    }
    j["brackets"] = brackets;
    return j;
  }

 private:
  SuperDerivation expand_signed(const Poly& a, int pa) const {
    SuperDerivation D = W_.hamiltonian_signed(a, pa);
    const int d = last();
    Poly dlast = O_.derive(d, a);
    if (!dlast.is_zero()) {
      const residue sgn = field().sign(pa);
      for (int i = 1; i <= 2 * shape().n; ++i)
        W_.accumulate(D, i, O_.scale(sgn, O_.multiply(dlast, O_.variable(i))));
    }
    Poly elast = O_.sub(W_.euler(a), O_.scale(2, a));
    W_.accumulate(D, d, elast);
    return D;
  }

  Poly bracket_signed(const Poly& a, const Poly& b, int pa) const {
    Poly c = W_.apply(expand_signed(a, pa), b);
    Poly d = O_.multiply(O_.derive(last(), a), b);
    return O_.sub(c, O_.scale(field().apply_sign(pa, 2), d));
  }

  DividedPowerAlgebra O_;
  WittAlgebra W_;
};

}  // namespace kolab
