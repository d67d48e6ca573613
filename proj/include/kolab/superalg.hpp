#pragma once

// Truncated divided power algebra in n even variables tensored with the
// exterior algebra in m odd variables, over F_p. Even exponents are capped at
// p^{t_i}-1 and products overflowing a cap vanish (their binomial coefficient
// is divisible by p anyway).
//
// Variables are numbered 1..n (even) and n+1..n+m (odd). When m = n+1 the last
// odd variable is distinguished and carries weight 2 in the principal grading.

#include "kolab/fp.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kolab {

struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct Shape {
  std::uint32_t p = 3;
  int n = 1;
  int m = 2;
  std::vector<int> heights;       // one per even variable, all >= 1
  std::vector<std::uint32_t> cap; // cap[i] = p^{heights[i]} - 1

  Shape(std::uint32_t p_, int n_, int m_, std::vector<int> t)
      : p(p_), n(n_), m(m_), heights(std::move(t)) {
    if (n < 0 || m < 0 || m > 30) throw std::invalid_argument("Shape: bad variable counts");
    if (static_cast<int>(heights.size()) != n)
      throw std::invalid_argument("Shape: need one truncation height per even variable");
    cap.reserve(n);
    for (int h : heights) {
      if (h < 1) throw std::invalid_argument("Shape: heights must be >= 1");
      std::uint64_t q = 1;
      for (int k = 0; k < h; ++k) {
        q *= p;
        if (q > (1u << 24)) throw std::invalid_argument("Shape: truncation too large");
      }
      cap.push_back(static_cast<std::uint32_t>(q - 1));
    }
  }

  static Shape contact(std::uint32_t p, int n, std::vector<int> t) {
    return Shape(p, n, n + 1, std::move(t));
  }

  int vars() const { return n + m; }
  bool has_distinguished() const { return m == n + 1; }
  int distinguished() const {
    if (!has_distinguished())
      throw std::domain_error("Shape: distinguished variable needs m == n+1");
    return n + m;
  }
  std::uint64_t dimension() const {
    std::uint64_t d = 1;
    for (auto c : cap) d *= c + 1;
    return d << m;
  }
  bool operator==(const Shape& o) const {
    return p == o.p && n == o.n && m == o.m && heights == o.heights;
  }
};

/// Basis element x^(alpha) x^u. The odd factor is a bit mask: bit k set means
/// the odd variable n+1+k occurs.
struct Monomial {
  std::vector<std::uint16_t> alpha;
  std::uint32_t umask = 0;

  int even_degree() const {
    int s = 0;
    for (auto a : alpha) s += a;
    return s;
  }
  int odd_count() const { return std::popcount(umask); }
  int sdeg() const { return even_degree() + odd_count(); }
  int parity() const { return odd_count() & 1; }
  bool is_one() const { return umask == 0 && even_degree() == 0; }
  bool operator==(const Monomial& o) const { return umask == o.umask && alpha == o.alpha; }
};

/// Degree-lex term order: total standard degree, then alpha, then the odd set.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = a.sdeg(), db = b.sdeg();
    if (da != db) return da < db;
    if (a.alpha != b.alpha)
      return std::lexicographical_compare(a.alpha.begin(), a.alpha.end(), b.alpha.begin(),
                                          b.alpha.end());
    return a.umask < b.umask;
  }
};

using TermMap = std::map<Monomial, residue, MonomialLess>;

/// F_p-linear combination of monomials; zero coefficients are never stored.
struct Poly {
  TermMap terms;
  bool is_zero() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }
  bool operator==(const Poly& o) const { return terms == o.terms; }
};

class DividedPowerAlgebra {
 public:
  explicit DividedPowerAlgebra(Shape shape)
      : shape_(std::move(shape)), fp_(shape_.p), binom_(fp_) {
    build_basis();
  }

  const Shape& shape() const { return shape_; }
  const PrimeField& field() const { return fp_; }
  const BinomTable& binomials() const { return binom_; }
  std::size_t dim() const { return basis_.size(); }

  Monomial unit_monomial() const {
    Monomial mo;
    mo.alpha.assign(shape_.n, 0);
    return mo;
  }

  Poly zero() const { return {}; }
  Poly one() const { return monomial(unit_monomial()); }

  Poly constant(residue c) const { return monomial(unit_monomial(), c); }

  Poly monomial(const Monomial& mo, residue c = 1) const {
    check_monomial(mo);
    Poly f;
    c = fp_.of_int(c);
    if (c != 0) f.terms.emplace(mo, c);
    return f;
  }

  // x_r for 1 <= r <= n+m
  Poly variable(int r) const {
    Monomial mo = unit_monomial();
    if (r < 1 || r > shape_.vars()) throw std::invalid_argument("variable index out of range");
    if (r <= shape_.n)
      mo.alpha[r - 1] = 1;
    else
      mo.umask = 1u << (r - shape_.n - 1);
    return monomial(mo);
  }

  // x^(k e_i)
  Poly divided_power(int i, std::uint32_t k) const {
    if (i < 1 || i > shape_.n) throw std::invalid_argument("divided_power: even index required");
    Monomial mo = unit_monomial();
    if (k > shape_.cap[i - 1]) throw std::invalid_argument("divided_power: exponent above cap");
    mo.alpha[i - 1] = static_cast<std::uint16_t>(k);
    return monomial(mo);
  }

  void accumulate(Poly& f, const Monomial& mo, residue c) const {
    if (c == 0) return;
    auto it = f.terms.find(mo);
    if (it == f.terms.end()) {
      f.terms.emplace(mo, c);
      return;
    }
    it->second = fp_.add(it->second, c);
    if (it->second == 0) f.terms.erase(it);
  }

  Poly add(const Poly& f, const Poly& g) const {
    Poly out = f;
    for (auto& [mo, c] : g.terms) accumulate(out, mo, c);
    return out;
  }

  Poly negate(const Poly& f) const {
    Poly out;
    for (auto& [mo, c] : f.terms) out.terms.emplace(mo, fp_.neg(c));
    return out;
  }

  Poly sub(const Poly& f, const Poly& g) const { return add(f, negate(g)); }

  Poly scale(residue c, const Poly& f) const {
    c = fp_.of_int(c);
    Poly out;
    if (c == 0) return out;
    for (auto& [mo, k] : f.terms) out.terms.emplace(mo, fp_.mul(c, k));
    return out;
  }

  // Product of basis monomials with divided-power coefficient and Koszul sign;
  // nullopt when the product vanishes.
  std::optional<std::pair<Monomial, residue>> mul_monomials(const Monomial& a,
                                                            const Monomial& b) const {
    if (a.umask & b.umask) return std::nullopt;
    Monomial r;
    r.alpha.resize(shape_.n);
    residue c = 1;
    for (int i = 0; i < shape_.n; ++i) {
      std::uint32_t s = static_cast<std::uint32_t>(a.alpha[i]) + b.alpha[i];
      if (s > shape_.cap[i]) return std::nullopt;
      c = fp_.mul(c, binom_.binom(s, a.alpha[i]));
      if (c == 0) return std::nullopt;
      r.alpha[i] = static_cast<std::uint16_t>(s);
    }
    // Interleaving sign: one inversion for each pair (a-bit, b-bit) with the
    // a-bit above the b-bit.
    int inv = 0;
    for (std::uint32_t vb = b.umask; vb; vb &= vb - 1) {
      int pos = std::countr_zero(vb);
      inv += std::popcount(a.umask >> (pos + 1));
    }
    r.umask = a.umask | b.umask;
    return std::make_pair(r, fp_.apply_sign(inv, c));
  }

  Poly multiply(const Poly& f, const Poly& g) const {
    Poly out;
    for (auto& [ma, ca] : f.terms)
      for (auto& [mb, cb] : g.terms) {
        auto prod = mul_monomials(ma, mb);
        if (!prod) continue;
        accumulate(out, prod->first, fp_.mul(fp_.mul(ca, cb), prod->second));
      }
    return out;
  }

  Poly derive(int r, const Poly& f) const {
    if (r < 1 || r > shape_.vars()) throw std::invalid_argument("derive: direction out of range");
    Poly out;
    if (r <= shape_.n) {
      for (auto& [mo, c] : f.terms) {
        if (mo.alpha[r - 1] == 0) continue;
        Monomial d = mo;
        --d.alpha[r - 1];
        accumulate(out, d, c);
      }
    } else {
      const int bit = r - shape_.n - 1;
      for (auto& [mo, c] : f.terms) {
        if (!((mo.umask >> bit) & 1u)) continue;
        Monomial d = mo;
        d.umask &= ~(1u << bit);
        int before = std::popcount(mo.umask & ((1u << bit) - 1));
        accumulate(out, d, fp_.apply_sign(before, c));
      }
    }
    return out;
  }

  int sdeg(const Monomial& mo) const { return mo.sdeg(); }

  // Principal degree: the distinguished odd variable counts twice.
  int pdeg(const Monomial& mo) const {
    const int d = shape_.distinguished();
    int extra = (mo.umask >> (d - shape_.n - 1)) & 1u;
    return mo.sdeg() + extra;
  }

  std::optional<int> parity(const Poly& f) const {
    std::optional<int> par;
    for (auto& [mo, c] : f.terms) {
      (void)c;
      int q = mo.parity();
      if (par && *par != q) return std::nullopt;
      par = q;
    }
    return f.is_zero() ? std::optional<int>(0) : par;
  }

  std::optional<int> sdeg_homogeneous(const Poly& f) const {
    std::optional<int> deg;
    for (auto& [mo, c] : f.terms) {
      (void)c;
      if (deg && *deg != mo.sdeg()) return std::nullopt;
      deg = mo.sdeg();
    }
    return deg;
  }

  std::optional<int> pdeg_homogeneous(const Poly& f) const {
    std::optional<int> deg;
    for (auto& [mo, c] : f.terms) {
      (void)c;
      if (deg && *deg != pdeg(mo)) return std::nullopt;
      deg = pdeg(mo);
    }
    return deg;
  }

  bool mentions(const Poly& f, int r) const {
    if (r < 1 || r > shape_.vars()) throw std::invalid_argument("mentions: index out of range");
    for (auto& [mo, c] : f.terms) {
      (void)c;
      if (r <= shape_.n) {
        if (mo.alpha[r - 1] != 0) return true;
      } else if ((mo.umask >> (r - shape_.n - 1)) & 1u) {
        return true;
      }
    }
    return false;
  }

  const std::vector<Monomial>& basis() const { return basis_; }

  std::vector<Monomial> basis_filtered(const std::function<bool(const Monomial&)>& pred) const {
    std::vector<Monomial> out;
    for (auto& mo : basis_)
      if (pred(mo)) out.push_back(mo);
    return out;
  }

  int index_of(const Monomial& mo) const {
    auto it = index_.find(mo);
    if (it == index_.end()) throw std::invalid_argument("index_of: monomial not in basis");
    return it->second;
  }

  std::vector<residue> coords(const Poly& f) const {
    std::vector<residue> v(basis_.size(), 0);
    for (auto& [mo, c] : f.terms) v[index_of(mo)] = c;
    return v;
  }

  Poly from_coords(const std::vector<residue>& v) const {
    if (v.size() != basis_.size()) throw std::invalid_argument("from_coords: length mismatch");
    Poly f;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] % fp_.p() != 0) f.terms.emplace(basis_[i], fp_.of_int(v[i]));
    return f;
  }

  // Re-validate a poly produced for another (compatible) shape, e.g. when
  // lifting to larger truncation heights.
  Poly embed(const Poly& f) const {
    for (auto& [mo, c] : f.terms) {
      (void)c;
      check_monomial(mo);
    }
    return f;
  }

  std::string print(const Monomial& mo) const {
    std::string out;
    bool first = true;
    auto piece = [&](const std::string& s) {
      if (!first) out += "*";
      out += s;
      first = false;
    };
    for (int i = 0; i < shape_.n; ++i) {
      if (mo.alpha[i] == 0) continue;
      if (mo.alpha[i] == 1)
        piece("x" + std::to_string(i + 1));
      else
        piece("x" + std::to_string(i + 1) + "^(" + std::to_string(mo.alpha[i]) + ")");
    }
    for (int b = 0; b < shape_.m; ++b)
      if ((mo.umask >> b) & 1u) piece("x" + std::to_string(shape_.n + 1 + b));
    return first ? "1" : out;
  }

  std::string print(const Poly& f) const {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto& [mo, c] : f.terms) {
      if (!first) out += " + ";
      first = false;
      std::string ms = print(mo);
      if (ms == "1")
        out += std::to_string(c);
      else if (c == 1)
        out += ms;
      else
        out += std::to_string(c) + "*" + ms;
    }
    return out;
  }

  // Grammar:  poly := [+-] term { (+|-) term }
  //           term := factor { '*' factor }
  //           factor := integer | xK | xK^(E) | xK^E
  Poly parse(const std::string& s) const {
    std::size_t pos = 0;
    auto skip = [&] {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    };
    auto read_uint = [&]() -> std::uint64_t {
      if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
        throw parse_error("expected a number at position " + std::to_string(pos));
      std::uint64_t v = 0;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        v = v * 10 + (s[pos] - '0');
        if (v > (1ull << 40)) throw parse_error("number too large");
        ++pos;
      }
      return v;
    };
    auto read_factor = [&]() -> Poly {
      skip();
      if (pos >= s.size()) throw parse_error("unexpected end of input");
      if (std::isdigit(static_cast<unsigned char>(s[pos])))
        return constant(fp_.of_int(static_cast<std::int64_t>(read_uint() % fp_.p())));
      if (s[pos] == 'x') {
        ++pos;
        std::uint64_t idx = read_uint();
        if (idx < 1 || idx > static_cast<std::uint64_t>(shape_.vars()))
          throw parse_error("variable x" + std::to_string(idx) + " out of range (1.." +
                            std::to_string(shape_.vars()) + ")");
        std::uint64_t exp = 1;
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          bool paren = pos < s.size() && s[pos] == '(';
          if (paren) ++pos;
          exp = read_uint();
          if (paren) {
            if (pos >= s.size() || s[pos] != ')') throw parse_error("missing ')' in exponent");
            ++pos;
          }
        }
        int r = static_cast<int>(idx);
        if (r <= shape_.n) {
          if (exp > shape_.cap[r - 1])
            throw parse_error("exponent " + std::to_string(exp) + " above truncation cap for x" +
                              std::to_string(r));
          return divided_power(r, static_cast<std::uint32_t>(exp));
        }
        if (exp != 1) throw parse_error("odd variables take no exponent");
        return variable(r);
      }
      throw parse_error(std::string("unexpected character '") + s[pos] + "'");
    };

    Poly out = zero();
    skip();
    if (pos >= s.size()) throw parse_error("empty input");
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
      negative = s[pos] == '-';
      ++pos;
    }
    while (true) {
      Poly term = read_factor();
      skip();
      while (pos < s.size() && s[pos] == '*') {
        ++pos;
        term = multiply(term, read_factor());
        skip();
      }
      out = add(out, negative ? negate(term) : term);
      if (pos >= s.size()) break;
      if (s[pos] == '+' || s[pos] == '-') {
        negative = s[pos] == '-';
        ++pos;
      } else {
        throw parse_error(std::string("unexpected character '") + s[pos] + "'");
      }
    }
    return out;
  }

 private:
  void check_monomial(const Monomial& mo) const {
    if (static_cast<int>(mo.alpha.size()) != shape_.n)
      throw std::invalid_argument("monomial has wrong number of even exponents");
    for (int i = 0; i < shape_.n; ++i)
      if (mo.alpha[i] > shape_.cap[i])
        throw std::invalid_argument("monomial exponent above truncation cap");
    if (shape_.m < 32 && (mo.umask >> shape_.m))
      throw std::invalid_argument("monomial mentions an odd variable out of range");
  }

  void build_basis() {
    basis_.clear();
    std::vector<std::uint16_t> alpha(shape_.n, 0);
    while (true) {
      for (std::uint32_t um = 0; um < (1u << shape_.m); ++um) {
        Monomial mo;
        mo.alpha = alpha;
        mo.umask = um;
        basis_.push_back(std::move(mo));
      }
      int i = 0;
      for (; i < shape_.n; ++i) {
        if (alpha[i] < shape_.cap[i]) {
          ++alpha[i];
          break;
        }
        alpha[i] = 0;
      }
      if (i == shape_.n) break;
    }
    std::sort(basis_.begin(), basis_.end(), [](const Monomial& a, const Monomial& b) {
      return MonomialLess{}(a, b);
    });
    index_.clear();
    for (std::size_t i = 0; i < basis_.size(); ++i)
      index_.emplace(basis_[i], static_cast<int>(i));
  }

  Shape shape_;
  PrimeField fp_;
  BinomTable binom_;
  std::vector<Monomial> basis_;
  std::map<Monomial, int, MonomialLess> index_;
};

}  // namespace kolab
