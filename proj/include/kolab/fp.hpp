#pragma once

// Exact arithmetic in F_p for a small odd prime p, plus binomial
// coefficients mod p evaluated digit-by-digit in base p.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kolab {

using residue = std::uint32_t;

inline bool is_prime_u32(std::uint32_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

/// Arithmetic context for F_p. Residues stay fully reduced in [0, p).
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p <= 2 || !is_prime_u32(p))
      throw std::invalid_argument("PrimeField: modulus must be an odd prime > 2, got " +
                                  std::to_string(p));
  }

  std::uint32_t p() const { return p_; }

  residue of_int(std::int64_t x) const {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<residue>(r);
  }

  residue add(residue a, residue b) const {
    residue s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  residue sub(residue a, residue b) const { return a >= b ? a - b : a + p_ - b; }
  residue neg(residue a) const { return a == 0 ? 0 : p_ - a; }
  residue mul(residue a, residue b) const {
    return static_cast<residue>(static_cast<std::uint64_t>(a) * b % p_);
  }

  residue pow(residue a, std::uint64_t e) const {
    residue r = 1, base = a;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  residue inv(residue a) const {
    if (a == 0) throw std::domain_error("PrimeField: division by zero");
    return pow(a, p_ - 2);
  }

  // (-1)^e and its action on a residue.
  residue sign(int e) const { return (e & 1) ? p_ - 1 : 1; }
  residue apply_sign(int e, residue a) const { return (e & 1) ? neg(a) : a; }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::uint32_t p_;
};

/// Binomial coefficients mod p. C(a,b) factors over the base-p digits of a
/// and b; the digit table is a Pascal triangle below p.
class BinomTable {
 public:
  explicit BinomTable(const PrimeField& fp) : fp_(fp) {
    const std::uint32_t p = fp_.p();
    digit_.assign(p, std::vector<residue>(p, 0));
    for (std::uint32_t i = 0; i < p; ++i) {
      digit_[i][0] = 1;
      for (std::uint32_t j = 1; j <= i; ++j)
        digit_[i][j] = fp_.add(j <= i - 1 ? digit_[i - 1][j] : 0, digit_[i - 1][j - 1]);
    }
  }

  const PrimeField& field() const { return fp_; }

  residue binom(std::uint64_t a, std::uint64_t b) const {
    if (b > a) return 0;
    residue r = 1;
    const std::uint32_t p = fp_.p();
    while (a || b) {
      std::uint64_t ad = a % p, bd = b % p;
      if (bd > ad) return 0;
      r = fp_.mul(r, digit_[ad][bd]);
      a /= p;
      b /= p;
    }
    return r;
  }

 private:
  PrimeField fp_;
  std::vector<std::vector<residue>> digit_;
};

}  // namespace kolab
