#pragma once

// Exact linear and Lie-theoretic algebra over F_p on the truncated contact
// model: echelonized subspaces, sparse structure constants, ad matrices,
// bracket stabilizers, Lie closure, module spinning, strict triangulation,
// and the ad-nilpotency oracle with machine-checkable verdicts.

#include "kolab/ko.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kolab {

using Vec = std::vector<residue>;
using Matrix = std::vector<Vec>;  // row major, square unless noted

// ---------------------------------------------------------------- matrices

inline Matrix mat_identity(std::size_t d) {
  Matrix M(d, Vec(d, 0));
  for (std::size_t i = 0; i < d; ++i) M[i][i] = 1;
  return M;
}

inline Matrix mat_zero(std::size_t d) { return Matrix(d, Vec(d, 0)); }

inline bool mat_is_zero(const Matrix& A) {
  for (auto& row : A)
    for (auto x : row)
      if (x) return false;
  return true;
}

inline Vec mat_vec(const PrimeField& fp, const Matrix& A, const Vec& v) {
  Vec out(A.size(), 0);
  for (std::size_t i = 0; i < A.size(); ++i) {
    std::uint64_t acc = 0;
    const Vec& row = A[i];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] && v[j]) {
        acc += static_cast<std::uint64_t>(row[j]) * v[j];
        if (acc >= (1ull << 62)) acc %= fp.p();
      }
    }
    out[i] = static_cast<residue>(acc % fp.p());
  }
  return out;
}

inline Matrix mat_mul(const PrimeField& fp, const Matrix& A, const Matrix& B) {
  const std::size_t n = A.size(), m = B[0].size(), k = B.size();
  Matrix C(n, Vec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      residue a = A[i][l];
      if (!a) continue;
      const Vec& brow = B[l];
      Vec& crow = C[i];
      for (std::size_t j = 0; j < m; ++j)
        if (brow[j]) crow[j] = fp.add(crow[j], fp.mul(a, brow[j]));
    }
  return C;
}

inline Matrix mat_add(const PrimeField& fp, const Matrix& A, const Matrix& B) {
  Matrix C = A;
  for (std::size_t i = 0; i < C.size(); ++i)
    for (std::size_t j = 0; j < C[i].size(); ++j) C[i][j] = fp.add(C[i][j], B[i][j]);
  return C;
}

inline Matrix mat_scale(const PrimeField& fp, residue c, const Matrix& A) {
  Matrix C = A;
  for (auto& row : C)
    for (auto& x : row) x = fp.mul(c, x);
  return C;
}

inline bool mat_nilpotent(const PrimeField& fp, const Matrix& A) {
  Matrix P = A;
  std::size_t e = 1;
  while (true) {
    if (mat_is_zero(P)) return true;
    if (e >= A.size()) return false;
    P = mat_mul(fp, P, P);
    e *= 2;
  }
}

// ---------------------------------------------------------------- subspaces

struct Subspace {
  std::size_t ambient = 0;
  std::vector<Vec> rows;  // reduced row echelon, sorted by pivot
  std::vector<int> pivots;
  bool coordinate_like = false;  // every row is a unit vector
  std::size_t dim() const { return rows.size(); }
  bool operator==(const Subspace& o) const { return ambient == o.ambient && rows == o.rows; }
};

/// Incremental reduced-row-echelon accumulator.
class RrefBuilder {
 public:
  RrefBuilder(const PrimeField& fp, std::size_t ambient) : fp_(&fp), ambient_(ambient) {}

  Vec reduce(Vec v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      residue c = v[pivots_[r]];
      if (!c) continue;
      const Vec& row = rows_[r];
      for (std::size_t k = pivots_[r]; k < ambient_; ++k)
        if (row[k]) v[k] = fp_->sub(v[k], fp_->mul(c, row[k]));
    }
    return v;
  }

  // Returns true when the vector enlarged the span.
  bool insert(Vec v) {
    v = reduce(std::move(v));
    std::size_t piv = 0;
    while (piv < ambient_ && v[piv] == 0) ++piv;
    if (piv == ambient_) return false;
    residue inv = fp_->inv(v[piv]);
    for (auto& x : v) x = fp_->mul(x, inv);
    // clear the new pivot column from existing rows
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      residue c = rows_[r][piv];
      if (!c) continue;
      for (std::size_t k = piv; k < ambient_; ++k)
        if (v[k]) rows_[r][k] = fp_->sub(rows_[r][k], fp_->mul(c, v[k]));
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), static_cast<int>(piv));
    std::size_t at = static_cast<std::size_t>(pos - pivots_.begin());
    pivots_.insert(pos, static_cast<int>(piv));
    rows_.insert(rows_.begin() + at, std::move(v));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  const std::vector<Vec>& rows() const { return rows_; }

  Subspace build() const {
    Subspace S;
    S.ambient = ambient_;
    S.rows = rows_;
    S.pivots = pivots_;
    S.coordinate_like = true;
    for (auto& row : S.rows) {
      int nnz = 0;
      for (auto x : row)
        if (x && ++nnz > 1) break;
      if (nnz != 1) {
        S.coordinate_like = false;
        break;
      }
    }
    return S;
  }

 private:
  const PrimeField* fp_;
  std::size_t ambient_;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;
};

inline Subspace echelonize(const PrimeField& fp, std::size_t ambient,
                           const std::vector<Vec>& vectors) {
  RrefBuilder b(fp, ambient);
  for (auto& v : vectors) b.insert(v);
  return b.build();
}

inline Vec reduce_by(const PrimeField& fp, const Subspace& S, Vec v) {
  if (v.size() != S.ambient) throw std::invalid_argument("reduce_by: ambient mismatch");
  if (S.coordinate_like) {
    for (int p : S.pivots) v[p] = 0;
    return v;
  }
  for (std::size_t r = 0; r < S.rows.size(); ++r) {
    residue c = v[S.pivots[r]];
    if (!c) continue;
    const Vec& row = S.rows[r];
    for (std::size_t k = S.pivots[r]; k < S.ambient; ++k)
      if (row[k]) v[k] = fp.sub(v[k], fp.mul(c, row[k]));
  }
  return v;
}

inline bool member(const PrimeField& fp, const Subspace& S, Vec v) {
  v = reduce_by(fp, S, std::move(v));
  for (auto x : v)
    if (x) return false;
  return true;
}

inline bool space_contains(const PrimeField& fp, const Subspace& big, const Subspace& small) {
  for (auto& row : small.rows)
    if (!member(fp, big, row)) return false;
  return true;
}

inline Subspace space_sum(const PrimeField& fp, const Subspace& S, const Subspace& T) {
  if (S.ambient != T.ambient) throw std::invalid_argument("space_sum: ambient mismatch");
  RrefBuilder b(fp, S.ambient);
  for (auto& r : S.rows) b.insert(r);
  for (auto& r : T.rows) b.insert(r);
  return b.build();
}

// Zassenhaus: echelonize [v|v] for v in S and [w|0] for w in T; rows whose
// left half vanished carry a basis of the intersection on the right.
inline Subspace space_intersect(const PrimeField& fp, const Subspace& S, const Subspace& T) {
  if (S.ambient != T.ambient) throw std::invalid_argument("space_intersect: ambient mismatch");
  const std::size_t d = S.ambient;
  RrefBuilder b(fp, 2 * d);
  for (auto& v : S.rows) {
    Vec w(2 * d, 0);
    std::copy(v.begin(), v.end(), w.begin());
    std::copy(v.begin(), v.end(), w.begin() + d);
    b.insert(std::move(w));
  }
  for (auto& v : T.rows) {
    Vec w(2 * d, 0);
    std::copy(v.begin(), v.end(), w.begin());
    b.insert(std::move(w));
  }
  RrefBuilder inter(fp, d);
  for (auto& row : b.rows()) {
    bool left_zero = true;
    for (std::size_t k = 0; k < d; ++k)
      if (row[k]) {
        left_zero = false;
        break;
      }
    if (!left_zero) continue;
    inter.insert(Vec(row.begin() + d, row.end()));
  }
  return inter.build();
}

// Kernel of the linear system given by constraint rows over `unknowns`.
inline Subspace nullspace(const PrimeField& fp, const std::vector<Vec>& constraints,
                          std::size_t unknowns) {
  RrefBuilder b(fp, unknowns);
  for (auto& row : constraints) b.insert(row);
  std::vector<bool> is_pivot(unknowns, false);
  const auto& rows = b.rows();
  std::vector<int> pivots;
  for (auto& row : rows) {
    std::size_t piv = 0;
    while (piv < unknowns && row[piv] == 0) ++piv;
    pivots.push_back(static_cast<int>(piv));
    is_pivot[piv] = true;
  }
  RrefBuilder out(fp, unknowns);
  for (std::size_t f = 0; f < unknowns; ++f) {
    if (is_pivot[f]) continue;
    Vec v(unknowns, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < rows.size(); ++r)
      v[pivots[r]] = fp.neg(rows[r][f]);
    out.insert(std::move(v));
  }
  return out.build();
}

// ------------------------------------------------------ contact coordinates

/// Coordinate view of a contact model: the sparse bracket table on the
/// monomial potential basis and everything derived from it.
class ContactModel {
 public:
  using SparseVec = std::vector<std::pair<int, residue>>;

  explicit ContactModel(const ContactAlgebra& K) : K_(&K), fp_(&K.field()) { build(); }

  const ContactAlgebra& contact() const { return *K_; }
  const PrimeField& field() const { return *fp_; }
  std::size_t dim() const { return d_; }

  const SparseVec& table(int i, int j) const { return table_[i * d_ + j]; }

  int basis_parity(int i) const { return par_[i]; }
  int basis_degree(int i) const { return deg_[i]; }

  Vec coords(const Poly& a) const { return K_->algebra().coords(a); }
  Poly poly(const Vec& v) const { return K_->algebra().from_coords(v); }
  std::string print(const Vec& v) const { return K_->algebra().print(poly(v)); }

  Vec unit(int i) const {
    Vec v(d_, 0);
    v[i] = 1;
    return v;
  }

  Vec bracket_vec(const Vec& u, const Vec& v) const {
    Vec out(d_, 0);
    for (std::size_t i = 0; i < d_; ++i) {
      if (!u[i]) continue;
      for (std::size_t j = 0; j < d_; ++j) {
        if (!v[j]) continue;
        residue uv = fp_->mul(u[i], v[j]);
        for (auto& [k, c] : table(static_cast<int>(i), static_cast<int>(j)))
          out[k] = fp_->add(out[k], fp_->mul(uv, c));
      }
    }
    return out;
  }

  // Matrix of x -> [y, x].
  Matrix ad_matrix(const Vec& y) const {
    Matrix M(d_, Vec(d_, 0));
    for (std::size_t i = 0; i < d_; ++i) {
      if (!y[i]) continue;
      for (std::size_t j = 0; j < d_; ++j)
        for (auto& [k, c] : table(static_cast<int>(i), static_cast<int>(j)))
          M[k][j] = fp_->add(M[k][j], fp_->mul(y[i], c));
    }
    return M;
  }

  // Matrix of x -> [x, v].
  Matrix right_bracket_matrix(const Vec& v) const {
    Matrix M(d_, Vec(d_, 0));
    for (std::size_t j = 0; j < d_; ++j) {
      if (!v[j]) continue;
      for (std::size_t i = 0; i < d_; ++i)
        for (auto& [k, c] : table(static_cast<int>(i), static_cast<int>(j)))
          M[k][i] = fp_->add(M[k][i], fp_->mul(v[j], c));
    }
    return M;
  }

  Subspace predicate_space(const std::function<bool(int)>& pred) const {
    RrefBuilder b(*fp_, d_);
    for (std::size_t i = 0; i < d_; ++i)
      if (pred(static_cast<int>(i))) b.insert(unit(static_cast<int>(i)));
    return b.build();
  }

  Subspace whole() const {
    return predicate_space([](int) { return true; });
  }
  Subspace zero_space() const {
    Subspace S;
    S.ambient = d_;
    return S;
  }
  Subspace filtration(int i) const {
    if (i < -2) throw std::invalid_argument("filtration: degree must be >= -2");
    return predicate_space([&](int k) { return deg_[k] >= i; });
  }
  Subspace component(int i) const {
    return predicate_space([&](int k) { return deg_[k] == i; });
  }
  Subspace parity_part(int q) const {
    return predicate_space([&](int k) { return par_[k] == q; });
  }
  Subspace filtration_parity(int i, int q) const {
    return predicate_space([&](int k) { return deg_[k] >= i && par_[k] == q; });
  }

 private:
  void build() {
    d_ = K_->dim();
    const auto& O = K_->algebra();
    par_.resize(d_);
    deg_.resize(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      par_[i] = K_->potential_parity(O.basis()[i]);
      deg_[i] = K_->degree(O.basis()[i]);
    }
    table_.assign(d_ * d_, {});
    for (std::size_t i = 0; i < d_; ++i) {
      Poly mi = O.monomial(O.basis()[i]);
      for (std::size_t j = i; j < d_; ++j) {
        Poly b = K_->bracket(mi, O.monomial(O.basis()[j]));
        SparseVec sv;
        for (auto& [mo, c] : b.terms) sv.emplace_back(O.index_of(mo), c);
        if (j != i) {
          // [m_j, m_i] = -(-1)^{p_i p_j} [m_i, m_j]
          SparseVec back;
          back.reserve(sv.size());
          for (auto& [k, c] : sv)
            back.emplace_back(k, fp_->neg(fp_->apply_sign(par_[i] * par_[j], c)));
          table_[j * d_ + i] = std::move(back);
        }
        table_[i * d_ + j] = std::move(sv);
      }
    }
  }

  const ContactAlgebra* K_;
  const PrimeField* fp_;
  std::size_t d_ = 0;
  std::vector<int> par_, deg_;
  std::vector<SparseVec> table_;
};

// ------------------------------------------------------------- operations

/// Smallest bracket-closed subspace containing the generators.
inline Subspace lie_closure(const ContactModel& M, const std::vector<Vec>& generators) {
  RrefBuilder b(M.field(), M.dim());
  std::vector<Vec> pool, frontier;
  for (auto& g : generators)
    if (b.insert(g)) {
      pool.push_back(g);
      frontier.push_back(g);
    }
  while (!frontier.empty()) {
    std::vector<Vec> next;
    std::size_t pool_end = pool.size();
    for (auto& v : frontier)
      for (std::size_t w = 0; w < pool_end; ++w) {
        Vec c = M.bracket_vec(v, pool[w]);
        if (b.insert(c)) {
          pool.push_back(c);
          next.push_back(std::move(c));
        }
      }
    frontier = std::move(next);
  }
  return b.build();
}

/// { y in A : [y, n] in T for every n in a basis of N }
inline Subspace bracket_stabilizer(const ContactModel& M, const Subspace& A, const Subspace& N,
                                   const Subspace& T) {
  if (A.ambient != M.dim() || N.ambient != M.dim() || T.ambient != M.dim())
    throw std::invalid_argument("bracket_stabilizer: ambient mismatch");
  const auto& fp = M.field();
  const std::size_t r = A.dim();
  if (r == 0) return A;
  RrefBuilder constraints(fp, r);
  bool saturated = false;
  for (auto& nrow : N.rows) {
    if (saturated) break;
    std::vector<Vec> w(r);
    for (std::size_t a = 0; a < r; ++a)
      w[a] = reduce_by(fp, T, M.bracket_vec(A.rows[a], nrow));
    for (std::size_t c = 0; c < M.dim(); ++c) {
      Vec row(r, 0);
      bool nz = false;
      for (std::size_t a = 0; a < r; ++a) {
        row[a] = w[a][c];
        nz = nz || row[a];
      }
      if (nz) constraints.insert(std::move(row));
      if (constraints.rank() == r) {
        saturated = true;
        break;
      }
    }
  }
  Subspace sol = nullspace(fp, constraints.rows(), r);
  std::vector<Vec> out;
  for (auto& c : sol.rows) {
    Vec y(M.dim(), 0);
    for (std::size_t a = 0; a < r; ++a) {
      if (!c[a]) continue;
      for (std::size_t k = 0; k < M.dim(); ++k)
        y[k] = fp.add(y[k], fp.mul(c[a], A.rows[a][k]));
    }
    out.push_back(std::move(y));
  }
  return echelonize(fp, M.dim(), out);
}

inline Subspace normalizer(const ContactModel& M, const Subspace& A, const Subspace& N) {
  return bracket_stabilizer(M, A, N, N);
}

/// Smallest action-stable subspace of the quotient by `mod_out` containing
/// `start`; vectors are kept in canonical reduced form. The well-definedness
/// check can be skipped by a caller that has already performed it.
inline Subspace spin_submodule(const ContactModel& M, const std::vector<Vec>& action,
                               const Subspace& mod_out, const Vec& start,
                               bool check_action = true) {
  const auto& fp = M.field();
  if (check_action)
    for (auto& y : action)
      for (auto& q : mod_out.rows)
        if (!member(fp, mod_out, M.bracket_vec(y, q)))
          throw std::invalid_argument("spin_submodule: action does not preserve the quotient");
  RrefBuilder b(fp, M.dim());
  std::vector<Vec> frontier;
  Vec s = reduce_by(fp, mod_out, start);
  if (b.insert(s)) frontier.push_back(std::move(s));
  while (!frontier.empty()) {
    std::vector<Vec> next;
    for (auto& v : frontier)
      for (auto& y : action) {
        Vec w = reduce_by(fp, mod_out, M.bracket_vec(y, v));
        if (b.insert(w)) next.push_back(std::move(w));
      }
    frontier = std::move(next);
  }
  return b.build();
}

struct TriangulationResult {
  bool ok = false;
  std::vector<Subspace> flag;  // 0 = V_0 c V_1 c ... c V_m = V
  int offender = -1;           // non-nilpotent operator index when !ok
  std::string diagnostic;
};

/// Builds a flag with every operator mapping V_i into V_{i-1} by iterated
/// common-kernel extraction. The operator span must be closed under the
/// super-commutator (checked); a non-nilpotent operator aborts the chain.
inline TriangulationResult strict_triangulation(const PrimeField& fp,
                                                const std::vector<Matrix>& ops,
                                                const std::vector<int>& parities,
                                                std::size_t dim) {
  if (ops.size() != parities.size())
    throw std::invalid_argument("strict_triangulation: one parity per operator");
  // Lie-super subset condition on the span
  auto flatten = [&](const Matrix& A) {
    Vec v;
    v.reserve(dim * dim);
    for (auto& row : A) v.insert(v.end(), row.begin(), row.end());
    return v;
  };
  RrefBuilder span(fp, dim * dim);
  for (auto& A : ops) span.insert(flatten(A));
  Subspace span_space = span.build();
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i; j < ops.size(); ++j) {
      Matrix C = mat_add(fp, mat_mul(fp, ops[i], ops[j]),
                         mat_scale(fp, fp.neg(fp.sign(parities[i] * parities[j])),
                                   mat_mul(fp, ops[j], ops[i])));
      if (!member(fp, span_space, flatten(C)))
        throw std::invalid_argument(
            "strict_triangulation: operator span not closed under the super-commutator");
    }

  TriangulationResult res;
  Subspace V;
  V.ambient = dim;
  res.flag.push_back(V);
  while (V.dim() < dim) {
    // K = { v : op v in V for all ops }
    RrefBuilder constraints(fp, dim);
    for (auto& A : ops) {
      // columns of A reduced by V, transposed into constraint rows
      std::vector<Vec> cols(dim);
      for (std::size_t j = 0; j < dim; ++j) {
        Vec col(dim, 0);
        for (std::size_t i = 0; i < dim; ++i) col[i] = A[i][j];
        cols[j] = reduce_by(fp, V, std::move(col));
      }
      for (std::size_t c = 0; c < dim; ++c) {
        Vec row(dim, 0);
        bool nz = false;
        for (std::size_t j = 0; j < dim; ++j) {
          row[j] = cols[j][c];
          nz = nz || row[j];
        }
        if (nz) constraints.insert(std::move(row));
      }
    }
    Subspace K = nullspace(fp, constraints.rows(), dim);
    if (K.dim() <= V.dim()) {
      for (std::size_t i = 0; i < ops.size(); ++i)
        if (!mat_nilpotent(fp, ops[i])) {
          res.offender = static_cast<int>(i);
          res.diagnostic = "operator " + std::to_string(i) + " is not nilpotent";
          return res;
        }
      res.diagnostic = "no common-kernel progress";
      return res;
    }
    V = K;
    res.flag.push_back(V);
  }
  res.ok = true;
  return res;
}

// ------------------------------------------------------- nilpotency oracle

enum class NilKind { NilpotentStable, NotNilpotent, Inconclusive };

struct HeightProbe {
  std::vector<int> heights;
  int index = 0;        // chain length when every chain died
  bool capped = false;  // some chain survived to the cap
  std::string witness;  // basis potential starting the extremal chain
};

struct NilVerdict {
  NilKind kind = NilKind::Inconclusive;
  int index = 0;
  bool structural = false;
  std::string element;
  std::string eigen_witness;
  residue eigen_lambda = 0;
  std::vector<HeightProbe> probes;
  std::string diagnostic;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["verdict"] = kind == NilKind::NilpotentStable  ? "nilpotent_stable"
                   : kind == NilKind::NotNilpotent   ? "not_nilpotent"
                                                     : "inconclusive";
    j["element"] = element;
    if (kind == NilKind::NilpotentStable) {
      j["index"] = index;
      j["structural"] = structural;
    }
    if (!eigen_witness.empty()) {
      j["witness"] = {{"type", "eigen"}, {"z", eigen_witness}, {"lambda", eigen_lambda}};
    }
    nlohmann::ordered_json probes_json = nlohmann::ordered_json::array();
    for (auto& pr : probes)
      probes_json.push_back({{"t", pr.heights},
                             {"index", pr.index},
                             {"capped", pr.capped},
                             {"chain_start", pr.witness}});
    if (!probes_json.empty()) j["probes"] = probes_json;
    if (!diagnostic.empty()) j["diagnostic"] = diagnostic;
    return j;
  }
};

struct NilPolicy {
  std::vector<std::vector<int>> heights;  // default: {t, t + (1,...,1)}
  int max_index = 0;                      // default: 4p
  bool raw = false;                       // single-height matrix semantics
};

struct AdChain {
  bool all_died = true;
  int index = 0;
  std::string witness;
};

// Longest (ad y)-chain over the basis: index of ad y as a nilpotent map when
// every chain dies within the cap.
inline AdChain ad_chain_index(const ContactAlgebra& K, const Poly& y, int cap) {
  AdChain out;
  const auto& O = K.algebra();
  for (auto& mo : O.basis()) {
    Poly v = O.monomial(mo);
    int k = 0;
    bool died = false;
    while (k < cap) {
      v = K.bracket_bilinear(y, v);
      ++k;
      if (v.is_zero()) {
        died = true;
        break;
      }
    }
    if (!died) {
      out.all_died = false;
      out.witness = O.print(mo);
      out.index = cap;
      return out;
    }
    if (k > out.index) {
      out.index = k;
      out.witness = O.print(mo);
    }
  }
  return out;
}

inline std::vector<int> bump_heights(const std::vector<int>& t) {
  std::vector<int> out = t;
  for (auto& h : out) ++h;
  return out;
}

inline NilVerdict nilpotency_oracle(std::uint32_t p, int n, const std::vector<int>& t,
                                    const Poly& y, NilPolicy policy = {}) {
  if (policy.heights.empty()) {
    policy.heights = {t};
    if (!policy.raw) policy.heights.push_back(bump_heights(t));
  }
  if (policy.max_index <= 0) policy.max_index = 4 * static_cast<int>(p);

  ContactAlgebra base(p, n, t);
  NilVerdict v;
  v.element = base.print(y);

  if (y.is_zero()) {
    v.kind = NilKind::NilpotentStable;
    v.index = 1;
    v.diagnostic = "zero element";
    return v;
  }

  if (policy.raw) {
    const int cap = static_cast<int>(base.dim());
    AdChain c = ad_chain_index(base, y, cap);
    HeightProbe pr{t, c.index, !c.all_died, c.witness};
    v.probes.push_back(pr);
    if (c.all_died) {
      v.kind = NilKind::NilpotentStable;
      v.index = c.index;
    } else {
      v.kind = NilKind::NotNilpotent;
      v.diagnostic = "a chain survives dim steps at the model height";
    }
    return v;
  }

  // (i) structural rule: every graded component in degree >= 1
  if (base.min_component_degree(y) >= 1) {
    const auto& top = policy.heights.back();
    ContactAlgebra big(p, n, top);
    big.algebra().embed(y);
    AdChain c = ad_chain_index(big, y, static_cast<int>(big.dim()));
    v.kind = NilKind::NilpotentStable;
    v.structural = true;
    v.index = c.index;
    v.probes.push_back({top, c.index, false, c.witness});
    v.diagnostic = "all graded components in degree >= 1";
    return v;
  }

  // (ii) eigen-witness scan over basis potentials, verified at every height
  for (auto& mo : base.algebra().basis()) {
    Poly z = base.algebra().monomial(mo);
    Poly b = base.bracket_bilinear(y, z);
    if (b.size() != 1) continue;
    auto& [bm, bc] = *b.terms.begin();
    if (!(bm == mo)) continue;
    bool stable = true;
    for (auto& h : policy.heights) {
      ContactAlgebra K(p, n, h);
      K.algebra().embed(y);
      Poly bh = K.bracket_bilinear(y, K.algebra().monomial(mo));
      if (!(bh == K.algebra().scale(bc, K.algebra().monomial(mo)))) {
        stable = false;
        break;
      }
    }
    if (!stable) continue;
    v.kind = NilKind::NotNilpotent;
    v.eigen_witness = base.algebra().print(mo);
    v.eigen_lambda = bc;
    v.diagnostic = "eigen-witness with nonzero eigenvalue";
    return v;
  }

  // (iii) chain indices across heights
  bool any_capped = false;
  for (auto& h : policy.heights) {
    ContactAlgebra K(p, n, h);
    K.algebra().embed(y);
    const int cap = std::min<int>(policy.max_index, static_cast<int>(K.dim()));
    AdChain c = ad_chain_index(K, y, cap);
    bool capped = !c.all_died;
    any_capped = any_capped || capped;
    v.probes.push_back({h, c.index, capped, c.witness});
    if (capped && cap == static_cast<int>(K.dim())) {
      v.kind = NilKind::NotNilpotent;
      v.diagnostic = "a chain survives dim steps at height " + std::to_string(h[0]);
      return v;
    }
  }
  bool stable = true, growing = true;
  for (std::size_t i = 1; i < v.probes.size(); ++i) {
    const auto& a = v.probes[i - 1];
    const auto& b = v.probes[i];
    int ia = a.capped ? policy.max_index + 1 : a.index;
    int ib = b.capped ? policy.max_index + 1 : b.index;
    if (a.capped || b.capped || ia != ib) stable = false;
    if (ib <= ia) growing = false;
  }
  if (v.probes.size() < 2) growing = false;
  if (stable && !any_capped) {
    v.kind = NilKind::NilpotentStable;
    v.index = v.probes.front().index;
    return v;
  }
  if (growing) {
    v.kind = NilKind::NotNilpotent;
    v.diagnostic = "nilpotency index grows with the truncation height";
    return v;
  }
  v.kind = NilKind::Inconclusive;
  v.diagnostic = "height probes neither stabilize nor grow monotonically";
  return v;
}

// Re-verify a verdict from its own witness data.
inline bool reverify_verdict(const NilVerdict& v, std::uint32_t p, int n,
                             const std::vector<int>& t, const Poly& y) {
  if (v.kind == NilKind::Inconclusive) return true;
  if (v.kind == NilKind::NotNilpotent) {
    if (!v.eigen_witness.empty()) {
      ContactAlgebra base(p, n, t);
      Poly z = base.parse(v.eigen_witness);
      return base.bracket_bilinear(y, z) == base.algebra().scale(v.eigen_lambda, z) &&
             v.eigen_lambda != 0;
    }
    // growing-index style: each probe's extremal chain is nonzero for
    // index-1 steps (or all recorded steps when capped)
    for (auto& pr : v.probes) {
      ContactAlgebra K(p, n, pr.heights);
      Poly w = K.parse(pr.witness);
      int steps = pr.capped ? pr.index : pr.index - 1;
      for (int k = 0; k < steps; ++k) w = K.bracket_bilinear(y, w);
      if (w.is_zero()) return false;
    }
    return true;
  }
  // NilpotentStable: the index-th power kills every basis vector at the
  // largest height (matrix-free form of one matrix power computation)
  const auto heights = v.probes.empty() ? t : v.probes.back().heights;
  ContactAlgebra K(p, n, heights);
  K.algebra().embed(y);
  for (auto& mo : K.algebra().basis()) {
    Poly w = K.algebra().monomial(mo);
    for (int k = 0; k < v.index && !w.is_zero(); ++k) w = K.bracket_bilinear(y, w);
    if (!w.is_zero()) return false;
  }
  return true;
}

}  // namespace kolab
