#pragma once

#include <optional>
#include <vector>

#include "oscidecay/multipoly.hpp"

namespace oscidecay {

using ScalarVector = std::vector<QuadExt>;

inline QuadExt dot(const ScalarVector& a, const ScalarVector& b) {
  if (a.size() != b.size()) throw Error("dot product length mismatch");
  QuadExt s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool is_zero_vector(const ScalarVector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

/// Rectangular matrix of exact scalars (row-major).
class ScalarMatrix {
 public:
  ScalarMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, QuadExt(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  QuadExt& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const QuadExt& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(at(a, c), at(b, c));
  }

 private:
  std::size_t rows_, cols_;
  std::vector<QuadExt> data_;
};

/// Exact rank of a list of row vectors via Gaussian elimination with exact
/// zero tests for pivoting.
inline std::size_t rank(const std::vector<ScalarVector>& vs) {
  if (vs.empty()) return 0;
  const std::size_t n = vs.size(), m = vs[0].size();
  for (const auto& v : vs)
    if (v.size() != m) throw Error("rank: vectors of unequal length");
  ScalarMatrix a(n, m);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < m; ++c) a.at(r, c) = vs[r][c];

  std::size_t rk = 0;
  for (std::size_t col = 0; col < m && rk < n; ++col) {
    std::size_t pivot = rk;
    while (pivot < n && a.at(pivot, col).is_zero()) ++pivot;
    if (pivot == n) continue;
    a.swap_rows(rk, pivot);
    for (std::size_t r = rk + 1; r < n; ++r) {
      if (a.at(r, col).is_zero()) continue;
      QuadExt f = a.at(r, col) / a.at(rk, col);
      for (std::size_t c = col; c < m; ++c) a.at(r, c) -= f * a.at(rk, c);
    }
    ++rk;
  }
  return rk;
}

/// Exact coefficients expressing target as a linear combination of the basis
/// vectors, or nullopt when target lies outside their span. With dependent
/// bases the solution sets non-pivot coefficients to zero (deterministic).
inline std::optional<ScalarVector> solve_membership(const ScalarVector& target,
                                                    const std::vector<ScalarVector>& basis) {
  const std::size_t dim = target.size();
  const std::size_t k = basis.size();
  for (const auto& v : basis)
    if (v.size() != dim) throw Error("membership: vectors of unequal length");
  if (k == 0) return is_zero_vector(target) ? std::optional<ScalarVector>(ScalarVector{})
                                            : std::nullopt;

  // Augmented system [B | t] with basis vectors as columns, reduced to row
  // echelon form; inconsistency shows up as a pivot in the last column.
  ScalarMatrix a(dim, k + 1);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < k; ++c) a.at(r, c) = basis[c][r];
    a.at(r, k) = target[r];
  }

  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < dim; ++col) {
    std::size_t p = row;
    while (p < dim && a.at(p, col).is_zero()) ++p;
    if (p == dim) continue;
    a.swap_rows(row, p);
    QuadExt inv = QuadExt(1) / a.at(row, col);
    for (std::size_t c = col; c <= k; ++c) a.at(row, c) *= inv;
    for (std::size_t r = 0; r < dim; ++r) {
      if (r == row || a.at(r, col).is_zero()) continue;
      QuadExt f = a.at(r, col);
      for (std::size_t c = col; c <= k; ++c) a.at(r, c) -= f * a.at(row, c);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r = row; r < dim; ++r)
    if (!a.at(r, k).is_zero()) return std::nullopt;

  ScalarVector coeffs(k, QuadExt(0));
  for (std::size_t i = 0; i < pivot_col.size(); ++i) coeffs[pivot_col[i]] = a.at(i, k);
  return coeffs;
}

/// Orthogonal (not normalized) spanning set of span(basis) by Gram-Schmidt;
/// zero vectors produced by dependencies are dropped. All exact.
inline std::vector<ScalarVector> orthogonalize(const std::vector<ScalarVector>& basis) {
  std::vector<ScalarVector> orth;
  for (const auto& b : basis) {
    ScalarVector u = b;
    for (const auto& o : orth) {
      QuadExt f = dot(u, o) / dot(o, o);
      if (f.is_zero()) continue;
      for (std::size_t i = 0; i < u.size(); ++i) u[i] -= f * o[i];
    }
    if (!is_zero_vector(u)) orth.push_back(std::move(u));
  }
  return orth;
}

/// Component of target orthogonal to span(orth), where orth is the output of
/// orthogonalize().
inline ScalarVector residual_against(const ScalarVector& target,
                                     const std::vector<ScalarVector>& orth) {
  ScalarVector r = target;
  for (const auto& o : orth) {
    QuadExt f = dot(r, o) / dot(o, o);
    if (f.is_zero()) continue;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= f * o[i];
  }
  return r;
}

/// Exact squared Euclidean distance of target to span(basis). Zero iff
/// solve_membership succeeds.
inline QuadExt residual_norm_sq(const ScalarVector& target,
                                const std::vector<ScalarVector>& basis) {
  ScalarVector r = residual_against(target, orthogonalize(basis));
  return dot(r, r);
}

}  // namespace oscidecay
