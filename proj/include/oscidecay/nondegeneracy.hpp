#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oscidecay/linalg.hpp"
#include "oscidecay/univariate.hpp"

namespace oscidecay {

/// Ambient coordinates plus the one-dimensional projection directions v_j.
struct ProjectionSystem {
  VarSet vars;
  std::vector<ScalarVector> vectors;

  ProjectionSystem(VarSet v, std::vector<ScalarVector> vecs)
      : vars(std::move(v)), vectors(std::move(vecs)) {
    if (vars.size() < 2) throw Error("projection system needs ambient dimension >= 2");
    for (const auto& w : vectors) {
      if (w.size() != vars.size())
        throw Error("projection vector length does not match ambient dimension");
      if (is_zero_vector(w)) throw Error("projection vectors must be nonzero");
    }
  }

  std::size_t ambient_dim() const { return vars.size(); }
  std::size_t factor_count() const { return vectors.size(); }

  MultiPoly form(std::size_t j) const { return MultiPoly::linear_form(vars, vectors.at(j)); }

  ProjectionSystem without(std::size_t j) const {
    std::vector<ScalarVector> rest;
    for (std::size_t i = 0; i < vectors.size(); ++i)
      if (i != j) rest.push_back(vectors[i]);
    return ProjectionSystem(vars, std::move(rest));
  }
};

/// All monomials of total degree <= d over a variable set, in graded
/// lexicographic order, with coefficient-vector extraction.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t nvars, unsigned max_degree)
      : nvars_(nvars), max_degree_(max_degree) {
    Exponents e(nvars, 0);
    enumerate(e, 0, max_degree);
    std::sort(monomials_.begin(), monomials_.end(), [](const Exponents& a, const Exponents& b) {
      unsigned da = total_degree(a), db = total_degree(b);
      if (da != db) return da < db;
      return a < b;
    });
    for (std::size_t i = 0; i < monomials_.size(); ++i) index_[monomials_[i]] = i;
  }

  std::size_t size() const { return monomials_.size(); }
  const Exponents& at(std::size_t i) const { return monomials_[i]; }

  ScalarVector coefficient_vector(const MultiPoly& p) const {
    ScalarVector v(size(), QuadExt(0));
    for (const auto& [e, c] : p.terms()) {
      auto it = index_.find(e);
      if (it == index_.end())
        throw Error("polynomial degree exceeds the configured bound " +
                    std::to_string(max_degree_));
      v[it->second] = c;
    }
    return v;
  }

 private:
  void enumerate(Exponents& e, std::size_t pos, unsigned budget) {
    if (pos == nvars_) {
      monomials_.push_back(e);
      return;
    }
    for (unsigned k = 0; k <= budget; ++k) {
      e[pos] = k;
      enumerate(e, pos + 1, budget - k);
    }
    e[pos] = 0;
  }

  std::size_t nvars_;
  unsigned max_degree_;
  std::vector<Exponents> monomials_;
  std::map<Exponents, std::size_t> index_;
};

/// The degenerate span of a projection system in the degree-<=d coefficient
/// space: the vectors of (v_j . x)^k for k = 1..d plus the constant 1.
struct DegenerateSpan {
  MonomialBasis basis;
  std::vector<ScalarVector> columns;
  struct Column {
    std::size_t factor;  // j, meaningless for the constant column
    unsigned power;      // k, 0 for the constant column
  };
  std::vector<Column> column_info;

  DegenerateSpan(const ProjectionSystem& sys, unsigned d)
      : basis(sys.vars.size(), d) {
    for (std::size_t j = 0; j < sys.factor_count(); ++j) {
      MultiPoly form = sys.form(j);
      MultiPoly power = MultiPoly::constant(sys.vars, QuadExt(1));
      for (unsigned k = 1; k <= d; ++k) {
        power *= form;
        columns.push_back(basis.coefficient_vector(power));
        column_info.push_back({j, k});
      }
    }
    columns.push_back(basis.coefficient_vector(MultiPoly::constant(sys.vars, QuadExt(1))));
    column_info.push_back({0, 0});
  }
};

/// Outcome of the degeneracy decision: either an exact decomposition
/// P = sum_j p_j(v_j . x) or a positive squared distance to the span.
struct DegeneracyVerdict {
  bool degenerate = false;
  std::vector<Univariate> decomposition;  // one p_j per factor when degenerate
  QuadExt distance_sq;                    // positive when nondegenerate
};

/// Reassemble sum_j p_j(v_j . x).
inline MultiPoly compose_decomposition(const std::vector<Univariate>& ps,
                                       const ProjectionSystem& sys) {
  MultiPoly sum = MultiPoly::zero(sys.vars);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    const auto& c = ps[j].coeffs();
    if (c.empty()) continue;
    MultiPoly form = sys.form(j);
    MultiPoly power = MultiPoly::constant(sys.vars, QuadExt(1));
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!c[k].is_zero()) sum += c[k] * power;
      if (k + 1 < c.size()) power *= form;
    }
  }
  return sum;
}

/// Exact decision of Def-style degeneracy at degree bound d. Decompositions
/// absorb the constant term into p_1.
inline DegeneracyVerdict degeneracy_decompose(const MultiPoly& P, const ProjectionSystem& sys,
                                              unsigned d) {
  if (P.vars() != sys.vars) throw Error("phase and projection system use different variables");
  if (P.degree() > d)
    throw Error("degree bound " + std::to_string(d) + " is below deg P = " +
                std::to_string(P.degree()));
  DegenerateSpan span(sys, d);
  ScalarVector target = span.basis.coefficient_vector(P);

  DegeneracyVerdict out;
  if (auto coeffs = solve_membership(target, span.columns)) {
    out.degenerate = true;
    std::vector<std::vector<QuadExt>> per_factor(sys.factor_count(),
                                                 std::vector<QuadExt>(d + 1, QuadExt(0)));
    for (std::size_t c = 0; c < coeffs->size(); ++c) {
      if ((*coeffs)[c].is_zero()) continue;
      const auto& info = span.column_info[c];
      if (info.power == 0)
        per_factor[0][0] += (*coeffs)[c];  // constant goes to p_1
      else
        per_factor[info.factor][info.power] += (*coeffs)[c];
    }
    for (auto& c : per_factor) out.decomposition.emplace_back(std::move(c));
    if (!(P - compose_decomposition(out.decomposition, sys)).is_zero())
      throw Error("internal: decomposition failed to reconstruct the phase");
    return out;
  }
  out.degenerate = false;
  out.distance_sq = residual_norm_sq(target, span.columns);
  if (out.distance_sq.sign() <= 0)
    throw Error("internal: nondegenerate phase with nonpositive residual");
  return out;
}

/// General-position check: every subcollection of size k <= m must span a
/// k-dimensional space (kappa = 1). Returns the first offending subset.
struct GeneralPositionResult {
  bool holds = true;
  std::vector<std::size_t> offending;  // factor indices, empty when holds
};

inline GeneralPositionResult general_position(const ProjectionSystem& sys) {
  const std::size_t n = sys.factor_count();
  const std::size_t m = sys.ambient_dim();
  const std::size_t kmax = std::min(n, m);
  for (std::size_t k = 1; k <= kmax; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      std::vector<ScalarVector> subset;
      for (std::size_t i : idx) subset.push_back(sys.vectors[i]);
      if (rank(subset) < k) return {false, idx};
      // next combination in lexicographic order
      std::size_t i = k;
      while (i-- > 0) {
        if (idx[i] != i + n - k) {
          ++idx[i];
          for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
          break;
        }
        if (i == 0) goto next_size;
      }
    }
  next_size:;
  }
  return {true, {}};
}

/// Composition of first-order directional derivatives. Directions are
/// ambient-length; application embeds them (by variable name) into the
/// polynomial's possibly larger variable set with zero components elsewhere.
struct DiffOperator {
  std::vector<ScalarVector> directions;

  MultiPoly apply(const MultiPoly& p, const VarSet& ambient) const {
    MultiPoly q = p;
    for (const auto& u : directions) {
      std::vector<QuadExt> full(p.vars().size(), QuadExt(0));
      for (std::size_t i = 0; i < ambient.size(); ++i)
        full[p.vars().require(ambient.name(i))] = u.at(i);
      q = q.directional_derivative(full);
      if (q.is_zero()) break;
    }
    return q;
  }

  std::string to_string() const {
    std::string s;
    for (const auto& u : directions) {
      s += "d[";
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (i) s += ",";
        s += u[i].to_string();
      }
      s += "]";
    }
    return s;
  }
};

/// First factor index j (if any) for which the operator has no direction
/// orthogonal to v_j; such an operator may fail to annihilate functions of
/// v_j . x and is rejected as a witness candidate.
inline std::optional<std::size_t> annihilation_gap(const DiffOperator& op,
                                                   const ProjectionSystem& sys) {
  for (std::size_t j = 0; j < sys.factor_count(); ++j) {
    bool ok = false;
    for (const auto& u : op.directions) {
      if (u.size() != sys.ambient_dim()) throw Error("operator direction length mismatch");
      if (dot(u, sys.vectors[j]).is_zero()) {
        ok = true;
        break;
      }
    }
    if (!ok) return j;
  }
  return std::nullopt;
}

struct AnnihilatorWitness {
  DiffOperator op;
  MultiPoly image;  // D . P, nonzero
};

/// Scan the pool in order for the first operator with D.P != 0. A witness is
/// a sound certificate of nondegeneracy; absence proves nothing.
inline std::optional<AnnihilatorWitness> annihilator_witness(const MultiPoly& P,
                                                             const ProjectionSystem& sys,
                                                             const std::vector<DiffOperator>& pool) {
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (auto gap = annihilation_gap(pool[i], sys)) {
      throw Error("pool operator #" + std::to_string(i) + " (" + pool[i].to_string() +
                  ") has no direction orthogonal to projection #" + std::to_string(*gap + 1));
    }
  }
  const unsigned degP = P.degree();
  for (const auto& op : pool) {
    if (op.directions.size() > degP) continue;  // order exceeds degree, image is zero
    MultiPoly image = op.apply(P, sys.vars);
    if (!image.is_zero()) return AnnihilatorWitness{op, image};
  }
  return std::nullopt;
}

namespace detail {

/// Scale so the first nonzero entry becomes 1 (canonical representative of
/// the direction's line).
inline ScalarVector canonical_direction(const ScalarVector& v) {
  ScalarVector out = v;
  for (const auto& x : out) {
    if (!x.is_zero()) {
      QuadExt inv = QuadExt(1) / x;
      for (auto& y : out) y = inv * y;
      break;
    }
  }
  return out;
}

inline std::string direction_key(const ScalarVector& v) {
  std::string s;
  for (const auto& x : v) {
    s += x.to_string();
    s += "|";
  }
  return s;
}

}  // namespace detail

/// Candidate orthogonal directions for one projection: coordinate axes
/// orthogonal to v_j, then every other v_a with its v_j-component removed.
inline std::vector<ScalarVector> orthogonal_candidates(const ProjectionSystem& sys,
                                                       std::size_t j) {
  const std::size_t m = sys.ambient_dim();
  std::vector<ScalarVector> out;
  std::vector<std::string> seen;
  auto push = [&](ScalarVector v) {
    if (is_zero_vector(v)) return;
    ScalarVector c = detail::canonical_direction(v);
    std::string key = detail::direction_key(c);
    for (const auto& k : seen)
      if (k == key) return;
    seen.push_back(key);
    out.push_back(std::move(c));
  };
  for (std::size_t i = 0; i < m; ++i) {
    if (sys.vectors[j][i].is_zero()) {
      ScalarVector e(m, QuadExt(0));
      e[i] = QuadExt(1);
      push(std::move(e));
    }
  }
  const QuadExt vv = dot(sys.vectors[j], sys.vectors[j]);
  for (std::size_t a = 0; a < sys.factor_count(); ++a) {
    if (a == j) continue;
    QuadExt f = dot(sys.vectors[a], sys.vectors[j]) / vv;
    ScalarVector w = sys.vectors[a];
    for (std::size_t i = 0; i < m; ++i) w[i] -= f * sys.vectors[j][i];
    push(std::move(w));
  }
  return out;
}

/// Default witness pool: all products choosing one orthogonal direction per
/// factor, with repeated directions collapsed, deduplicated, and capped.
/// Deterministic enumeration order.
inline std::vector<DiffOperator> default_witness_pool(const ProjectionSystem& sys,
                                                      std::size_t cap = 512) {
  const std::size_t n = sys.factor_count();
  std::vector<std::vector<ScalarVector>> cands(n);
  for (std::size_t j = 0; j < n; ++j) {
    cands[j] = orthogonal_candidates(sys, j);
    if (cands[j].empty()) return {};  // no annihilating product exists for this factor
  }

  std::vector<DiffOperator> pool;
  std::set<std::string> seen;
  std::vector<std::size_t> pick(n, 0);
  const std::size_t max_iterations = 1u << 15;
  for (std::size_t iter = 0; iter < max_iterations && pool.size() < cap; ++iter) {
    // Collapse the chosen directions into a sorted set of distinct lines. The
    // set still contains, for every factor, a direction orthogonal to it.
    std::vector<ScalarVector> dirs;
    for (std::size_t j = 0; j < n; ++j) {
      const ScalarVector& c = cands[j][pick[j]];
      bool dup = false;
      for (const auto& dv : dirs)
        if (dv == c) {
          dup = true;
          break;
        }
      if (!dup) dirs.push_back(c);
    }
    std::sort(dirs.begin(), dirs.end(), [](const ScalarVector& a, const ScalarVector& b) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        int c = compare(a[i], b[i]);
        if (c != 0) return c < 0;
      }
      return false;
    });
    std::string key;
    for (const auto& dv : dirs) key += detail::direction_key(dv) + ";";
    if (seen.insert(key).second) pool.push_back(DiffOperator{dirs});
    // odometer, last index fastest
    std::size_t j = n;
    bool done = true;
    while (j-- > 0) {
      if (++pick[j] < cands[j].size()) {
        done = false;
        break;
      }
      pick[j] = 0;
    }
    if (done) break;
  }
  return pool;
}

/// Applicability of the external L^2 decay theorem: factor count, general
/// position, and exact nondegeneracy, checked in that order.
struct ClttResult {
  bool accepted = false;
  std::string rejection;  // first failing condition
  std::size_t n = 0, m = 0;
  std::optional<GeneralPositionResult> gp;
  std::optional<DegeneracyVerdict> verdict;
};

inline ClttResult cltt_l2_predicate(const MultiPoly& P, const ProjectionSystem& sys, unsigned d) {
  ClttResult r;
  r.n = sys.factor_count();
  r.m = sys.ambient_dim();
  if (!(r.n < 2 * r.m)) {
    r.rejection = "n < 2m fails: " + std::to_string(r.n) + " !< " + std::to_string(2 * r.m);
    return r;
  }
  r.gp = general_position(sys);
  if (!r.gp->holds) {
    std::string subset;
    for (std::size_t i : r.gp->offending) subset += (subset.empty() ? "" : ",") +
                                                    std::to_string(i + 1);
    r.rejection = "general position fails on factors {" + subset + "}";
    return r;
  }
  r.verdict = degeneracy_decompose(P, sys, d);
  if (r.verdict->degenerate) {
    r.rejection = "phase is degenerate with respect to the projections";
    return r;
  }
  r.accepted = true;
  return r;
}

}  // namespace oscidecay
