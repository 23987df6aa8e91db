#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oscidecay/quadext.hpp"

namespace oscidecay {

/// Ordered set of distinct variable names. The order is fixed for the
/// lifetime of a problem; monomial order and printing depend on it.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i)
      for (std::size_t j = i + 1; j < names_.size(); ++j)
        if (names_[i] == names_[j]) throw Error("duplicate variable name: " + names_[i]);
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    return std::nullopt;
  }
  bool contains(const std::string& name) const { return index_of(name).has_value(); }

  std::size_t require(const std::string& name) const {
    auto i = index_of(name);
    if (!i) throw Error("unknown variable: " + name);
    return *i;
  }

  /// New set with one more variable appended (existing order preserved).
  VarSet extended(const std::string& name) const {
    if (contains(name)) throw Error("variable name collision: " + name);
    std::vector<std::string> n = names_;
    n.push_back(name);
    return VarSet(std::move(n));
  }

  friend bool operator==(const VarSet& a, const VarSet& b) { return a.names_ == b.names_; }
  friend bool operator!=(const VarSet& a, const VarSet& b) { return !(a == b); }

 private:
  std::vector<std::string> names_;
};

using Exponents = std::vector<unsigned>;

inline unsigned total_degree(const Exponents& e) {
  unsigned d = 0;
  for (unsigned x : e) d += x;
  return d;
}

/// Multivariate polynomial over QuadExt in a fixed VarSet. Terms are a map
/// from exponent vectors to nonzero coefficients; the zero polynomial has an
/// empty term map.
class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(VarSet vars) : vars_(std::move(vars)) {}

  static MultiPoly zero(const VarSet& vars) { return MultiPoly(vars); }
  static MultiPoly constant(const VarSet& vars, const QuadExt& c) {
    MultiPoly p(vars);
    if (!c.is_zero()) p.terms_[Exponents(vars.size(), 0)] = c;
    return p;
  }
  static MultiPoly variable(const VarSet& vars, const std::string& name) {
    MultiPoly p(vars);
    Exponents e(vars.size(), 0);
    e[vars.require(name)] = 1;
    p.terms_[e] = QuadExt(1);
    return p;
  }
  /// Linear form u . x.
  static MultiPoly linear_form(const VarSet& vars, const std::vector<QuadExt>& u) {
    if (u.size() != vars.size()) throw Error("linear form length does not match variable count");
    MultiPoly p(vars);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].is_zero()) continue;
      Exponents e(vars.size(), 0);
      e[i] = 1;
      p.terms_[e] = u[i];
    }
    return p;
  }

  const VarSet& vars() const { return vars_; }
  const std::map<Exponents, QuadExt>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }
  QuadExt constant_value() const {
    if (terms_.empty()) return QuadExt(0);
    auto it = terms_.find(Exponents(vars_.size(), 0));
    return it == terms_.end() ? QuadExt(0) : it->second;
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
  }
  unsigned degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
  }

  /// Variables that actually occur with positive exponent.
  std::vector<std::size_t> active_vars() const {
    std::vector<bool> seen(vars_.size(), false);
    for (const auto& [e, c] : terms_)
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) seen[i] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (seen[i]) out.push_back(i);
    return out;
  }

  void add_term(const Exponents& e, const QuadExt& c) {
    if (e.size() != vars_.size()) throw Error("exponent vector length mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  QuadExt coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? QuadExt(0) : it->second;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    a.check_same_vars(b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    a.check_same_vars(b);
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
  }
  MultiPoly operator-() const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_same_vars(b);
    MultiPoly r(a.vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }
  friend MultiPoly operator*(const QuadExt& c, const MultiPoly& p) {
    MultiPoly r(p.vars_);
    if (c.is_zero()) return r;
    for (const auto& [e, pc] : p.terms_) r.terms_[e] = c * pc;
    return r;
  }

  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  MultiPoly pow(unsigned e) const {
    MultiPoly r = constant(vars_, QuadExt(1));
    MultiPoly base = *this;
    while (e) {
      if (e & 1u) r *= base;
      base *= base;
      e >>= 1u;
    }
    return r;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  MultiPoly derivative(std::size_t var) const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      d[var] -= 1;
      r.add_term(d, QuadExt(Rational(e[var])) * c);
    }
    return r;
  }

  /// Directional derivative sum_i u_i d/dx_i; u must match the variable count.
  MultiPoly directional_derivative(const std::vector<QuadExt>& u) const {
    if (u.size() != vars_.size())
      throw Error("direction length does not match variable count");
    MultiPoly r(vars_);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].is_zero()) continue;
      r += u[i] * derivative(i);
    }
    return r;
  }

  /// Substitute var := value (exact), keeping the VarSet.
  MultiPoly substitute(std::size_t var, const QuadExt& value) const {
    MultiPoly r(vars_);
    for (const auto& [e, c] : terms_) {
      Exponents d = e;
      unsigned k = d[var];
      d[var] = 0;
      r.add_term(d, c * value.pow(k));
    }
    return r;
  }

  /// Substitute var := var + param over the extended VarSet (binomial
  /// expansion, exact). param must be a fresh name.
  MultiPoly substitute_shifted(const std::string& var, const std::string& param) const {
    const std::size_t vi = vars_.require(var);
    VarSet ext = vars_.extended(param);
    const std::size_t pi = ext.size() - 1;
    MultiPoly r(ext);
    // Pascal row cache for binomial coefficients up to the var degree.
    const unsigned maxd = degree_in(vi);
    std::vector<std::vector<BigInt>> binom(maxd + 1);
    for (unsigned n = 0; n <= maxd; ++n) {
      binom[n].resize(n + 1);
      binom[n][0] = 1;
      binom[n][n] = 1;
      for (unsigned k = 1; k < n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
    }
    for (const auto& [e, c] : terms_) {
      const unsigned n = e[vi];
      for (unsigned k = 0; k <= n; ++k) {
        Exponents d(ext.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) d[i] = e[i];
        d[vi] = n - k;
        d[pi] = k;
        r.add_term(d, c * QuadExt(Rational(binom[n][k])));
      }
    }
    return r;
  }

  /// Re-express this polynomial over another VarSet. Every active variable
  /// must exist in the target set.
  MultiPoly with_vars(const VarSet& target) const {
    std::vector<std::optional<std::size_t>> map(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) map[i] = target.index_of(vars_.name(i));
    MultiPoly r(target);
    for (const auto& [e, c] : terms_) {
      Exponents d(target.size(), 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!map[i]) throw Error("variable " + vars_.name(i) + " absent from target set");
        d[*map[i]] = e[i];
      }
      r.add_term(d, c);
    }
    return r;
  }

  /// Collect terms by the monomials in the given variable subset: returns a
  /// map from subset-exponent vector (indexed by `collect`) to the polynomial
  /// in the remaining variables. Summing entry_monomial * value over the map
  /// reconstructs the input exactly.
  std::map<Exponents, MultiPoly> collect_by(const std::vector<std::size_t>& collect) const {
    std::vector<bool> is_collected(vars_.size(), false);
    for (std::size_t i : collect) is_collected.at(i) = true;
    std::map<Exponents, MultiPoly> out;
    for (const auto& [e, c] : terms_) {
      Exponents key(collect.size());
      for (std::size_t k = 0; k < collect.size(); ++k) key[k] = e[collect[k]];
      Exponents rest = e;
      for (std::size_t i : collect) rest[i] = 0;
      auto it = out.find(key);
      if (it == out.end()) it = out.emplace(key, MultiPoly(vars_)).first;
      it->second.add_term(rest, c);
    }
    return out;
  }

  double eval_double(const std::vector<double>& point) const {
    if (point.size() != vars_.size()) throw Error("evaluation point length mismatch");
    double sum = 0;
    for (const auto& [e, c] : terms_) {
      double t = c.to_double();
      for (std::size_t i = 0; i < e.size(); ++i)
        for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
      sum += t;
    }
    return sum;
  }

  QuadExt eval(const std::vector<QuadExt>& point) const {
    if (point.size() != vars_.size()) throw Error("evaluation point length mismatch");
    QuadExt sum(0);
    for (const auto& [e, c] : terms_) {
      QuadExt t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) t *= point[i].pow(e[i]);
      sum += t;
    }
    return sum;
  }

  /// Canonical rendering: monomials sorted by descending total degree, then
  /// descending lexicographic exponents. Output parses back to the same
  /// term map.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const Exponents, QuadExt>*> order;
    order.reserve(terms_.size());
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
      unsigned da = total_degree(a->first), db = total_degree(b->first);
      if (da != db) return da > db;
      return a->first > b->first;
    });
    std::string out;
    for (const auto* t : order) {
      QuadExt c = t->second;
      if (out.empty()) {
        if (c.sign() < 0) {
          out += "-";
          c = -c;
        }
      } else {
        out += c.sign() < 0 ? " - " : " + ";
        if (c.sign() < 0) c = -c;
      }
      out += term_string(t->first, c);
    }
    return out;
  }

 private:
  void check_same_vars(const MultiPoly& o) const {
    if (vars_ != o.vars_) throw Error("polynomial variable sets differ");
  }

  std::string term_string(const Exponents& e, const QuadExt& c) const {
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_.name(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) return scalar_string(c);
    if (c.is_one()) return mono;
    return scalar_string(c) + "*" + mono;
  }

  static std::string scalar_string(const QuadExt& c) {
    std::string s = c.to_string();
    // Parenthesize sums and leading minus so the string re-parses as one factor.
    const bool needs_parens = s.find('+') != std::string::npos ||
                              s.find('-', 1) != std::string::npos || s[0] == '-';
    return needs_parens ? "(" + s + ")" : s;
  }

  VarSet vars_;
  std::map<Exponents, QuadExt> terms_;
};

/// p - p[var := var + param]: the difference under shifting one coordinate by
/// a fresh parameter. Vanishes identically at param = 0.
inline MultiPoly shift_difference(const MultiPoly& p, const std::string& var,
                                  const std::string& param) {
  MultiPoly shifted = p.substitute_shifted(var, param);
  MultiPoly lifted = p.with_vars(shifted.vars());
  return lifted - shifted;
}

}  // namespace oscidecay
