#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "oscidecay/multipoly.hpp"

namespace oscidecay {

/// Dense univariate polynomial over QuadExt; coeffs[k] multiplies t^k and the
/// vector is trimmed so the back entry of a nonzero polynomial is nonzero.
class Univariate {
 public:
  Univariate() = default;
  explicit Univariate(std::vector<QuadExt> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  /// Extract from a MultiPoly with at most one active variable. Returns the
  /// coefficient vector in that variable (a constant yields degree 0).
  static Univariate from_multipoly(const MultiPoly& p) {
    auto active = p.active_vars();
    if (active.size() > 1) throw Error("polynomial is not univariate");
    std::size_t var = active.empty() ? 0 : active[0];
    std::vector<QuadExt> c;
    for (const auto& [e, coef] : p.terms()) {
      unsigned k = p.vars().size() == 0 ? 0 : e[var];
      if (c.size() <= k) c.resize(k + 1);
      c[k] = coef;
    }
    return Univariate(std::move(c));
  }

  MultiPoly to_multipoly(const VarSet& vars, const std::string& var_name) const {
    MultiPoly p(vars);
    std::size_t vi = vars.require(var_name);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k].is_zero()) continue;
      Exponents e(vars.size(), 0);
      e[vi] = static_cast<unsigned>(k);
      p.add_term(e, coeffs_[k]);
    }
    return p;
  }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  const std::vector<QuadExt>& coeffs() const { return coeffs_; }
  const QuadExt& leading() const {
    if (coeffs_.empty()) throw Error("zero polynomial has no leading coefficient");
    return coeffs_.back();
  }

  QuadExt eval(const QuadExt& x) const {
    QuadExt acc(0);
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * x + coeffs_[k];
    return acc;
  }

  Univariate derivative() const {
    if (coeffs_.size() <= 1) return Univariate();
    std::vector<QuadExt> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
      d[k - 1] = QuadExt(Rational(static_cast<long long>(k))) * coeffs_[k];
    return Univariate(std::move(d));
  }

  friend Univariate operator-(const Univariate& a) {
    std::vector<QuadExt> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a.coeffs_[i];
    return Univariate(std::move(c));
  }

  friend Univariate operator*(const QuadExt& s, const Univariate& a) {
    if (s.is_zero()) return Univariate();
    std::vector<QuadExt> c(a.coeffs_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = s * a.coeffs_[i];
    return Univariate(std::move(c));
  }

  /// Field division with remainder: *this = q * d + r, deg r < deg d.
  std::pair<Univariate, Univariate> divmod(const Univariate& d) const {
    if (d.is_zero()) throw Error("univariate division by zero polynomial");
    std::vector<QuadExt> rem = coeffs_;
    std::vector<QuadExt> quo;
    if (coeffs_.size() >= d.coeffs_.size())
      quo.assign(coeffs_.size() - d.coeffs_.size() + 1, QuadExt(0));
    while (rem.size() >= d.coeffs_.size() && !rem.empty()) {
      QuadExt f = rem.back() / d.leading();
      std::size_t shift = rem.size() - d.coeffs_.size();
      quo[shift] = f;
      for (std::size_t i = 0; i < d.coeffs_.size(); ++i)
        rem[shift + i] -= f * d.coeffs_[i];
      while (!rem.empty() && rem.back().is_zero()) rem.pop_back();
    }
    return {Univariate(std::move(quo)), Univariate(std::move(rem))};
  }

  Univariate monic() const {
    if (is_zero()) return *this;
    return (QuadExt(1) / leading()) * *this;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::vector<QuadExt> coeffs_;
};

/// Monic gcd by the Euclidean algorithm over the field.
inline Univariate gcd(Univariate a, Univariate b) {
  while (!b.is_zero()) {
    Univariate r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Monic gcd of a family given as MultiPolys sharing one active variable.
/// Errors if all inputs are zero.
inline MultiPoly gcd_univariate(const std::vector<MultiPoly>& ps) {
  if (ps.empty()) throw Error("gcd of empty family");
  std::optional<std::size_t> var;
  const VarSet* vars = nullptr;
  Univariate g;
  bool any = false;
  for (const auto& p : ps) {
    if (p.is_zero()) continue;
    auto active = p.active_vars();
    if (active.size() > 1) throw Error("gcd inputs must be univariate");
    if (!active.empty()) {
      if (var && *var != active[0]) throw Error("gcd inputs use different variables");
      var = active[0];
    }
    vars = &p.vars();
    g = any ? gcd(g, Univariate::from_multipoly(p)) : Univariate::from_multipoly(p).monic();
    any = true;
  }
  if (!any) throw Error("gcd of all-zero family");
  const std::string name = var ? vars->name(*var) : vars->name(0);
  return g.to_multipoly(*vars, name);
}

/// Root-count domain: the whole line, a closed interval [a, b], or the
/// complement region |t| >= r.
struct RootDomain {
  enum class Kind { AllReals, Interval, Complement };
  Kind kind = Kind::AllReals;
  Rational a, b;  // interval endpoints
  Rational r;     // complement radius

  static RootDomain all_reals() { return RootDomain{}; }
  static RootDomain interval(Rational lo, Rational hi) {
    return RootDomain{Kind::Interval, std::move(lo), std::move(hi), Rational(0)};
  }
  static RootDomain complement(Rational radius) {
    return RootDomain{Kind::Complement, Rational(0), Rational(0), std::move(radius)};
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::AllReals:
        return "all reals";
      case Kind::Interval:
        return "[" + a.to_string() + ", " + b.to_string() + "]";
      case Kind::Complement:
        return "|t| >= " + r.to_string();
    }
    return "";
  }
};

/// Sturm chain of the square-free part of a nonzero univariate polynomial.
/// Sign-variation differences count distinct real roots; the chain is built
/// once and queried at rational points and at +/- infinity.
class SturmChain {
 public:
  explicit SturmChain(const Univariate& p) {
    if (p.is_zero()) throw Error("cannot count roots of the zero polynomial");
    Univariate sf = p;
    if (p.degree() >= 1) {
      Univariate g = gcd(p, p.derivative());
      if (g.degree() >= 1) sf = p.divmod(g).first;
    }
    squarefree_ = sf;
    chain_.push_back(sf);
    if (sf.degree() >= 1) {
      chain_.push_back(sf.derivative());
      for (;;) {
        const Univariate& prev = chain_[chain_.size() - 2];
        const Univariate& last = chain_.back();
        Univariate rem = prev.divmod(last).second;
        if (rem.is_zero()) break;
        chain_.push_back(-rem);
      }
    }
  }

  const Univariate& squarefree() const { return squarefree_; }
  bool is_root(const Rational& x) const { return squarefree_.eval(QuadExt(x)).is_zero(); }

  /// Distinct real roots on the whole line.
  long count_all() const { return variations_at_minus_inf() - variations_at_plus_inf(); }

  /// Distinct real roots in the closed interval [a, b].
  long count_closed(const Rational& a, const Rational& b) const {
    if (b < a) throw Error("interval endpoints out of order");
    if (a == b) return is_root(a) ? 1 : 0;
    return (is_root(a) ? 1 : 0) + count_halfopen(a, b);
  }

  /// Distinct real roots with |t| >= r (r >= 0); both +/-r included.
  long count_complement(const Rational& r) const {
    if (r.sign() < 0) throw Error("complement radius must be nonnegative");
    if (r.is_zero()) return count_all();
    const long open_inner = count_halfopen(-r, r) - (is_root(r) ? 1 : 0);
    return count_all() - open_inner;
  }

  long count(const RootDomain& d) const {
    switch (d.kind) {
      case RootDomain::Kind::AllReals:
        return count_all();
      case RootDomain::Kind::Interval:
        return count_closed(d.a, d.b);
      case RootDomain::Kind::Complement:
        return count_complement(d.r);
    }
    return 0;
  }

  /// Roots in the half-open interval (a, b]. With the zero-skipping variation
  /// count, the value at a point behaves like the value just right of it, so
  /// a root at a is excluded and a root at b is included.
  long count_halfopen(const Rational& a, const Rational& b) const {
    return variations_at(a) - variations_at(b);
  }

 private:
  long variations_at(const Rational& x) const {
    std::vector<int> signs;
    QuadExt q(x);
    for (const auto& c : chain_) signs.push_back(c.eval(q).sign());
    return count_variations(signs);
  }
  long variations_at_plus_inf() const {
    std::vector<int> signs;
    for (const auto& c : chain_) signs.push_back(c.leading().sign());
    return count_variations(signs);
  }
  long variations_at_minus_inf() const {
    std::vector<int> signs;
    for (const auto& c : chain_)
      signs.push_back(c.degree() % 2 == 0 ? c.leading().sign() : -c.leading().sign());
    return count_variations(signs);
  }
  static long count_variations(const std::vector<int>& signs) {
    long v = 0;
    int prev = 0;
    for (int s : signs) {
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++v;
      prev = s;
    }
    return v;
  }

  Univariate squarefree_;
  std::vector<Univariate> chain_;
};

/// Spec'd operation: number of distinct real roots of a univariate MultiPoly
/// in a domain, decided by exact Sturm sign variations.
inline long count_real_roots(const MultiPoly& p, const RootDomain& domain) {
  if (p.is_zero()) throw Error("cannot count roots of the zero polynomial");
  return SturmChain(Univariate::from_multipoly(p)).count(domain);
}

/// Location evidence for a real root inside a domain: either an exact
/// rational root or an isolating interval found by Sturm-guided bisection.
struct RootWitness {
  std::optional<Rational> exact;
  Rational lo, hi;

  std::string to_string(const std::string& var) const {
    if (exact) return var + " = " + exact->to_string();
    return var + " in [" + lo.to_string() + ", " + hi.to_string() + "]";
  }
};

inline std::optional<RootWitness> find_root_witness(const Univariate& p, const RootDomain& d) {
  if (p.is_zero() || p.is_constant()) return std::nullopt;
  SturmChain chain(p);
  if (chain.count(d) == 0) return std::nullopt;

  // Grow a bound that captures every real root.
  Rational bound(1);
  while (chain.count_closed(-bound, bound) < chain.count_all()) bound *= Rational(2);

  Rational lo, hi;
  switch (d.kind) {
    case RootDomain::Kind::AllReals:
      lo = -bound;
      hi = bound;
      break;
    case RootDomain::Kind::Interval:
      lo = d.a;
      hi = d.b;
      break;
    case RootDomain::Kind::Complement: {
      if (bound < d.r) bound = d.r + Rational(1);
      if (chain.count_closed(d.r, bound) > 0) {
        lo = d.r;
        hi = bound;
      } else {
        lo = -bound;
        hi = -d.r;
      }
      break;
    }
  }

  if (chain.is_root(lo)) return RootWitness{lo, lo, lo};
  const Rational min_width(BigInt(1), BigInt(1) << 40);
  while (hi - lo > min_width) {
    Rational mid = (lo + hi) / Rational(2);
    if (chain.is_root(mid)) return RootWitness{mid, mid, mid};
    if (chain.count_halfopen(lo, mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
  return RootWitness{std::nullopt, lo, hi};
}

}  // namespace oscidecay
