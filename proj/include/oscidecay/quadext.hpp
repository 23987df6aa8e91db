#pragma once

#include <cmath>
#include <string>

#include "oscidecay/rational.hpp"

namespace oscidecay {

/// Element a + b*sqrt(m) of the real quadratic field Q(sqrt(m)), m a
/// square-free integer >= 2. Scalars with b == 0 are radicand-agnostic
/// (m is normalized to 0) so plain rationals combine with any field.
///
/// Arithmetic is exact; equality is componentwise, which is sound because
/// sqrt(m) is irrational: a1 + b1*sqrt(m) == a2 + b2*sqrt(m) iff a1 == a2
/// and b1 == b2.
class QuadExt {
 public:
  QuadExt() : rat_(0), irr_(0), m_(0) {}
  QuadExt(long long n) : rat_(n), irr_(0), m_(0) {}  // NOLINT(google-explicit-constructor)
  explicit QuadExt(Rational r) : rat_(std::move(r)), irr_(0), m_(0) {}
  QuadExt(Rational rat, Rational irr, long long radicand)
      : rat_(std::move(rat)), irr_(std::move(irr)), m_(radicand) {
    if (irr_.is_zero()) {
      m_ = 0;
    } else if (m_ < 2) {
      throw Error("quadratic radicand must be an integer >= 2");
    }
  }

  static QuadExt sqrt_of(long long radicand) { return QuadExt(Rational(0), Rational(1), radicand); }

  const Rational& rat() const { return rat_; }
  const Rational& irr() const { return irr_; }
  /// 0 when the value is plain rational, otherwise the shared radicand.
  long long radicand() const { return m_; }

  bool is_zero() const { return rat_.is_zero() && irr_.is_zero(); }
  bool is_rational() const { return irr_.is_zero(); }
  bool is_one() const { return irr_.is_zero() && rat_.is_one(); }

  friend QuadExt operator+(const QuadExt& a, const QuadExt& b) {
    long long m = joint_radicand(a, b);
    return QuadExt(a.rat_ + b.rat_, a.irr_ + b.irr_, m);
  }
  friend QuadExt operator-(const QuadExt& a, const QuadExt& b) {
    long long m = joint_radicand(a, b);
    return QuadExt(a.rat_ - b.rat_, a.irr_ - b.irr_, m);
  }
  QuadExt operator-() const { return QuadExt(-rat_, -irr_, m_); }

  // (a + b sqrt(m)) (c + d sqrt(m)) = (ac + bdm) + (ad + bc) sqrt(m)
  friend QuadExt operator*(const QuadExt& a, const QuadExt& b) {
    long long m = joint_radicand(a, b);
    return QuadExt(a.rat_ * b.rat_ + a.irr_ * b.irr_ * Rational(m),
                   a.rat_ * b.irr_ + a.irr_ * b.rat_, m);
  }

  /// Exact division, rationalizing by the conjugate. The denominator norm
  /// c^2 - d^2 m vanishes only for c == d == 0 since sqrt(m) is irrational.
  friend QuadExt operator/(const QuadExt& a, const QuadExt& b) {
    if (b.is_zero()) throw Error("division by zero scalar");
    long long m = joint_radicand(a, b);
    Rational norm = b.rat_ * b.rat_ - b.irr_ * b.irr_ * Rational(m);
    QuadExt conj(b.rat_, -b.irr_, b.m_);
    QuadExt prod = a * conj;
    return QuadExt(prod.rat_ / norm, prod.irr_ / norm, m);
  }

  QuadExt& operator+=(const QuadExt& o) { return *this = *this + o; }
  QuadExt& operator-=(const QuadExt& o) { return *this = *this - o; }
  QuadExt& operator*=(const QuadExt& o) { return *this = *this * o; }
  QuadExt& operator/=(const QuadExt& o) { return *this = *this / o; }

  friend bool operator==(const QuadExt& a, const QuadExt& b) {
    if (a.rat_ != b.rat_ || a.irr_ != b.irr_) return false;
    return a.irr_.is_zero() || a.m_ == b.m_;
  }
  friend bool operator!=(const QuadExt& a, const QuadExt& b) { return !(a == b); }

  /// Exact sign of the real number a + b*sqrt(m), by case analysis on the
  /// signs of a and b and integer comparison of a^2 against b^2 m. Never
  /// consults floating point.
  int sign() const {
    const int sa = rat_.sign();
    const int sb = irr_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare magnitudes a^2 vs b^2 m. Equality would force
    // sqrt(m) rational, so it cannot occur here.
    const int cmp = compare(rat_ * rat_, irr_ * irr_ * Rational(m_));
    if (cmp == 0) throw Error("non-square-free radicand detected in sign computation");
    return cmp > 0 ? sa : sb;
  }

  QuadExt pow(unsigned e) const {
    QuadExt r(1), base = *this;
    while (e) {
      if (e & 1u) r *= base;
      base *= base;
      e >>= 1u;
    }
    return r;
  }

  double to_double() const {
    double v = rat_.to_double();
    if (!irr_.is_zero()) v += irr_.to_double() * std::sqrt(static_cast<double>(m_));
    return v;
  }

  /// Renders in the expression grammar, e.g. "3/2", "sqrt(2)", "1-2*sqrt(2)".
  std::string to_string() const {
    if (irr_.is_zero()) return rat_.to_string();
    std::string root = "sqrt(" + std::to_string(m_) + ")";
    std::string irr_part;
    if (irr_.is_one()) {
      irr_part = root;
    } else if (irr_ == Rational(-1)) {
      irr_part = "-" + root;
    } else {
      irr_part = irr_.to_string() + "*" + root;
    }
    if (rat_.is_zero()) return irr_part;
    if (irr_.sign() > 0) return rat_.to_string() + "+" + irr_part;
    return rat_.to_string() + irr_part;  // irr_part already carries the minus
  }

 private:
  static long long joint_radicand(const QuadExt& a, const QuadExt& b) {
    if (a.m_ == 0) return b.m_;
    if (b.m_ == 0) return a.m_;
    if (a.m_ != b.m_) {
      throw Error("radicand mismatch: sqrt(" + std::to_string(a.m_) + ") vs sqrt(" +
                  std::to_string(b.m_) + ")");
    }
    return a.m_;
  }

  Rational rat_;
  Rational irr_;
  long long m_;
};

inline int sign(const QuadExt& a) { return a.sign(); }

/// Total order used for canonical sorting (not a field order on mixed
/// radicands; callers only compare scalars from one computation).
inline int compare(const QuadExt& a, const QuadExt& b) {
  if (a == b) return 0;
  return (a - b).sign();
}

}  // namespace oscidecay
