#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "otstruct/rational.hpp"

namespace otstruct {

/// Exact real number of the form  sum_k q_k * sqrt(r_k)  with rational q_k and
/// pairwise distinct squarefree positive integers r_k (r = 1 is the rational
/// part).
///
/// Square roots of distinct squarefree integers are linearly independent over
/// the rationals, so a value is zero iff every coefficient is zero. Signs of
/// nonzero values are decided by interval evaluation at increasing precision,
/// which always terminates. No comparison ever rests on a rounded value.
///
/// Transport objectives under odd Euclidean powers live in this field.
class RootSum {
 public:
  struct Term {
    mpz_class radicand;  // squarefree, >= 1
    Rational coeff;      // never zero
  };

  RootSum() = default;
  RootSum(const Rational& r);  // NOLINT(implicit)
  RootSum(long v) : RootSum(Rational(v)) {}  // NOLINT(implicit)

  /// sqrt(r) for r >= 0.
  static RootSum sqrt_of(const Rational& r);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  /// The value when it is rational.
  std::optional<Rational> as_rational() const;

  /// Exact sign: -1, 0 or +1.
  int sign() const;
  double to_double() const;
  /// Decimal approximation with the requested number of significant digits.
  std::string to_decimal(int digits = 30) const;
  /// Canonical exact form, e.g. "3/4 + 1/4*sqrt(2)".
  std::string str() const;

  RootSum& operator+=(const RootSum& o);
  RootSum& operator-=(const RootSum& o);
  RootSum& operator*=(const Rational& s);

  friend RootSum operator+(RootSum a, const RootSum& b) { return a += b; }
  friend RootSum operator-(RootSum a, const RootSum& b) { return a -= b; }
  friend RootSum operator*(RootSum a, const Rational& s) { return a *= s; }
  friend RootSum operator*(const Rational& s, RootSum a) { return a *= s; }
  RootSum operator-() const;

  friend bool operator==(const RootSum& a, const RootSum& b);
  friend std::strong_ordering operator<=>(const RootSum& a, const RootSum& b);

 private:
  // Sorted by radicand.
  std::vector<Term> terms_;
  void add_scaled(const RootSum& o, int direction);
};

std::ostream& operator<<(std::ostream& os, const RootSum& v);

/// Splits n > 0 as s^2 * k with k squarefree; returns (s, k).
std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& n);

}  // namespace otstruct
