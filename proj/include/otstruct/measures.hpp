#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "otstruct/rational.hpp"
#include "otstruct/root_sum.hpp"

namespace otstruct {

struct Point {
  std::vector<Rational> coords;
  std::optional<std::string> label;

  std::size_t dimension() const { return coords.size(); }
  friend bool operator==(const Point& a, const Point& b) { return a.coords == b.coords; }
};

/// Finite positive measure. Points are optional: instances with an explicit
/// cost matrix may carry bare atoms.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  /// Validates positivity, distinct points and a shared dimension.
  DiscreteMeasure(std::vector<Point> points, std::vector<Rational> masses);
  /// Atoms without coordinates.
  explicit DiscreteMeasure(std::vector<Rational> masses);

  std::size_t size() const { return masses_.size(); }
  bool has_points() const { return !points_.empty(); }
  std::size_t dimension() const { return points_.empty() ? 0 : points_.front().dimension(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<Rational>& masses() const { return masses_; }
  const Rational& mass(std::size_t i) const { return masses_[i]; }
  Rational total_mass() const;

 private:
  std::vector<Point> points_;
  std::vector<Rational> masses_;
};

/// A cost value base^exponent with base >= 0 and exponent > 0.
///
/// Euclidean costs store the squared distance with exponent p/2, so cost
/// values are exact even where the real number is irrational.
class CostValue {
 public:
  CostValue() = default;
  CostValue(Rational base, Rational exponent);
  static CostValue rational(Rational value) { return CostValue(std::move(value), Rational(1)); }

  const Rational& base() const { return base_; }
  const Rational& exponent() const { return exponent_; }

  /// (base^exponent)^p.
  CostValue pow(const Rational& p) const;
  /// Exact element of the root field; requires 2*exponent to be an integer.
  RootSum to_root_sum() const;
  bool representable() const;
  double to_double() const;
  std::string str() const;

 private:
  Rational base_{0};
  Rational exponent_{1};
};

/// Exact total order on cost values, by cross-powering when exponents differ.
std::strong_ordering compare_costs(const CostValue& a, const CostValue& b);
inline bool operator==(const CostValue& a, const CostValue& b) { return compare_costs(a, b) == 0; }
inline std::strong_ordering operator<=>(const CostValue& a, const CostValue& b) { return compare_costs(a, b); }

struct CostSpec {
  enum class Kind { EuclideanPower, ExplicitMatrix };
  Kind kind = Kind::EuclideanPower;
  /// Euclidean: cost = |x - y|^p. Matrix: cost = entry^p (p = 1 as loaded).
  Rational p{1};
  std::vector<std::vector<Rational>> values;

  static CostSpec euclidean(Rational p);
  static CostSpec matrix(std::vector<std::vector<Rational>> values);
  /// The cost c^q for this cost c.
  CostSpec powered(const Rational& q) const;
  bool is_euclidean() const { return kind == Kind::EuclideanPower; }
};

/// Validated transport problem. Costs are precomputed on construction.
class Instance {
 public:
  Instance(DiscreteMeasure mu, DiscreteMeasure nu, CostSpec cost);

  const DiscreteMeasure& mu() const { return mu_; }
  const DiscreteMeasure& nu() const { return nu_; }
  const CostSpec& cost_spec() const { return cost_; }
  std::size_t rows() const { return mu_.size(); }
  std::size_t cols() const { return nu_.size(); }

  const CostValue& cost(std::size_t i, std::size_t j) const { return costs_[i * nu_.size() + j]; }
  /// Same supports, cost replaced by `spec`.
  Instance with_cost(CostSpec spec) const;

 private:
  DiscreteMeasure mu_;
  DiscreteMeasure nu_;
  CostSpec cost_;
  std::vector<CostValue> costs_;
};

CostValue cost_value(const Instance& instance, std::size_t i, std::size_t j);

Rational squared_distance(const Point& a, const Point& b);

}  // namespace otstruct
