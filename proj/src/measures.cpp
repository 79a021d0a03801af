#include "otstruct/measures.hpp"

#include <cmath>
#include <set>

#include "otstruct/errors.hpp"

namespace otstruct {

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points, std::vector<Rational> masses)
    : points_(std::move(points)), masses_(std::move(masses)) {
  if (points_.size() != masses_.size()) {
    throw ValidationError("measure has " + std::to_string(points_.size()) + " points but " +
                          std::to_string(masses_.size()) + " masses");
  }
  if (masses_.empty()) throw ValidationError("measure has no atoms");
  for (const auto& m : masses_) {
    if (m.sign() <= 0) throw ValidationError("atom mass must be positive, got " + m.str());
  }
  const std::size_t dim = points_.front().dimension();
  if (dim == 0) throw ValidationError("points must have dimension >= 1");
  std::set<std::vector<mpq_class>> seen;
  for (const auto& p : points_) {
    if (p.dimension() != dim) throw ValidationError("points of one measure differ in dimension");
    std::vector<mpq_class> key;
    key.reserve(dim);
    for (const auto& c : p.coords) key.push_back(c.raw());
    if (!seen.insert(std::move(key)).second) throw ValidationError("duplicate support point");
  }
}

DiscreteMeasure::DiscreteMeasure(std::vector<Rational> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw ValidationError("measure has no atoms");
  for (const auto& m : masses_) {
    if (m.sign() <= 0) throw ValidationError("atom mass must be positive, got " + m.str());
  }
}

Rational DiscreteMeasure::total_mass() const {
  Rational total;
  for (const auto& m : masses_) total += m;
  return total;
}

CostValue::CostValue(Rational base, Rational exponent) : base_(std::move(base)), exponent_(std::move(exponent)) {
  if (base_.sign() < 0) throw ValidationError("cost base must be nonnegative");
  if (exponent_.sign() <= 0) throw ValidationError("cost exponent must be positive");
}

CostValue CostValue::pow(const Rational& p) const { return CostValue(base_, exponent_ * p); }

bool CostValue::representable() const { return (exponent_ * Rational(2)).is_integer(); }

RootSum CostValue::to_root_sum() const {
  const Rational twice = exponent_ * Rational(2);
  if (!twice.is_integer() || !twice.numerator().fits_ulong_p()) {
    throw UnsupportedCost("cost exponent " + exponent_.str() + " has no exact root-field representation");
  }
  const unsigned long k = twice.numerator().get_ui();
  RootSum out(base_.pow(k / 2));
  if (k % 2 == 1) {
    RootSum root = RootSum::sqrt_of(base_);
    if (out.is_zero() || root.is_zero()) return RootSum();
    const Rational scale = *out.as_rational();
    return root * scale;
  }
  return out;
}

double CostValue::to_double() const { return std::pow(base_.to_double(), exponent_.to_double()); }

std::string CostValue::str() const {
  if (representable()) return to_root_sum().str();
  return "(" + base_.str() + ")^(" + exponent_.str() + ")";
}

std::strong_ordering compare_costs(const CostValue& a, const CostValue& b) {
  const int za = a.base().sign(), zb = b.base().sign();
  if (za == 0 || zb == 0) return za <=> zb;
  if (a.exponent() == b.exponent()) return a.base() <=> b.base();
  // a^(n1/d1) vs b^(n2/d2)  <=>  a^(n1*d2) vs b^(n2*d1)
  const mpz_class left = a.exponent().numerator() * b.exponent().denominator();
  const mpz_class right = b.exponent().numerator() * a.exponent().denominator();
  if (!left.fits_ulong_p() || !right.fits_ulong_p()) {
    throw UnsupportedCost("cost exponents too large for exact comparison");
  }
  return a.base().pow(left.get_ui()) <=> b.base().pow(right.get_ui());
}

CostSpec CostSpec::euclidean(Rational p) {
  if (p.sign() <= 0) throw ValidationError("Euclidean exponent must be positive");
  CostSpec spec;
  spec.kind = Kind::EuclideanPower;
  spec.p = std::move(p);
  return spec;
}

CostSpec CostSpec::matrix(std::vector<std::vector<Rational>> values) {
  CostSpec spec;
  spec.kind = Kind::ExplicitMatrix;
  spec.values = std::move(values);
  return spec;
}

CostSpec CostSpec::powered(const Rational& q) const {
  if (q.sign() <= 0) throw ValidationError("cost power must be positive");
  CostSpec out = *this;
  out.p = p * q;
  return out;
}

Rational squared_distance(const Point& a, const Point& b) {
  if (a.dimension() != b.dimension()) throw DimensionMismatch("points differ in dimension");
  Rational sum;
  for (std::size_t k = 0; k < a.dimension(); ++k) {
    const Rational d = a.coords[k] - b.coords[k];
    sum += d * d;
  }
  return sum;
}

Instance::Instance(DiscreteMeasure mu, DiscreteMeasure nu, CostSpec cost)
    : mu_(std::move(mu)), nu_(std::move(nu)), cost_(std::move(cost)) {
  if (mu_.size() == 0 || nu_.size() == 0) throw ValidationError("instance measures must be nonempty");
  if (mu_.total_mass() != nu_.total_mass()) {
    throw ValidationError("total masses differ: " + mu_.total_mass().str() + " vs " + nu_.total_mass().str());
  }
  if (cost_.p.sign() <= 0) throw ValidationError("cost exponent must be positive");
  const std::size_t m = mu_.size(), n = nu_.size();
  costs_.reserve(m * n);
  if (cost_.is_euclidean()) {
    if (!mu_.has_points() || !nu_.has_points()) throw ValidationError("Euclidean cost needs support points");
    if (mu_.dimension() != nu_.dimension()) throw ValidationError("mu and nu points differ in dimension");
    const Rational half_p = cost_.p / Rational(2);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        costs_.emplace_back(squared_distance(mu_.points()[i], nu_.points()[j]), half_p);
      }
    }
  } else {
    if (cost_.values.size() != m) throw ValidationError("cost matrix row count differs from #spt(mu)");
    for (const auto& row : cost_.values) {
      if (row.size() != n) throw ValidationError("cost matrix column count differs from #spt(nu)");
      for (const auto& v : row) {
        if (v.sign() < 0) throw ValidationError("cost entries must be nonnegative");
        costs_.emplace_back(v, cost_.p);
      }
    }
  }
}

Instance Instance::with_cost(CostSpec spec) const { return Instance(mu_, nu_, std::move(spec)); }

CostValue cost_value(const Instance& instance, std::size_t i, std::size_t j) { return instance.cost(i, j); }

}  // namespace otstruct
