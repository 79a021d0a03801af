#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "otstruct/instance_io.hpp"
#include "otstruct/measures.hpp"
#include "otstruct/plan.hpp"

#ifndef OTSTRUCT_INSTANCE_DIR
#define OTSTRUCT_INSTANCE_DIR "instances"
#endif

namespace fixture {

using otstruct::CostSpec;
using otstruct::DiscreteMeasure;
using otstruct::Instance;
using otstruct::Point;
using otstruct::Rational;
using otstruct::TransportPlan;

inline Rational q(const char* text) { return Rational::parse(text); }

inline Point pt(std::initializer_list<long> coords) {
  Point p;
  for (long c : coords) p.coords.emplace_back(c);
  return p;
}

inline std::vector<Rational> qs(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(Rational::parse(t));
  return out;
}

inline Instance euclid(std::vector<Point> xs, std::vector<Rational> mu, std::vector<Point> ys, std::vector<Rational> nu,
                       long p) {
  return Instance(DiscreteMeasure(std::move(xs), std::move(mu)), DiscreteMeasure(std::move(ys), std::move(nu)),
                  CostSpec::euclidean(Rational(p)));
}

inline Instance matrix(std::vector<Rational> mu, std::vector<Rational> nu, std::vector<std::vector<Rational>> cost) {
  return Instance(DiscreteMeasure(std::move(mu)), DiscreteMeasure(std::move(nu)), CostSpec::matrix(std::move(cost)));
}

inline std::string instance_path(const std::string& file) { return std::string(OTSTRUCT_INSTANCE_DIR) + "/" + file; }

inline Instance load(const std::string& file) { return otstruct::load_instance(instance_path(file)); }

// The two-by-two trim plan of remark.json in instance order.
inline TransportPlan remark_plan() {
  return TransportPlan(2, 2, {{0, 0, Rational(1, 4)}, {0, 1, Rational(1, 4)}, {1, 1, Rational(1, 2)}});
}

}  // namespace fixture
