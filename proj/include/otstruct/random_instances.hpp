#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "otstruct/measures.hpp"
#include "otstruct/plan.hpp"

namespace otstruct {

/// Seeded source of exact random instances. Sequences depend only on the
/// seed: bounded integers are drawn by rejection from the raw 64-bit engine
/// rather than through the library's distributions, whose output is
/// implementation-defined.
class InstanceGenerator {
 public:
  struct Options {
    std::size_t dimension = 2;
    long grid = 6;         // coordinates k / scale with 0 <= k <= grid
    long scale = 2;
    long max_weight = 9;   // masses drawn from 1..max_weight, then normalized
  };

  explicit InstanceGenerator(std::uint64_t seed) : engine_(seed) {}
  InstanceGenerator(std::uint64_t seed, Options options) : engine_(seed), options_(options) {}

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

  /// Probability vector of `count` atoms with a common denominator.
  std::vector<Rational> masses(std::size_t count);
  /// Distinct grid points.
  std::vector<Point> points(std::size_t count);

  /// Euclidean instance with |x - y|^p costs.
  Instance euclidean(std::size_t m, std::size_t n, const Rational& p);
  /// Explicit matrix of integer costs in [0, max_cost].
  Instance matrix(std::size_t m, std::size_t n, long max_cost = 9);
  /// A single atom of mass 1 on each side, at distinct points.
  Instance singleton_pair(const Rational& p);

  /// Random forest-supported plan on m x n atoms whose support touches
  /// every row and column: a random spanning tree with some arcs removed.
  TransportPlan forest_plan(std::size_t m, std::size_t n);

 private:
  std::mt19937_64 engine_;
  Options options_;
};

}  // namespace otstruct
