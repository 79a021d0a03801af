#pragma once

#include <cstddef>
#include <vector>

#include "otstruct/measures.hpp"
#include "otstruct/plan.hpp"
#include "otstruct/root_sum.hpp"

namespace otstruct {

struct SolveResult {
  TransportPlan plan;
  DualPotentials potentials;
  RootSum objective;
  std::size_t pivots = 0;
};

/// Exact transportation simplex: northwest-corner start, Bland's rule for
/// entering and leaving cells. The returned plan is a vertex of the
/// transportation polytope (forest support, at most m + n - 1 entries) and
/// the potentials certify optimality by complementary slackness.
///
/// Throws UnsupportedCost when the cost exponent leaves the root field.
SolveResult solve_optimal(const Instance& instance);

struct BruteForceResult {
  RootSum optimum;
  std::size_t minimal_support = 0;
  /// Every optimal plan of minimal support, sorted by entry list.
  std::vector<TransportPlan> minimal_plans;
  /// Number of distinct vertices of the transportation polytope visited.
  std::size_t vertices = 0;
};

inline constexpr std::size_t kDefaultOracleGuard = 30;

/// Exhaustive oracle: enumerates every spanning tree of the complete
/// bipartite graph, solves the plan each one determines, and keeps the
/// nonnegative ones. Every vertex of the polytope and every minimal-support
/// optimal plan arises this way. Requires m * n <= guard.
BruteForceResult brute_force_optimal(const Instance& instance, std::size_t guard = kDefaultOracleGuard);

}  // namespace otstruct
