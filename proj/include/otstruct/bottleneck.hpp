#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "otstruct/measures.hpp"
#include "otstruct/plan.hpp"

namespace otstruct {

/// Hall-type violation: the rows in `rows` carry more mass than all columns
/// reachable from them through arcs of cost <= `threshold`.
struct HallCut {
  CostValue threshold;
  std::vector<std::size_t> rows;
  Rational deficit;  // mu(rows) - nu(neighbours) > 0
};

struct ThresholdCertificate {
  CostValue threshold;
  /// Position of the threshold in the ascending list of distinct arc costs.
  std::size_t threshold_index = 0;
  std::size_t distinct_costs = 0;
  /// Feasible plan using only arcs of cost <= threshold.
  TransportPlan witness;
  /// Evidence that the next lower distinct cost is infeasible; absent when
  /// the threshold is the smallest arc cost.
  std::optional<HallCut> below;
};

/// Ascending distinct arc costs, deduplicated with exact comparison.
std::vector<CostValue> distinct_costs(const Instance& instance);

/// Bottleneck distance: the smallest arc cost t such that mu can be moved to
/// nu using only arcs of cost <= t. Binary search over distinct costs, each
/// step decided by an exact integer max-flow.
ThresholdCertificate w_infinity(const Instance& instance);

inline constexpr std::size_t kDefaultHallGuard = 12;

/// Independent oracle: for each candidate threshold, checks
/// mu(A) <= nu(N_t(A)) for every subset A of rows. Requires m <= guard.
CostValue w_infinity_bruteforce(const Instance& instance, std::size_t guard = kDefaultHallGuard);

struct PowerIdentityReport {
  Rational p;
  std::size_t index_base = 0;
  std::size_t index_powered = 0;
  CostValue threshold_base;
  CostValue threshold_powered;
  /// threshold_powered == threshold_base^p exactly.
  bool value_identity = false;
  bool holds() const { return index_base == index_powered && value_identity; }
};

/// Compares the bottleneck thresholds under c and under c^p.
PowerIdentityReport power_identity_check(const Instance& instance, const Rational& p);

/// Verifies a certificate independently: witness marginals, arc costs, and
/// the Hall cut below.
bool certificate_valid(const ThresholdCertificate& cert, const Instance& instance);

}  // namespace otstruct
