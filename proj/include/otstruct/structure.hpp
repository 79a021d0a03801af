#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "otstruct/measures.hpp"
#include "otstruct/plan.hpp"
#include "otstruct/solver.hpp"

namespace otstruct {

/// Split of a plan into two push-forwards:
///   plan = (Id, h1)# mu_d + (h2, Id)# nu_d,
///   mu = mu_d + mu_c,  nu = nu_d + nu_c.
/// Weight vectors are dense (length m or n); the support of a part is the set
/// of its nonzero entries. h1 is defined exactly on spt(mu_d), h2 exactly on
/// spt(nu_d).
struct DiffusiveModel {
  std::vector<Rational> mu_d, mu_c;
  std::vector<Rational> nu_d, nu_c;
  std::vector<std::optional<std::size_t>> h1;  // row -> column
  std::vector<std::optional<std::size_t>> h2;  // column -> row

  DiffusiveModel() = default;
  DiffusiveModel(std::size_t m, std::size_t n);

  std::size_t rows() const { return mu_d.size(); }
  std::size_t cols() const { return nu_d.size(); }
  std::size_t diffusive_atoms() const;
  /// mu_d + mu_c and nu_d + nu_c.
  std::vector<Rational> mu() const;
  std::vector<Rational> nu() const;
  /// Nonnegative parts, maps defined exactly on the diffusive supports, map
  /// targets in range.
  bool consistent() const;

  friend bool operator==(const DiffusiveModel&, const DiffusiveModel&) = default;
};

enum class PeelBranch {
  RowLeafEqual,     // mu_x = pi_xy = nu_y on the chosen row leaf
  ColumnLeafEqual,  // nu_y = pi_xy = mu_x on the chosen column leaf
  DoubleLeaf,       // strict row leaf and strict column leaf peeled together
  RowLeafOnly,      // no column leaf exists (more rows than columns remain)
  ColumnLeafOnly,   // no row leaf exists
};

const char* to_string(PeelBranch branch);

struct LeafArc {
  std::size_t row = 0;
  std::size_t col = 0;
  Rational mass;
  friend bool operator==(const LeafArc&, const LeafArc&) = default;
};

struct PeelStep {
  PeelBranch branch = PeelBranch::RowLeafEqual;
  std::optional<LeafArc> row_leaf;     // (x_bar, y_bar): row x_bar has one partner
  std::optional<LeafArc> column_leaf;  // (x_under, y_under): column y_under has one partner
  std::vector<Rational> residual_mu;   // after the step
  std::vector<Rational> residual_nu;
};

struct PeelTrace {
  std::vector<Rational> initial_mu;
  std::vector<Rational> initial_nu;
  std::vector<PeelStep> steps;
};

struct Decomposition {
  DiffusiveModel model;
  PeelTrace trace;
};

/// Leaf peeling on a forest-supported plan. Leaves are chosen by smallest
/// index; a row-leaf equality is preferred over a column-leaf equality, which
/// is preferred over the double-leaf step. Marginals are the plan's own.
///
/// Throws EmptyPlan for a plan without entries and CyclicSupport when the
/// support graph has a cycle.
Decomposition decompose(const TransportPlan& plan);

/// sum_x mu_d[x] delta_(x, h1 x) + sum_y nu_d[y] delta_(h2 y, y).
TransportPlan reconstruct(const DiffusiveModel& model);

/// Keeps the entries whose cells are listed; other cells are dropped.
/// Cells not in the support are ignored.
TransportPlan restrict(const TransportPlan& plan, const std::set<std::pair<std::size_t, std::size_t>>& keep);

/// Reduces an optimal plan's support without changing its cost: cancels every
/// support cycle, then pivots in zero-reduced-cost cells whenever the pivot
/// removes at least two support cells. The result is forest-supported.
///
/// Throws NotOptimal when complementary slackness fails for the input.
TransportPlan minimize_support(const TransportPlan& plan, const DualPotentials& potentials, const Instance& instance);

enum class TrimStatus { Trim, NotTrim, Unverifiable };

const char* to_string(TrimStatus status);

struct TrimVerdict {
  TrimStatus status = TrimStatus::Unverifiable;
  std::optional<TransportPlan> witness;  // smaller-support optimal plan
  std::optional<std::size_t> minimal_support;
  /// False when the plan's cost exceeds the oracle optimum.
  bool optimal = true;
};

/// Oracle-backed trimness: compares the plan support with the minimal support
/// over all optimal plans. Unverifiable when m * n exceeds the guard.
TrimVerdict is_trim_certified(const TransportPlan& plan, const Instance& instance,
                              std::size_t guard = kDefaultOracleGuard);

/// Reduces an instance to a restriction's marginals: rows/cols with zero mass
/// are dropped, and the returned index maps give the original indices.
struct SubInstance {
  Instance instance;
  TransportPlan plan;
  std::vector<std::size_t> row_map;
  std::vector<std::size_t> col_map;
};

/// The sub-problem between the marginals of `plan` (which must use the
/// instance's index space), with the plan re-indexed onto it.
SubInstance marginal_subproblem(const TransportPlan& plan, const Instance& instance);

}  // namespace otstruct
