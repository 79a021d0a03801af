#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "otstruct/measures.hpp"
#include "otstruct/rational.hpp"
#include "otstruct/root_sum.hpp"

namespace otstruct {

struct PlanEntry {
  std::size_t i = 0;
  std::size_t j = 0;
  Rational mass;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

/// Sparse transport plan. Entries are kept sorted by (i, j), unique, and
/// strictly positive.
class TransportPlan {
 public:
  TransportPlan() = default;
  TransportPlan(std::size_t m, std::size_t n) : m_(m), n_(n) {}
  /// Merges duplicate cells, drops zero cells; rejects negative masses and
  /// out-of-range indices.
  TransportPlan(std::size_t m, std::size_t n, std::vector<PlanEntry> entries);

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  const std::vector<PlanEntry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Rational mass_at(std::size_t i, std::size_t j) const;

  std::vector<Rational> row_sums() const;
  std::vector<Rational> col_sums() const;

  friend bool operator==(const TransportPlan&, const TransportPlan&) = default;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::vector<PlanEntry> entries_;
};

struct DualPotentials {
  std::vector<RootSum> u;
  std::vector<RootSum> v;
};

/// Bipartite view of a plan's support. Row node i is vertex i, column node j
/// is vertex m + j.
class SupportGraph {
 public:
  struct Arc {
    std::size_t other;  // vertex id of the opposite endpoint
    std::size_t entry;  // index into plan.entries()
  };

  explicit SupportGraph(const TransportPlan& plan);

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  const std::vector<Arc>& arcs_of(std::size_t vertex) const { return adjacency_[vertex]; }
  std::size_t row_degree(std::size_t i) const { return adjacency_[i].size(); }
  std::size_t col_degree(std::size_t j) const { return adjacency_[m_ + j].size(); }

  bool is_forest() const { return !find_cycle().has_value(); }
  /// Entry indices of some cycle, in traversal order (alternating row/col).
  std::optional<std::vector<std::size_t>> find_cycle() const;
  /// Entry indices on the tree path from vertex `from` to vertex `to`, in
  /// order; nullopt if they lie in different components. Requires a forest.
  std::optional<std::vector<std::size_t>> forest_path(std::size_t from, std::size_t to) const;

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<Arc>> adjacency_;
};

/// Row and column sums.
std::pair<std::vector<Rational>, std::vector<Rational>> marginals(const TransportPlan& plan);

/// sum c_ij * pi_ij, exact.
RootSum transport_cost(const TransportPlan& plan, const Instance& instance);

/// True when the plan's marginals are exactly the instance's measures.
bool has_instance_marginals(const TransportPlan& plan, const Instance& instance);

/// Checks u_i + v_j <= c_ij everywhere and equality on the plan support.
bool complementary_slackness_holds(const TransportPlan& plan, const DualPotentials& potentials,
                                   const Instance& instance);

/// Precomputed exact costs of an instance in the root field, row-major.
class CostTable {
 public:
  explicit CostTable(const Instance& instance);
  const RootSum& at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<RootSum> values_;
};

}  // namespace otstruct
