#include "otstruct/plan.hpp"

#include <algorithm>
#include <functional>

#include "otstruct/errors.hpp"

namespace otstruct {

TransportPlan::TransportPlan(std::size_t m, std::size_t n, std::vector<PlanEntry> entries) : m_(m), n_(n) {
  for (const auto& e : entries) {
    if (e.i >= m || e.j >= n) throw DimensionMismatch("plan entry index out of range");
    if (e.mass.sign() < 0) throw ValidationError("plan entry mass must be nonnegative");
  }
  std::sort(entries.begin(), entries.end(),
            [](const PlanEntry& a, const PlanEntry& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (auto& e : entries) {
    if (!entries_.empty() && entries_.back().i == e.i && entries_.back().j == e.j) {
      entries_.back().mass += e.mass;
    } else {
      entries_.push_back(std::move(e));
    }
  }
  std::erase_if(entries_, [](const PlanEntry& e) { return e.mass.is_zero(); });
}

Rational TransportPlan::mass_at(std::size_t i, std::size_t j) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{i, j},
                             [](const PlanEntry& e, const std::pair<std::size_t, std::size_t>& key) {
                               return std::tie(e.i, e.j) < std::tie(key.first, key.second);
                             });
  if (it != entries_.end() && it->i == i && it->j == j) return it->mass;
  return Rational(0);
}

std::vector<Rational> TransportPlan::row_sums() const {
  std::vector<Rational> out(m_);
  for (const auto& e : entries_) out[e.i] += e.mass;
  return out;
}

std::vector<Rational> TransportPlan::col_sums() const {
  std::vector<Rational> out(n_);
  for (const auto& e : entries_) out[e.j] += e.mass;
  return out;
}

SupportGraph::SupportGraph(const TransportPlan& plan)
    : m_(plan.rows()), n_(plan.cols()), adjacency_(plan.rows() + plan.cols()) {
  const auto& entries = plan.entries();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    adjacency_[entries[k].i].push_back({m_ + entries[k].j, k});
    adjacency_[m_ + entries[k].j].push_back({entries[k].i, k});
  }
}

std::optional<std::vector<std::size_t>> SupportGraph::find_cycle() const {
  const std::size_t vertices = adjacency_.size();
  std::vector<int> state(vertices, 0);  // 0 unvisited, 1 on stack, 2 done
  std::vector<std::size_t> parent_vertex(vertices), parent_entry(vertices);
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  for (std::size_t root = 0; root < vertices; ++root) {
    if (state[root] != 0) continue;
    // Iterative DFS with explicit cursor per vertex.
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    parent_vertex[root] = kNone;
    parent_entry[root] = kNone;
    state[root] = 1;
    while (!stack.empty()) {
      auto& [v, cursor] = stack.back();
      if (cursor == adjacency_[v].size()) {
        state[v] = 2;
        stack.pop_back();
        continue;
      }
      const Arc arc = adjacency_[v][cursor++];
      if (arc.entry == parent_entry[v]) continue;
      if (state[arc.other] == 1) {
        // Back arc closes a cycle: walk parents from v up to arc.other.
        std::vector<std::size_t> cycle;
        std::size_t w = v;
        while (w != arc.other) {
          cycle.push_back(parent_entry[w]);
          w = parent_vertex[w];
        }
        std::reverse(cycle.begin(), cycle.end());
        cycle.push_back(arc.entry);
        return cycle;
      }
      if (state[arc.other] == 0) {
        state[arc.other] = 1;
        parent_vertex[arc.other] = v;
        parent_entry[arc.other] = arc.entry;
        stack.emplace_back(arc.other, 0);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::size_t>> SupportGraph::forest_path(std::size_t from, std::size_t to) const {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent_vertex(adjacency_.size(), kNone), parent_entry(adjacency_.size(), kNone);
  std::vector<char> seen(adjacency_.size(), 0);
  std::vector<std::size_t> queue{from};
  seen[from] = 1;
  for (std::size_t head = 0; head < queue.size() && !seen[to]; ++head) {
    const std::size_t v = queue[head];
    for (const Arc& arc : adjacency_[v]) {
      if (seen[arc.other]) continue;
      seen[arc.other] = 1;
      parent_vertex[arc.other] = v;
      parent_entry[arc.other] = arc.entry;
      queue.push_back(arc.other);
    }
  }
  if (!seen[to]) return std::nullopt;
  std::vector<std::size_t> path;
  for (std::size_t w = to; w != from; w = parent_vertex[w]) path.push_back(parent_entry[w]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::pair<std::vector<Rational>, std::vector<Rational>> marginals(const TransportPlan& plan) {
  return {plan.row_sums(), plan.col_sums()};
}

RootSum transport_cost(const TransportPlan& plan, const Instance& instance) {
  if (plan.rows() != instance.rows() || plan.cols() != instance.cols()) {
    throw DimensionMismatch("plan is " + std::to_string(plan.rows()) + "x" + std::to_string(plan.cols()) +
                            ", instance is " + std::to_string(instance.rows()) + "x" +
                            std::to_string(instance.cols()));
  }
  RootSum total;
  for (const auto& e : plan.entries()) total += instance.cost(e.i, e.j).to_root_sum() * e.mass;
  return total;
}

bool has_instance_marginals(const TransportPlan& plan, const Instance& instance) {
  if (plan.rows() != instance.rows() || plan.cols() != instance.cols()) return false;
  return plan.row_sums() == instance.mu().masses() && plan.col_sums() == instance.nu().masses();
}

bool complementary_slackness_holds(const TransportPlan& plan, const DualPotentials& potentials,
                                   const Instance& instance) {
  const std::size_t m = instance.rows(), n = instance.cols();
  if (plan.rows() != m || plan.cols() != n || potentials.u.size() != m || potentials.v.size() != n) return false;
  const CostTable costs(instance);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const RootSum reduced = costs.at(i, j) - potentials.u[i] - potentials.v[j];
      if (reduced.sign() < 0) return false;
    }
  }
  for (const auto& e : plan.entries()) {
    if (!(costs.at(e.i, e.j) - potentials.u[e.i] - potentials.v[e.j]).is_zero()) return false;
  }
  return true;
}

CostTable::CostTable(const Instance& instance) : m_(instance.rows()), n_(instance.cols()) {
  values_.reserve(m_ * n_);
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) values_.push_back(instance.cost(i, j).to_root_sum());
  }
}

}  // namespace otstruct
