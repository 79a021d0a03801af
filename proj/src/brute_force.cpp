#include <cstdint>
#include <map>
#include <numeric>

#include "otstruct/errors.hpp"
#include "otstruct/solver.hpp"

namespace otstruct {

namespace {

// Masses scaled by the lcm of their denominators become integers; the
// enumeration runs in the narrowest integer type that holds the totals.
struct ScaledMasses {
  mpz_class scale;
  std::vector<mpz_class> supply;
  std::vector<mpz_class> demand;
};

ScaledMasses scale_masses(const Instance& instance) {
  ScaledMasses out;
  out.scale = 1;
  for (const auto& m : instance.mu().masses()) mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), m.denominator().get_mpz_t());
  for (const auto& m : instance.nu().masses()) mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), m.denominator().get_mpz_t());
  for (const auto& m : instance.mu().masses()) out.supply.push_back(m.numerator() * (out.scale / m.denominator()));
  for (const auto& m : instance.nu().masses()) out.demand.push_back(m.numerator() * (out.scale / m.denominator()));
  return out;
}

template <typename Int>
Int convert(const mpz_class& z) {
  if constexpr (std::is_same_v<Int, mpz_class>) {
    return z;
  } else {
    return static_cast<Int>(z.get_si());
  }
}

template <typename Int>
mpz_class to_mpz(const Int& v) {
  if constexpr (std::is_same_v<Int, mpz_class>) {
    return v;
  } else {
    return mpz_class(static_cast<long>(v));
  }
}

// Enumerates spanning trees of K_{m,n} edge by edge with a rollback
// union-find; each tree's flow is forced and computed by leaf peeling.
template <typename Int>
class SpanningTreeEnumerator {
 public:
  SpanningTreeEnumerator(std::size_t m, std::size_t n, std::vector<Int> supply, std::vector<Int> demand)
      : m_(m), n_(n), supply_(std::move(supply)), demand_(std::move(demand)), parent_(m + n), size_(m + n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    tree_.resize(m + n - 1);
  }

  // Support (cell indices) -> positive integer flows of each vertex found.
  std::map<std::vector<std::size_t>, std::vector<Int>> run() {
    recurse(0, 0);
    return std::move(vertices_);
  }

 private:
  std::size_t find(std::size_t v) const {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }

  void recurse(std::size_t edge, std::size_t chosen) {
    const std::size_t needed = m_ + n_ - 1;
    if (chosen == needed) {
      evaluate();
      return;
    }
    const std::size_t edges = m_ * n_;
    if (edges - edge < needed - chosen) return;
    std::size_t a = find(edge / n_), b = find(m_ + edge % n_);
    if (a != b) {
      if (size_[a] < size_[b]) std::swap(a, b);
      parent_[b] = a;
      size_[a] += size_[b];
      tree_[chosen] = edge;
      recurse(edge + 1, chosen + 1);
      size_[a] -= size_[b];
      parent_[b] = b;
    }
    recurse(edge + 1, chosen);
  }

  void evaluate() {
    const std::size_t vertices = m_ + n_;
    std::vector<std::size_t> degree(vertices, 0);
    for (std::size_t e : tree_) {
      ++degree[e / n_];
      ++degree[m_ + e % n_];
    }
    std::vector<Int> residual(vertices);
    for (std::size_t i = 0; i < m_; ++i) residual[i] = supply_[i];
    for (std::size_t j = 0; j < n_; ++j) residual[m_ + j] = demand_[j];
    std::vector<char> edge_used(tree_.size(), 0);
    std::vector<Int> flow(tree_.size());
    std::vector<std::size_t> leaves;
    for (std::size_t v = 0; v < vertices; ++v) {
      if (degree[v] == 1) leaves.push_back(v);
    }
    std::size_t assigned = 0;
    while (!leaves.empty()) {
      const std::size_t v = leaves.back();
      leaves.pop_back();
      if (degree[v] != 1) continue;
      std::size_t k = 0;
      while (edge_used[k] || (v < m_ ? tree_[k] / n_ != v : m_ + tree_[k] % n_ != v)) ++k;
      edge_used[k] = 1;
      const std::size_t w = v < m_ ? m_ + tree_[k] % n_ : tree_[k] / n_;
      flow[k] = residual[v];
      if (flow[k] < 0) return;
      residual[w] -= flow[k];
      residual[v] = 0;
      --degree[v];
      if (--degree[w] == 1) leaves.push_back(w);
      ++assigned;
    }
    if (assigned != tree_.size()) return;
    for (const auto& r : residual) {
      if (r != 0) return;
    }
    std::vector<std::size_t> support;
    std::vector<Int> positive;
    for (std::size_t k = 0; k < tree_.size(); ++k) {
      if (flow[k] > 0) {
        support.push_back(tree_[k]);
        positive.push_back(flow[k]);
      }
    }
    vertices_.try_emplace(std::move(support), std::move(positive));
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<Int> supply_;
  std::vector<Int> demand_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> tree_;
  std::map<std::vector<std::size_t>, std::vector<Int>> vertices_;
};

template <typename Int>
BruteForceResult collect(const Instance& instance, const ScaledMasses& scaled) {
  const std::size_t m = instance.rows(), n = instance.cols();
  std::vector<Int> supply, demand;
  for (const auto& s : scaled.supply) supply.push_back(convert<Int>(s));
  for (const auto& d : scaled.demand) demand.push_back(convert<Int>(d));
  auto vertices = SpanningTreeEnumerator<Int>(m, n, std::move(supply), std::move(demand)).run();

  const CostTable costs(instance);
  BruteForceResult result;
  result.vertices = vertices.size();
  std::vector<std::pair<RootSum, TransportPlan>> scored;
  bool have_best = false;
  for (const auto& [support, flows] : vertices) {
    std::vector<PlanEntry> entries;
    RootSum cost;
    for (std::size_t k = 0; k < support.size(); ++k) {
      const std::size_t i = support[k] / n, j = support[k] % n;
      Rational mass(to_mpz(flows[k]), scaled.scale);
      cost += costs.at(i, j) * mass;
      entries.push_back({i, j, std::move(mass)});
    }
    if (!have_best || cost < result.optimum) {
      result.optimum = cost;
      have_best = true;
    }
    scored.emplace_back(std::move(cost), TransportPlan(m, n, std::move(entries)));
  }
  result.minimal_support = std::numeric_limits<std::size_t>::max();
  for (const auto& [cost, plan] : scored) {
    if (cost == result.optimum) result.minimal_support = std::min(result.minimal_support, plan.support_size());
  }
  for (auto& [cost, plan] : scored) {
    if (cost == result.optimum && plan.support_size() == result.minimal_support) {
      result.minimal_plans.push_back(std::move(plan));
    }
  }
  return result;
}

}  // namespace

BruteForceResult brute_force_optimal(const Instance& instance, std::size_t guard) {
  const std::size_t cells = instance.rows() * instance.cols();
  if (cells > guard) {
    throw InstanceTooLarge("brute-force oracle needs m*n <= " + std::to_string(guard) + ", got " +
                           std::to_string(cells));
  }
  const ScaledMasses scaled = scale_masses(instance);
  mpz_class total = 0;
  for (const auto& s : scaled.supply) total += s;
  if (total < mpz_class(std::numeric_limits<std::int64_t>::max() / 4)) return collect<std::int64_t>(instance, scaled);
  return collect<mpz_class>(instance, scaled);
}

}  // namespace otstruct
