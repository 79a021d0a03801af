#include "otstruct/solver.hpp"

#include <limits>

#include "otstruct/errors.hpp"

namespace otstruct {

namespace {

constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

struct BasicCell {
  std::size_t i;
  std::size_t j;
  Rational flow;
};

class TransportationSimplex {
 public:
  explicit TransportationSimplex(const Instance& instance)
      : m_(instance.rows()), n_(instance.cols()), costs_(instance), in_basis_(m_ * n_, kUnassigned) {
    northwest_corner(instance.mu().masses(), instance.nu().masses());
  }

  SolveResult run() {
    SolveResult result;
    for (;;) {
      compute_potentials();
      const std::size_t entering = find_entering();
      if (entering == kUnassigned) break;
      pivot(entering);
      ++result.pivots;
    }
    std::vector<PlanEntry> entries;
    for (const auto& cell : basis_) entries.push_back({cell.i, cell.j, cell.flow});
    result.plan = TransportPlan(m_, n_, std::move(entries));
    for (const auto& e : result.plan.entries()) result.objective += costs_.at(e.i, e.j) * e.mass;
    result.potentials = {u_, v_};
    return result;
  }

 private:
  void northwest_corner(std::vector<Rational> supply, std::vector<Rational> demand) {
    std::size_t i = 0, j = 0;
    while (i < m_ && j < n_) {
      const Rational x = min(supply[i], demand[j]);
      add_basic(i, j, x);
      supply[i] -= x;
      demand[j] -= x;
      if (supply[i].is_zero() && i + 1 < m_) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void add_basic(std::size_t i, std::size_t j, Rational flow) {
    in_basis_[i * n_ + j] = basis_.size();
    basis_.push_back({i, j, std::move(flow)});
  }

  // Tree adjacency: vertex k < m is row k, vertex m + j is column j.
  void build_tree() {
    adjacency_.assign(m_ + n_, {});
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      adjacency_[basis_[b].i].push_back(b);
      adjacency_[m_ + basis_[b].j].push_back(b);
    }
  }

  void compute_potentials() {
    build_tree();
    u_.assign(m_, RootSum());
    v_.assign(n_, RootSum());
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> queue{0};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t vertex = queue[head];
      for (std::size_t b : adjacency_[vertex]) {
        const auto& cell = basis_[b];
        const std::size_t other = vertex < m_ ? m_ + cell.j : cell.i;
        if (seen[other]) continue;
        seen[other] = 1;
        if (vertex < m_) {
          v_[cell.j] = costs_.at(cell.i, cell.j) - u_[cell.i];
        } else {
          u_[cell.i] = costs_.at(cell.i, cell.j) - v_[cell.j];
        }
        queue.push_back(other);
      }
    }
  }

  // Bland: the lowest-indexed nonbasic cell with negative reduced cost.
  std::size_t find_entering() const {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (in_basis_[i * n_ + j] != kUnassigned) continue;
        RootSum reduced = costs_.at(i, j);
        reduced -= u_[i];
        reduced -= v_[j];
        if (reduced.sign() < 0) return i * n_ + j;
      }
    }
    return kUnassigned;
  }

  // Basic cells on the tree path from column vertex to row vertex.
  std::vector<std::size_t> tree_path(std::size_t from, std::size_t to) const {
    std::vector<std::size_t> parent_cell(m_ + n_, kUnassigned), parent_vertex(m_ + n_, kUnassigned);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> queue{from};
    seen[from] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[to]; ++head) {
      const std::size_t vertex = queue[head];
      for (std::size_t b : adjacency_[vertex]) {
        const std::size_t other = vertex < m_ ? m_ + basis_[b].j : basis_[b].i;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_cell[other] = b;
        parent_vertex[other] = vertex;
        queue.push_back(other);
      }
    }
    std::vector<std::size_t> reversed;
    for (std::size_t w = to; w != from; w = parent_vertex[w]) reversed.push_back(parent_cell[w]);
    return {reversed.rbegin(), reversed.rend()};
  }

  void pivot(std::size_t entering) {
    const std::size_t ei = entering / n_, ej = entering % n_;
    // Cycle: entering (+), then the path from column ej back to row ei with
    // alternating signs starting at (-).
    const std::vector<std::size_t> path = tree_path(m_ + ej, ei);
    std::size_t leaving = kUnassigned;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const auto& cell = basis_[path[k]];
      if (leaving == kUnassigned) {
        leaving = path[k];
        continue;
      }
      const auto& best = basis_[leaving];
      const auto order = cell.flow <=> best.flow;
      if (order < 0 || (order == 0 && cell.i * n_ + cell.j < best.i * n_ + best.j)) leaving = path[k];
    }
    const Rational theta = basis_[leaving].flow;
    for (std::size_t k = 0; k < path.size(); ++k) {
      auto& cell = basis_[path[k]];
      if (k % 2 == 0) {
        cell.flow -= theta;
      } else {
        cell.flow += theta;
      }
    }
    auto& out = basis_[leaving];
    in_basis_[out.i * n_ + out.j] = kUnassigned;
    out = {ei, ej, theta};
    in_basis_[entering] = leaving;
  }

  std::size_t m_;
  std::size_t n_;
  CostTable costs_;
  std::vector<BasicCell> basis_;
  std::vector<std::size_t> in_basis_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<RootSum> u_;
  std::vector<RootSum> v_;
};

}  // namespace

SolveResult solve_optimal(const Instance& instance) { return TransportationSimplex(instance).run(); }

}  // namespace otstruct
