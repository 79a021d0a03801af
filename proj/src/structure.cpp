#include "otstruct/structure.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "otstruct/errors.hpp"

namespace otstruct {

DiffusiveModel::DiffusiveModel(std::size_t m, std::size_t n)
    : mu_d(m), mu_c(m), nu_d(n), nu_c(n), h1(m), h2(n) {}

std::size_t DiffusiveModel::diffusive_atoms() const {
  std::size_t count = 0;
  for (const auto& w : mu_d) count += w.is_zero() ? 0 : 1;
  for (const auto& w : nu_d) count += w.is_zero() ? 0 : 1;
  return count;
}

std::vector<Rational> DiffusiveModel::mu() const {
  std::vector<Rational> out(mu_d.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mu_d[i] + mu_c[i];
  return out;
}

std::vector<Rational> DiffusiveModel::nu() const {
  std::vector<Rational> out(nu_d.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = nu_d[j] + nu_c[j];
  return out;
}

bool DiffusiveModel::consistent() const {
  const std::size_t m = mu_d.size(), n = nu_d.size();
  if (mu_c.size() != m || h1.size() != m || nu_c.size() != n || h2.size() != n) return false;
  for (std::size_t i = 0; i < m; ++i) {
    if (mu_d[i].sign() < 0 || mu_c[i].sign() < 0) return false;
    if (mu_d[i].is_zero() != !h1[i].has_value()) return false;
    if (h1[i] && *h1[i] >= n) return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (nu_d[j].sign() < 0 || nu_c[j].sign() < 0) return false;
    if (nu_d[j].is_zero() != !h2[j].has_value()) return false;
    if (h2[j] && *h2[j] >= m) return false;
  }
  return true;
}

const char* to_string(PeelBranch branch) {
  switch (branch) {
    case PeelBranch::RowLeafEqual: return "row-leaf-equal";
    case PeelBranch::ColumnLeafEqual: return "column-leaf-equal";
    case PeelBranch::DoubleLeaf: return "double-leaf";
    case PeelBranch::RowLeafOnly: return "row-leaf-only";
    case PeelBranch::ColumnLeafOnly: return "column-leaf-only";
  }
  return "unknown";
}

const char* to_string(TrimStatus status) {
  switch (status) {
    case TrimStatus::Trim: return "trim";
    case TrimStatus::NotTrim: return "not_trim";
    case TrimStatus::Unverifiable: return "unverifiable";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Remaining support during peeling.
class ResidualForest {
 public:
  explicit ResidualForest(const TransportPlan& plan)
      : entries_(plan.entries()), alive_(plan.entries().size(), 1),
        row_degree_(plan.rows(), 0), col_degree_(plan.cols(), 0), remaining_(plan.entries().size()) {
    for (const auto& e : entries_) {
      ++row_degree_[e.i];
      ++col_degree_[e.j];
    }
  }

  bool empty() const { return remaining_ == 0; }

  std::size_t first_row_leaf() const {
    for (std::size_t i = 0; i < row_degree_.size(); ++i) {
      if (row_degree_[i] == 1) return arc_of_row(i);
    }
    return kNone;
  }

  std::size_t first_column_leaf() const {
    for (std::size_t j = 0; j < col_degree_.size(); ++j) {
      if (col_degree_[j] == 1) return arc_of_col(j);
    }
    return kNone;
  }

  const PlanEntry& entry(std::size_t k) const { return entries_[k]; }

  void remove(std::size_t k) {
    alive_[k] = 0;
    --row_degree_[entries_[k].i];
    --col_degree_[entries_[k].j];
    --remaining_;
  }

 private:
  std::size_t arc_of_row(std::size_t i) const {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (alive_[k] && entries_[k].i == i) return k;
    }
    return kNone;
  }
  std::size_t arc_of_col(std::size_t j) const {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      if (alive_[k] && entries_[k].j == j) return k;
    }
    return kNone;
  }

  const std::vector<PlanEntry>& entries_;
  std::vector<char> alive_;
  std::vector<std::size_t> row_degree_;
  std::vector<std::size_t> col_degree_;
  std::size_t remaining_;
};

}  // namespace

Decomposition decompose(const TransportPlan& plan) {
  if (plan.empty()) throw EmptyPlan("cannot decompose an empty plan");
  if (!SupportGraph(plan).is_forest()) {
    throw CyclicSupport("plan support has a cycle (" + std::to_string(plan.support_size()) +
                        " entries); reduce it to a forest first");
  }
  const std::size_t m = plan.rows(), n = plan.cols();
  Decomposition out{DiffusiveModel(m, n), PeelTrace{}};
  auto& model = out.model;
  std::vector<Rational> r_mu = plan.row_sums();
  std::vector<Rational> r_nu = plan.col_sums();
  out.trace.initial_mu = r_mu;
  out.trace.initial_nu = r_nu;

  ResidualForest forest(plan);

  // Row-leaf part of a step: x sends its whole residual along its only arc.
  auto peel_row = [&](std::size_t k) {
    const PlanEntry& e = forest.entry(k);
    model.mu_d[e.i] = e.mass;
    model.h1[e.i] = e.j;
    model.nu_c[e.j] += e.mass;
    r_mu[e.i] -= e.mass;
    r_nu[e.j] -= e.mass;
    forest.remove(k);
    return LeafArc{e.i, e.j, e.mass};
  };
  auto peel_col = [&](std::size_t k) {
    const PlanEntry& e = forest.entry(k);
    model.nu_d[e.j] = e.mass;
    model.h2[e.j] = e.i;
    model.mu_c[e.i] += e.mass;
    r_mu[e.i] -= e.mass;
    r_nu[e.j] -= e.mass;
    forest.remove(k);
    return LeafArc{e.i, e.j, e.mass};
  };

  while (!forest.empty()) {
    const std::size_t row_arc = forest.first_row_leaf();
    const std::size_t col_arc = forest.first_column_leaf();
    PeelStep step;
    if (row_arc != kNone && r_mu[forest.entry(row_arc).i] == r_nu[forest.entry(row_arc).j]) {
      step.branch = PeelBranch::RowLeafEqual;
      step.row_leaf = peel_row(row_arc);
    } else if (col_arc != kNone && r_nu[forest.entry(col_arc).j] == r_mu[forest.entry(col_arc).i]) {
      step.branch = PeelBranch::ColumnLeafEqual;
      step.column_leaf = peel_col(col_arc);
    } else if (row_arc != kNone && col_arc != kNone) {
      step.branch = PeelBranch::DoubleLeaf;
      step.row_leaf = peel_row(row_arc);
      step.column_leaf = peel_col(col_arc);
    } else if (row_arc != kNone) {
      step.branch = PeelBranch::RowLeafOnly;
      step.row_leaf = peel_row(row_arc);
    } else {
      // A nonempty forest always has a leaf on some side.
      step.branch = PeelBranch::ColumnLeafOnly;
      step.column_leaf = peel_col(col_arc);
    }
    step.residual_mu = r_mu;
    step.residual_nu = r_nu;
    out.trace.steps.push_back(std::move(step));
  }
  return out;
}

TransportPlan reconstruct(const DiffusiveModel& model) {
  std::vector<PlanEntry> entries;
  for (std::size_t i = 0; i < model.mu_d.size(); ++i) {
    if (!model.mu_d[i].is_zero() && model.h1[i]) entries.push_back({i, *model.h1[i], model.mu_d[i]});
  }
  for (std::size_t j = 0; j < model.nu_d.size(); ++j) {
    if (!model.nu_d[j].is_zero() && model.h2[j]) entries.push_back({*model.h2[j], j, model.nu_d[j]});
  }
  return TransportPlan(model.rows(), model.cols(), std::move(entries));
}

TransportPlan restrict(const TransportPlan& plan, const std::set<std::pair<std::size_t, std::size_t>>& keep) {
  std::vector<PlanEntry> entries;
  for (const auto& e : plan.entries()) {
    if (keep.contains({e.i, e.j})) entries.push_back(e);
  }
  return TransportPlan(plan.rows(), plan.cols(), std::move(entries));
}

namespace {

// Pushes theta around a cycle of entry indices: even positions gain, odd lose.
TransportPlan push_cycle(const TransportPlan& plan, const std::vector<std::size_t>& cycle, const Rational& theta) {
  std::vector<PlanEntry> entries = plan.entries();
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    if (k % 2 == 0) {
      entries[cycle[k]].mass += theta;
    } else {
      entries[cycle[k]].mass -= theta;
    }
  }
  return TransportPlan(plan.rows(), plan.cols(), std::move(entries));
}

}  // namespace

TransportPlan minimize_support(const TransportPlan& plan, const DualPotentials& potentials, const Instance& instance) {
  if (!has_instance_marginals(plan, instance)) throw ValidationError("plan marginals differ from the instance");
  if (!complementary_slackness_holds(plan, potentials, instance)) {
    throw NotOptimal("complementary slackness fails for the supplied plan and potentials");
  }
  TransportPlan current = plan;

  // Every support cell has zero reduced cost, so any support cycle has zero
  // alternating cost and cancelling it keeps the plan optimal.
  while (auto cycle = SupportGraph(current).find_cycle()) {
    Rational theta;
    bool first = true;
    for (std::size_t k = 1; k < cycle->size(); k += 2) {
      const Rational& mass = current.entries()[(*cycle)[k]].mass;
      if (first || mass < theta) theta = mass;
      first = false;
    }
    current = push_cycle(current, *cycle, theta);
  }

  const CostTable costs(instance);
  const std::size_t m = instance.rows(), n = instance.cols();
  bool improved = true;
  while (improved) {
    improved = false;
    const SupportGraph graph(current);
    for (std::size_t i = 0; i < m && !improved; ++i) {
      for (std::size_t j = 0; j < n && !improved; ++j) {
        if (!current.mass_at(i, j).is_zero()) continue;
        if (!(costs.at(i, j) - potentials.u[i] - potentials.v[j]).is_zero()) continue;
        const auto path = graph.forest_path(m + j, i);
        if (!path) continue;
        // Cycle: (i, j) gains; path cells alternate lose, gain, ...
        Rational theta;
        std::size_t ties = 0;
        for (std::size_t k = 0; k < path->size(); k += 2) {
          const Rational& mass = current.entries()[(*path)[k]].mass;
          if (ties == 0 || mass < theta) {
            theta = mass;
            ties = 1;
          } else if (mass == theta) {
            ++ties;
          }
        }
        if (ties < 2) continue;
        std::vector<PlanEntry> entries = current.entries();
        for (std::size_t k = 0; k < path->size(); ++k) {
          if (k % 2 == 0) {
            entries[(*path)[k]].mass -= theta;
          } else {
            entries[(*path)[k]].mass += theta;
          }
        }
        entries.push_back({i, j, theta});
        current = TransportPlan(m, n, std::move(entries));
        improved = true;
      }
    }
  }
  return current;
}

namespace {

// Searches forests of exactly k arcs drawn from `arcs` that touch every row
// and column and carry a strictly positive forced flow. The flow on a
// forest is unique when it exists, and is found by peeling leaves.
class TightForestSearch {
 public:
  TightForestSearch(std::size_t m, std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> arcs,
                    std::vector<Rational> mu, std::vector<Rational> nu)
      : m_(m), n_(n), arcs_(std::move(arcs)), mu_(std::move(mu)), nu_(std::move(nu)), parent_(m + n),
        size_(m + n, 1), degree_(m + n, 0), remaining_(m + n, 0) {
    for (std::size_t v = 0; v < m + n; ++v) parent_[v] = v;
    for (const auto& [i, j] : arcs_) {
      ++remaining_[i];
      ++remaining_[m_ + j];
    }
  }

  std::optional<TransportPlan> find(std::size_t k) {
    k_ = k;
    chosen_.clear();
    found_.reset();
    recurse(0);
    return std::move(found_);
  }

 private:
  std::size_t root(std::size_t v) const {
    while (parent_[v] != v) v = parent_[v];
    return v;
  }

  void recurse(std::size_t next) {
    if (found_) return;
    if (chosen_.size() == k_) {
      evaluate();
      return;
    }
    if (arcs_.size() - next < k_ - chosen_.size()) return;
    const auto [i, j] = arcs_[next];
    const std::size_t r = i, c = m_ + j;
    --remaining_[r];
    --remaining_[c];
    std::size_t a = root(r), b = root(c);
    if (a != b) {
      if (size_[a] < size_[b]) std::swap(a, b);
      parent_[b] = a;
      size_[a] += size_[b];
      ++degree_[r];
      ++degree_[c];
      chosen_.push_back(next);
      recurse(next + 1);
      chosen_.pop_back();
      --degree_[r];
      --degree_[c];
      size_[a] -= size_[b];
      parent_[b] = b;
    }
    // Skipping the arc is only possible if both endpoints can still be covered.
    if ((degree_[r] > 0 || remaining_[r] > 0) && (degree_[c] > 0 || remaining_[c] > 0)) recurse(next + 1);
    ++remaining_[r];
    ++remaining_[c];
  }

  void evaluate() {
    const std::size_t vertices = m_ + n_;
    std::vector<std::size_t> degree(degree_);
    for (std::size_t v = 0; v < vertices; ++v) {
      if (degree[v] == 0) return;
    }
    std::vector<Rational> residual(vertices);
    for (std::size_t i = 0; i < m_; ++i) residual[i] = mu_[i];
    for (std::size_t j = 0; j < n_; ++j) residual[m_ + j] = nu_[j];
    std::vector<char> used(chosen_.size(), 0);
    std::vector<PlanEntry> entries;
    std::vector<std::size_t> leaves;
    for (std::size_t v = 0; v < vertices; ++v) {
      if (degree[v] == 1) leaves.push_back(v);
    }
    while (!leaves.empty()) {
      const std::size_t v = leaves.back();
      leaves.pop_back();
      if (degree[v] != 1) continue;
      std::size_t k = 0;
      for (; k < chosen_.size(); ++k) {
        if (used[k]) continue;
        const auto [i, j] = arcs_[chosen_[k]];
        if (v < m_ ? i == v : j == v - m_) break;
      }
      used[k] = 1;
      const auto [i, j] = arcs_[chosen_[k]];
      const std::size_t w = v < m_ ? m_ + j : i;
      const Rational flow = residual[v];
      if (flow.sign() <= 0) return;
      residual[w] -= flow;
      residual[v] = Rational(0);
      --degree[v];
      if (--degree[w] == 1) leaves.push_back(w);
      entries.push_back({i, j, flow});
    }
    for (const auto& r : residual) {
      if (!r.is_zero()) return;
    }
    found_ = TransportPlan(m_, n_, std::move(entries));
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<std::pair<std::size_t, std::size_t>> arcs_;
  std::vector<Rational> mu_;
  std::vector<Rational> nu_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> degree_;
  std::vector<std::size_t> remaining_;
  std::vector<std::size_t> chosen_;
  std::size_t k_ = 0;
  std::optional<TransportPlan> found_;
};

}  // namespace

TrimVerdict is_trim_certified(const TransportPlan& plan, const Instance& instance, std::size_t guard) {
  if (!has_instance_marginals(plan, instance)) throw ValidationError("plan marginals differ from the instance");
  TrimVerdict verdict;
  const std::size_t m = instance.rows(), n = instance.cols();
  if (m * n > guard) return verdict;

  // Every optimal plan is supported on the arcs of zero reduced cost for an
  // optimal dual, and a minimal-support optimal plan is a vertex, hence a
  // forest. Searching forests of those arcs by increasing size is exhaustive.
  const SolveResult solved = solve_optimal(instance);
  verdict.optimal = transport_cost(plan, instance) == solved.objective;
  const CostTable costs(instance);
  std::vector<std::pair<std::size_t, std::size_t>> tight;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (costs.at(i, j) - solved.potentials.u[i] - solved.potentials.v[j] == RootSum()) tight.emplace_back(i, j);
    }
  }
  TightForestSearch search(m, n, std::move(tight), instance.mu().masses(), instance.nu().masses());
  const std::size_t limit = verdict.optimal ? plan.support_size() : m + n;
  for (std::size_t k = std::max(m, n); k < limit; ++k) {
    if (auto witness = search.find(k)) {
      verdict.status = TrimStatus::NotTrim;
      verdict.minimal_support = k;
      verdict.witness = std::move(witness);
      return verdict;
    }
  }
  if (!verdict.optimal) throw Error("no optimal vertex found within the tight arcs");
  verdict.status = TrimStatus::Trim;
  verdict.minimal_support = plan.support_size();
  return verdict;
}

SubInstance marginal_subproblem(const TransportPlan& plan, const Instance& instance) {
  if (plan.rows() != instance.rows() || plan.cols() != instance.cols()) {
    throw DimensionMismatch("plan and instance sizes differ");
  }
  const auto [rows, cols] = marginals(plan);
  std::vector<std::size_t> row_map, col_map;
  std::vector<std::size_t> row_index(rows.size(), kNone), col_index(cols.size(), kNone);
  std::vector<Rational> mu_mass, nu_mass;
  std::vector<Point> mu_points, nu_points;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].is_zero()) continue;
    row_index[i] = row_map.size();
    row_map.push_back(i);
    mu_mass.push_back(rows[i]);
    if (instance.mu().has_points()) mu_points.push_back(instance.mu().points()[i]);
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].is_zero()) continue;
    col_index[j] = col_map.size();
    col_map.push_back(j);
    nu_mass.push_back(cols[j]);
    if (instance.nu().has_points()) nu_points.push_back(instance.nu().points()[j]);
  }
  CostSpec spec = instance.cost_spec();
  if (!spec.is_euclidean()) {
    std::vector<std::vector<Rational>> values;
    for (std::size_t i : row_map) {
      std::vector<Rational> row;
      for (std::size_t j : col_map) row.push_back(spec.values[i][j]);
      values.push_back(std::move(row));
    }
    spec.values = std::move(values);
  }
  DiscreteMeasure mu = mu_points.empty() ? DiscreteMeasure(mu_mass) : DiscreteMeasure(mu_points, mu_mass);
  DiscreteMeasure nu = nu_points.empty() ? DiscreteMeasure(nu_mass) : DiscreteMeasure(nu_points, nu_mass);
  std::vector<PlanEntry> entries;
  for (const auto& e : plan.entries()) entries.push_back({row_index[e.i], col_index[e.j], e.mass});
  return SubInstance{Instance(std::move(mu), std::move(nu), std::move(spec)),
                     TransportPlan(row_map.size(), col_map.size(), std::move(entries)), row_map, col_map};
}

}  // namespace otstruct
