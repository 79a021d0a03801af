#include "otstruct/bottleneck.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "otstruct/errors.hpp"

namespace otstruct {

namespace {

// Dinic's algorithm on integer capacities.
template <typename Int>
class MaxFlow {
 public:
  struct Edge {
    std::size_t to;
    Int cap;
  };

  explicit MaxFlow(std::size_t vertices) : graph_(vertices), level_(vertices), cursor_(vertices) {}

  std::size_t add_edge(std::size_t from, std::size_t to, Int cap) {
    graph_[from].push_back(edges_.size());
    edges_.push_back({to, std::move(cap)});
    graph_[to].push_back(edges_.size());
    edges_.push_back({from, Int(0)});
    return edges_.size() - 2;
  }

  Int run(std::size_t source, std::size_t sink) {
    Int total(0);
    while (bfs(source, sink)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      for (;;) {
        Int pushed = dfs(source, sink, Int(-1));
        if (pushed == 0) break;
        total += pushed;
      }
    }
    return total;
  }

  /// Flow currently on a forward edge.
  Int flow_on(std::size_t edge) const { return edges_[edge ^ 1].cap; }

  /// Vertices reachable from source in the residual graph.
  std::vector<char> reachable(std::size_t source) const {
    std::vector<char> seen(graph_.size(), 0);
    std::vector<std::size_t> queue{source};
    seen[source] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::size_t e : graph_[queue[head]]) {
        if (edges_[e].cap > 0 && !seen[edges_[e].to]) {
          seen[edges_[e].to] = 1;
          queue.push_back(edges_[e].to);
        }
      }
    }
    return seen;
  }

 private:
  bool bfs(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::size_t> queue{source};
    level_[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t v = queue[head];
      for (std::size_t e : graph_[v]) {
        if (edges_[e].cap > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[v] + 1;
          queue.push_back(edges_[e].to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  // limit < 0 means unbounded.
  Int dfs(std::size_t v, std::size_t sink, Int limit) {
    if (v == sink) return limit;
    for (; cursor_[v] < graph_[v].size(); ++cursor_[v]) {
      const std::size_t e = graph_[v][cursor_[v]];
      const std::size_t to = edges_[e].to;
      if (edges_[e].cap <= 0 || level_[to] != level_[v] + 1) continue;
      Int bound = (limit < 0 || edges_[e].cap < limit) ? edges_[e].cap : limit;
      Int pushed = dfs(to, sink, bound);
      if (pushed > 0) {
        edges_[e].cap -= pushed;
        edges_[e ^ 1].cap += pushed;
        return pushed;
      }
    }
    return Int(0);
  }

  std::vector<std::vector<std::size_t>> graph_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

struct Scaled {
  mpz_class scale = 1;
  std::vector<mpz_class> supply;
  std::vector<mpz_class> demand;
  mpz_class total = 0;
};

Scaled scale(const Instance& instance) {
  Scaled s;
  for (const auto& m : instance.mu().masses()) mpz_lcm(s.scale.get_mpz_t(), s.scale.get_mpz_t(), m.denominator().get_mpz_t());
  for (const auto& m : instance.nu().masses()) mpz_lcm(s.scale.get_mpz_t(), s.scale.get_mpz_t(), m.denominator().get_mpz_t());
  for (const auto& m : instance.mu().masses()) {
    s.supply.push_back(m.numerator() * (s.scale / m.denominator()));
    s.total += s.supply.back();
  }
  for (const auto& m : instance.nu().masses()) s.demand.push_back(m.numerator() * (s.scale / m.denominator()));
  return s;
}

template <typename Int>
Int to_int(const mpz_class& z) {
  if constexpr (std::is_same_v<Int, mpz_class>) {
    return z;
  } else {
    return static_cast<Int>(z.get_si());
  }
}

template <typename Int>
mpz_class from_int(const Int& v) {
  if constexpr (std::is_same_v<Int, mpz_class>) {
    return v;
  } else {
    return mpz_class(static_cast<long>(v));
  }
}

struct FlowOutcome {
  bool feasible = false;
  TransportPlan plan;
  std::vector<std::size_t> cut_rows;
};

template <typename Int>
class ThresholdOracle {
 public:
  ThresholdOracle(const Instance& instance, const Scaled& scaled, const std::vector<std::size_t>& rank)
      : instance_(instance), scaled_(scaled), rank_(rank) {}

  FlowOutcome run(std::size_t max_rank, bool want_details) const {
    const std::size_t m = instance_.rows(), n = instance_.cols();
    const std::size_t source = m + n, sink = m + n + 1;
    MaxFlow<Int> flow(m + n + 2);
    const Int total = to_int<Int>(scaled_.total);
    for (std::size_t i = 0; i < m; ++i) flow.add_edge(source, i, to_int<Int>(scaled_.supply[i]));
    for (std::size_t j = 0; j < n; ++j) flow.add_edge(m + j, sink, to_int<Int>(scaled_.demand[j]));
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    std::vector<std::size_t> edge_ids;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (rank_[i * n + j] > max_rank) continue;
        edge_ids.push_back(flow.add_edge(i, m + j, total));
        cells.emplace_back(i, j);
      }
    }
    FlowOutcome out;
    out.feasible = flow.run(source, sink) == total;
    if (!want_details) return out;
    if (out.feasible) {
      std::vector<PlanEntry> entries;
      for (std::size_t k = 0; k < cells.size(); ++k) {
        const Int f = flow.flow_on(edge_ids[k]);
        if (f > 0) entries.push_back({cells[k].first, cells[k].second, Rational(from_int(f), scaled_.scale)});
      }
      out.plan = TransportPlan(m, n, std::move(entries));
    } else {
      const auto seen = flow.reachable(source);
      for (std::size_t i = 0; i < m; ++i) {
        if (seen[i]) out.cut_rows.push_back(i);
      }
    }
    return out;
  }

 private:
  const Instance& instance_;
  const Scaled& scaled_;
  const std::vector<std::size_t>& rank_;
};

std::vector<std::size_t> cost_ranks(const Instance& instance, const std::vector<CostValue>& sorted) {
  std::vector<std::size_t> rank(instance.rows() * instance.cols());
  for (std::size_t i = 0; i < instance.rows(); ++i) {
    for (std::size_t j = 0; j < instance.cols(); ++j) {
      const auto it = std::lower_bound(sorted.begin(), sorted.end(), instance.cost(i, j),
                                       [](const CostValue& a, const CostValue& b) { return compare_costs(a, b) < 0; });
      rank[i * instance.cols() + j] = static_cast<std::size_t>(it - sorted.begin());
    }
  }
  return rank;
}

Rational neighbour_deficit(const Instance& instance, const std::vector<std::size_t>& rows, const CostValue& threshold) {
  Rational deficit;
  std::vector<char> neighbour(instance.cols(), 0);
  for (std::size_t i : rows) {
    deficit += instance.mu().mass(i);
    for (std::size_t j = 0; j < instance.cols(); ++j) {
      if (compare_costs(instance.cost(i, j), threshold) <= 0) neighbour[j] = 1;
    }
  }
  for (std::size_t j = 0; j < instance.cols(); ++j) {
    if (neighbour[j]) deficit -= instance.nu().mass(j);
  }
  return deficit;
}

template <typename Int>
ThresholdCertificate solve_threshold(const Instance& instance, const Scaled& scaled) {
  const std::vector<CostValue> sorted = distinct_costs(instance);
  const std::vector<std::size_t> rank = cost_ranks(instance, sorted);
  const ThresholdOracle<Int> oracle(instance, scaled, rank);

  // Invariant: index hi is feasible (all arcs allowed), every index < lo is not.
  std::size_t lo = 0, hi = sorted.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (oracle.run(mid, false).feasible) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  ThresholdCertificate cert;
  cert.threshold = sorted[hi];
  cert.threshold_index = hi;
  cert.distinct_costs = sorted.size();
  cert.witness = oracle.run(hi, true).plan;
  if (hi > 0) {
    FlowOutcome below = oracle.run(hi - 1, true);
    HallCut cut;
    cut.threshold = sorted[hi - 1];
    cut.rows = std::move(below.cut_rows);
    cut.deficit = neighbour_deficit(instance, cut.rows, cut.threshold);
    cert.below = std::move(cut);
  }
  return cert;
}

}  // namespace

std::vector<CostValue> distinct_costs(const Instance& instance) {
  std::vector<CostValue> values;
  values.reserve(instance.rows() * instance.cols());
  for (std::size_t i = 0; i < instance.rows(); ++i) {
    for (std::size_t j = 0; j < instance.cols(); ++j) values.push_back(instance.cost(i, j));
  }
  std::sort(values.begin(), values.end(), [](const CostValue& a, const CostValue& b) { return compare_costs(a, b) < 0; });
  values.erase(std::unique(values.begin(), values.end(),
                           [](const CostValue& a, const CostValue& b) { return compare_costs(a, b) == 0; }),
               values.end());
  return values;
}

ThresholdCertificate w_infinity(const Instance& instance) {
  const Scaled scaled = scale(instance);
  if (scaled.total < mpz_class(std::numeric_limits<std::int64_t>::max() / 4)) {
    return solve_threshold<std::int64_t>(instance, scaled);
  }
  return solve_threshold<mpz_class>(instance, scaled);
}

CostValue w_infinity_bruteforce(const Instance& instance, std::size_t guard) {
  const std::size_t m = instance.rows(), n = instance.cols();
  if (m > guard) {
    throw InstanceTooLarge("Hall oracle needs m <= " + std::to_string(guard) + ", got " + std::to_string(m));
  }
  const std::vector<CostValue> sorted = distinct_costs(instance);
  const std::size_t subsets = std::size_t{1} << m;
  for (const CostValue& t : sorted) {
    bool feasible = true;
    // neighbours[A] built from neighbours[A without its lowest bit].
    std::vector<std::vector<char>> neighbours(subsets, std::vector<char>(n, 0));
    std::vector<Rational> supply(subsets);
    for (std::size_t a = 1; a < subsets && feasible; ++a) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(a));
      const std::size_t rest = a & (a - 1);
      neighbours[a] = neighbours[rest];
      supply[a] = supply[rest] + instance.mu().mass(low);
      for (std::size_t j = 0; j < n; ++j) {
        if (compare_costs(instance.cost(low, j), t) <= 0) neighbours[a][j] = 1;
      }
      Rational demand;
      for (std::size_t j = 0; j < n; ++j) {
        if (neighbours[a][j]) demand += instance.nu().mass(j);
      }
      if (supply[a] > demand) feasible = false;
    }
    if (feasible) return t;
  }
  throw Error("no feasible threshold; instance totals must differ");
}

PowerIdentityReport power_identity_check(const Instance& instance, const Rational& p) {
  if (p.sign() <= 0) throw InvalidP("power must be positive, got " + p.str());
  const Instance powered = instance.with_cost(instance.cost_spec().powered(p));
  const ThresholdCertificate base = w_infinity(instance);
  const ThresholdCertificate lifted = w_infinity(powered);
  PowerIdentityReport report;
  report.p = p;
  report.index_base = base.threshold_index;
  report.index_powered = lifted.threshold_index;
  report.threshold_base = base.threshold;
  report.threshold_powered = lifted.threshold;
  report.value_identity = compare_costs(lifted.threshold, base.threshold.pow(p)) == 0;
  return report;
}

bool certificate_valid(const ThresholdCertificate& cert, const Instance& instance) {
  if (!has_instance_marginals(cert.witness, instance)) return false;
  bool attains = false;
  for (const auto& e : cert.witness.entries()) {
    const auto order = compare_costs(instance.cost(e.i, e.j), cert.threshold);
    if (order > 0) return false;
    if (order == 0) attains = true;
  }
  if (!attains) return false;
  if (cert.threshold_index == 0) return !cert.below.has_value();
  if (!cert.below) return false;
  if (compare_costs(cert.below->threshold, cert.threshold) >= 0) return false;
  // No arc cost lies strictly between the two thresholds.
  for (std::size_t i = 0; i < instance.rows(); ++i) {
    for (std::size_t j = 0; j < instance.cols(); ++j) {
      const CostValue& c = instance.cost(i, j);
      if (compare_costs(c, cert.below->threshold) > 0 && compare_costs(c, cert.threshold) < 0) return false;
    }
  }
  return cert.below->deficit.sign() > 0 &&
         neighbour_deficit(instance, cert.below->rows, cert.below->threshold) == cert.below->deficit;
}

}  // namespace otstruct
