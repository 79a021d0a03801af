#include "otstruct/random_instances.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace otstruct {

std::uint64_t InstanceGenerator::uniform(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo;
  if (span == std::numeric_limits<std::uint64_t>::max()) return engine_();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return lo + draw % range;
}

std::vector<Rational> InstanceGenerator::masses(std::size_t count) {
  std::vector<long> weights(count);
  long total = 0;
  for (auto& w : weights) {
    w = static_cast<long>(uniform(1, static_cast<std::uint64_t>(options_.max_weight)));
    total += w;
  }
  std::vector<Rational> out;
  out.reserve(count);
  for (long w : weights) out.emplace_back(w, total);
  return out;
}

std::vector<Point> InstanceGenerator::points(std::size_t count) {
  std::size_t dim = options_.dimension;
  long grid = options_.grid;
  // Widen the grid when it cannot hold `count` distinct points.
  auto capacity = [&] {
    double c = 1;
    for (std::size_t d = 0; d < dim; ++d) c *= static_cast<double>(grid + 1);
    return c;
  };
  while (capacity() < 2.0 * static_cast<double>(count)) ++grid;

  std::set<std::vector<long>> seen;
  std::vector<Point> out;
  while (out.size() < count) {
    std::vector<long> key(dim);
    for (auto& k : key) k = static_cast<long>(uniform(0, static_cast<std::uint64_t>(grid)));
    if (!seen.insert(key).second) continue;
    Point p;
    for (long k : key) p.coords.emplace_back(k, options_.scale);
    out.push_back(std::move(p));
  }
  return out;
}

Instance InstanceGenerator::euclidean(std::size_t m, std::size_t n, const Rational& p) {
  DiscreteMeasure mu(points(m), masses(m));
  DiscreteMeasure nu(points(n), masses(n));
  return Instance(std::move(mu), std::move(nu), CostSpec::euclidean(p));
}

Instance InstanceGenerator::matrix(std::size_t m, std::size_t n, long max_cost) {
  DiscreteMeasure mu(masses(m));
  DiscreteMeasure nu(masses(n));
  std::vector<std::vector<Rational>> values(m, std::vector<Rational>(n));
  for (auto& row : values) {
    for (auto& v : row) v = Rational(static_cast<long>(uniform(0, static_cast<std::uint64_t>(max_cost))));
  }
  return Instance(std::move(mu), std::move(nu), CostSpec::matrix(std::move(values)));
}

Instance InstanceGenerator::singleton_pair(const Rational& p) {
  auto pts = points(2);
  DiscreteMeasure mu({pts[0]}, {Rational(1)});
  DiscreteMeasure nu({pts[1]}, {Rational(1)});
  return Instance(std::move(mu), std::move(nu), CostSpec::euclidean(p));
}

TransportPlan InstanceGenerator::forest_plan(std::size_t m, std::size_t n) {
  // Random spanning tree of K_{m,n}: seed it with one random arc, then
  // attach the remaining vertices in random order to a random placed vertex
  // of the opposite side.
  const std::size_t r0 = uniform(0, m - 1);
  const std::size_t c0 = uniform(0, n - 1);
  std::vector<std::size_t> order;
  for (std::size_t v = 0; v < m + n; ++v) {
    if (v != r0 && v != m + c0) order.push_back(v);
  }
  for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[uniform(0, k - 1)]);

  std::vector<std::size_t> placed_rows{r0};
  std::vector<std::size_t> placed_cols{c0};
  std::vector<std::pair<std::size_t, std::size_t>> arcs{{r0, c0}};
  for (std::size_t v : order) {
    if (v < m) {
      arcs.emplace_back(v, placed_cols[uniform(0, placed_cols.size() - 1)]);
      placed_rows.push_back(v);
    } else {
      arcs.emplace_back(placed_rows[uniform(0, placed_rows.size() - 1)], v - m);
      placed_cols.push_back(v - m);
    }
  }

  // Drop some arcs while every row and column keeps at least one.
  std::vector<std::size_t> row_deg(m, 0), col_deg(n, 0);
  for (const auto& [i, j] : arcs) {
    ++row_deg[i];
    ++col_deg[j];
  }
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  for (const auto& [i, j] : arcs) {
    if (row_deg[i] > 1 && col_deg[j] > 1 && uniform(0, 3) == 0) {
      --row_deg[i];
      --col_deg[j];
      continue;
    }
    kept.emplace_back(i, j);
  }

  std::vector<long> weights(kept.size());
  long sum = 0;
  for (auto& w : weights) {
    w = static_cast<long>(uniform(1, static_cast<std::uint64_t>(options_.max_weight)));
    sum += w;
  }
  std::vector<PlanEntry> entries;
  for (std::size_t k = 0; k < kept.size(); ++k) entries.push_back({kept[k].first, kept[k].second, Rational(weights[k], sum)});
  return TransportPlan(m, n, std::move(entries));
}

}  // namespace otstruct
