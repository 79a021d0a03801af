#include "oracles.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <sstream>

namespace oracle {

using otstruct::PlanEntry;

namespace {

// Gaussian elimination on the marginal equations restricted to `cells`.
// Returns the unique solution if the columns are independent and the
// system is consistent.
std::optional<std::vector<Rational>> solve_on_cells(const Instance& instance,
                                                    const std::vector<std::pair<std::size_t, std::size_t>>& cells) {
  const std::size_t m = instance.rows(), n = instance.cols();
  const std::size_t rows = m + n, k = cells.size();
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(k + 1));
  for (std::size_t c = 0; c < k; ++c) {
    a[cells[c].first][c] = Rational(1);
    a[m + cells[c].second][c] = Rational(1);
  }
  for (std::size_t i = 0; i < m; ++i) a[i][k] = instance.mu().mass(i);
  for (std::size_t j = 0; j < n; ++j) a[m + j][k] = instance.nu().mass(j);

  std::size_t pivot_row = 0;
  std::vector<std::size_t> pivot_of_col(k);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t r = pivot_row;
    while (r < rows && a[r][c].is_zero()) ++r;
    if (r == rows) return std::nullopt;  // dependent column
    std::swap(a[r], a[pivot_row]);
    const Rational inv = Rational(1) / a[pivot_row][c];
    for (auto& x : a[pivot_row]) x *= inv;
    for (std::size_t q = 0; q < rows; ++q) {
      if (q == pivot_row || a[q][c].is_zero()) continue;
      const Rational f = a[q][c];
      for (std::size_t t = c; t <= k; ++t) a[q][t] -= f * a[pivot_row][t];
    }
    pivot_of_col[c] = pivot_row++;
  }
  for (std::size_t q = pivot_row; q < rows; ++q) {
    if (!a[q][k].is_zero()) return std::nullopt;  // inconsistent
  }
  std::vector<Rational> x(k);
  for (std::size_t c = 0; c < k; ++c) x[c] = a[pivot_of_col[c]][k];
  return x;
}

}  // namespace

std::vector<Vertex> enumerate_vertices(const Instance& instance) {
  const std::size_t m = instance.rows(), n = instance.cols();
  const std::size_t cells = m * n;
  const std::size_t max_size = m + n - 1;
  std::vector<Vertex> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cells); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > max_size) continue;
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    for (std::size_t c = 0; c < cells; ++c) {
      if (mask >> c & 1U) chosen.emplace_back(c / n, c % n);
    }
    const auto x = solve_on_cells(instance, chosen);
    if (!x) continue;
    if (std::any_of(x->begin(), x->end(), [](const Rational& v) { return v.sign() <= 0; })) continue;
    std::vector<PlanEntry> entries;
    RootSum cost;
    for (std::size_t c = 0; c < chosen.size(); ++c) {
      entries.push_back({chosen[c].first, chosen[c].second, (*x)[c]});
      cost += instance.cost(chosen[c].first, chosen[c].second).to_root_sum() * (*x)[c];
    }
    out.push_back({TransportPlan(m, n, std::move(entries)), std::move(cost)});
  }
  return out;
}

Summary summarize(const Instance& instance) {
  const auto vertices = enumerate_vertices(instance);
  Summary s;
  bool first = true;
  for (const auto& v : vertices) {
    if (first || v.cost < s.optimum) s.optimum = v.cost;
    RootSum worst;
    for (const auto& e : v.plan.entries()) {
      const RootSum c = instance.cost(e.i, e.j).to_root_sum();
      if (c > worst) worst = c;
    }
    if (first || worst < s.bottleneck) s.bottleneck = worst;
    first = false;
  }
  s.minimal_support = SIZE_MAX;
  for (const auto& v : vertices) {
    if (v.cost == s.optimum) s.minimal_support = std::min(s.minimal_support, v.plan.support_size());
  }
  for (const auto& v : vertices) {
    if (v.cost == s.optimum && v.plan.support_size() == s.minimal_support) s.minimal_plans.push_back(v.plan);
  }
  std::sort(s.minimal_plans.begin(), s.minimal_plans.end(), [](const TransportPlan& a, const TransportPlan& b) {
    return std::lexicographical_compare(a.entries().begin(), a.entries().end(), b.entries().begin(),
                                        b.entries().end(), [](const PlanEntry& x, const PlanEntry& y) {
                                          if (x.i != y.i) return x.i < y.i;
                                          if (x.j != y.j) return x.j < y.j;
                                          return x.mass < y.mass;
                                        });
  });
  return s;
}

Rational naive_alpha_uniform(const std::vector<Rational>& mu, const std::vector<Rational>& nu) {
  std::optional<Rational> best;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << mu.size()); ++a) {
    Rational sa;
    for (std::size_t k = 0; k < mu.size(); ++k) {
      if (a >> k & 1U) sa += mu[k];
    }
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << nu.size()); ++b) {
      Rational sb;
      for (std::size_t k = 0; k < nu.size(); ++k) {
        if (b >> k & 1U) sb += nu[k];
      }
      const Rational d = (sa - sb).abs();
      if (!d.is_zero() && (!best || d < *best)) best = d;
    }
  }
  return best.value_or(Rational(0));
}

namespace {

struct Mpfr {
  mpfr_t v;
  explicit Mpfr(long bits) { mpfr_init2(v, bits); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
};

void power(Mpfr& out, const Rational& base, const Rational& exponent, long bits) {
  Mpfr b(bits), e(bits);
  mpfr_set_q(b.v, base.raw().get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(e.v, exponent.raw().get_mpq_t(), MPFR_RNDN);
  mpfr_pow(out.v, b.v, e.v, MPFR_RNDN);
}

}  // namespace

std::string mpfr_power(const Rational& base, const Rational& exponent, long bits, int digits) {
  Mpfr r(bits);
  power(r, base, exponent, bits);
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", digits, r.v);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

int mpfr_compare_powers(const Rational& a, const Rational& x, const Rational& b, const Rational& y, long bits) {
  Mpfr pa(bits), pb(bits), d(bits);
  power(pa, a, x, bits);
  power(pb, b, y, bits);
  mpfr_sub(d.v, pa.v, pb.v, MPFR_RNDN);
  if (mpfr_zero_p(d.v)) return 0;
  Mpfr scale(bits);
  mpfr_abs(scale.v, pa.v, MPFR_RNDN);
  mpfr_add_ui(scale.v, scale.v, 1, MPFR_RNDN);
  mpfr_div_2si(scale.v, scale.v, bits / 2, MPFR_RNDN);
  Mpfr ad(bits);
  mpfr_abs(ad.v, d.v, MPFR_RNDN);
  if (mpfr_cmp(ad.v, scale.v) < 0) return 0;
  return mpfr_sgn(d.v) > 0 ? 1 : -1;
}

std::optional<std::string> replay_trace_subsets(const otstruct::PeelTrace& trace) {
  const std::size_t m = trace.initial_mu.size(), n = trace.initial_nu.size();
  // Each residual is tracked as a pair (A, B) of 0/1 coefficient vectors.
  // A row residual has value mu(A) - nu(B); a column residual nu(B) - mu(A).
  struct Combo {
    std::vector<int> a, b;
  };
  auto value_row = [&](const Combo& c) {
    Rational v;
    for (std::size_t i = 0; i < m; ++i) v += trace.initial_mu[i] * Rational(c.a[i]);
    for (std::size_t j = 0; j < n; ++j) v -= trace.initial_nu[j] * Rational(c.b[j]);
    return v;
  };
  auto value_col = [&](const Combo& c) { return -value_row(c); };

  std::vector<Combo> row(m, Combo{std::vector<int>(m, 0), std::vector<int>(n, 0)});
  std::vector<Combo> col(n, Combo{std::vector<int>(m, 0), std::vector<int>(n, 0)});
  for (std::size_t i = 0; i < m; ++i) row[i].a[i] = 1;
  for (std::size_t j = 0; j < n; ++j) col[j].b[j] = 1;

  auto merge = [&](Combo& into, const Combo& from) {
    for (std::size_t i = 0; i < m; ++i) into.a[i] += from.a[i];
    for (std::size_t j = 0; j < n; ++j) into.b[j] += from.b[j];
  };
  auto zero = [&](Combo& c) {
    std::fill(c.a.begin(), c.a.end(), 0);
    std::fill(c.b.begin(), c.b.end(), 0);
  };

  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const auto& step = trace.steps[s];
    std::ostringstream where;
    where << "step " << s + 1 << ": ";
    if (step.row_leaf) {
      const auto& arc = *step.row_leaf;
      if (value_row(row[arc.row]) != arc.mass) return where.str() + "row leaf mass is not its residual";
      merge(col[arc.col], row[arc.row]);
      zero(row[arc.row]);
    }
    if (step.column_leaf) {
      const auto& arc = *step.column_leaf;
      if (value_col(col[arc.col]) != arc.mass) return where.str() + "column leaf mass is not its residual";
      merge(row[arc.row], col[arc.col]);
      zero(col[arc.col]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (value_row(row[i]) != step.residual_mu[i]) return where.str() + "row residual mismatch";
      for (int c : row[i].a) if (c > 1) return where.str() + "row atom used twice";
      for (int c : row[i].b) if (c > 1) return where.str() + "row atom used twice";
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (value_col(col[j]) != step.residual_nu[j]) return where.str() + "column residual mismatch";
      for (int c : col[j].a) if (c > 1) return where.str() + "column atom used twice";
      for (int c : col[j].b) if (c > 1) return where.str() + "column atom used twice";
    }
  }
  return std::nullopt;
}

}  // namespace oracle
