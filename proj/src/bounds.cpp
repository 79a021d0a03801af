#include "otstruct/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "otstruct/errors.hpp"

namespace otstruct {

Rational alpha_of_model(const DiffusiveModel& model) {
  std::optional<Rational> best;
  auto consider = [&](const Rational& w) {
    if (w.is_zero()) return;
    if (!best || w < *best) best = w;
  };
  for (const auto& w : model.mu_d) consider(w);
  for (const auto& w : model.nu_d) consider(w);
  if (!best) throw EmptyModel("both diffusive parts are empty");
  return *best;
}

namespace {

template <typename Int>
Int as_int(const mpz_class& z) {
  if constexpr (std::is_same_v<Int, mpz_class>) {
    return z;
  } else {
    return static_cast<Int>(z.get_si());
  }
}

template <typename Int>
std::vector<std::pair<Int, std::uint32_t>> subset_sums(const std::vector<Int>& weights) {
  const std::size_t count = std::size_t{1} << weights.size();
  std::vector<std::pair<Int, std::uint32_t>> sums(count);
  sums[0] = {Int(0), 0};
  for (std::size_t mask = 1; mask < count; ++mask) {
    const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
    sums[mask] = {sums[mask & (mask - 1)].first + weights[low], static_cast<std::uint32_t>(mask)};
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

std::vector<std::size_t> mask_indices(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; mask != 0; ++k, mask >>= 1) {
    if (mask & 1U) out.push_back(k);
  }
  return out;
}

template <typename Int>
UniformAlpha closest_sums(const std::vector<Int>& mu, const std::vector<Int>& nu, const mpz_class& scale) {
  const auto a = subset_sums(mu);
  const auto b = subset_sums(nu);
  bool found = false;
  Int best(0);
  std::uint32_t best_a = 0, best_b = 0;
  auto consider = [&](const std::pair<Int, std::uint32_t>& x, const std::pair<Int, std::uint32_t>& y) {
    Int diff = x.first > y.first ? Int(x.first - y.first) : Int(y.first - x.first);
    if (diff == 0) return;
    if (!found || diff < best) {
      best = diff;
      best_a = x.second;
      best_b = y.second;
      found = true;
    }
  };
  // For each sum in a, its nearest strictly smaller and strictly larger
  // neighbours in b.
  std::size_t lo = 0;
  for (const auto& x : a) {
    while (lo < b.size() && b[lo].first < x.first) ++lo;
    if (lo > 0) consider(x, b[lo - 1]);
    std::size_t hi = lo;
    while (hi < b.size() && b[hi].first == x.first) ++hi;
    if (hi < b.size()) consider(x, b[hi]);
  }
  UniformAlpha out;
  mpz_class numerator;
  if constexpr (std::is_same_v<Int, mpz_class>) {
    numerator = best;
  } else {
    numerator = mpz_class(static_cast<long>(best));
  }
  out.value = Rational(numerator, scale);
  out.rows = mask_indices(best_a);
  out.cols = mask_indices(best_b);
  return out;
}

}  // namespace

UniformAlpha alpha_uniform(const DiscreteMeasure& mu, const DiscreteMeasure& nu, std::size_t guard) {
  if (mu.size() + nu.size() > guard) {
    throw InstanceTooLarge("subset-sum enumeration needs m + n <= " + std::to_string(guard) + ", got " +
                           std::to_string(mu.size() + nu.size()));
  }
  mpz_class scale = 1;
  for (const auto& m : mu.masses()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), m.denominator().get_mpz_t());
  for (const auto& m : nu.masses()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), m.denominator().get_mpz_t());
  std::vector<mpz_class> wm, wn;
  mpz_class total = 0;
  for (const auto& m : mu.masses()) {
    wm.push_back(m.numerator() * (scale / m.denominator()));
    total += wm.back();
  }
  for (const auto& m : nu.masses()) {
    wn.push_back(m.numerator() * (scale / m.denominator()));
    total += wn.back();
  }
  if (total < mpz_class(std::numeric_limits<std::int64_t>::max() / 4)) {
    std::vector<std::int64_t> a, b;
    for (const auto& z : wm) a.push_back(as_int<std::int64_t>(z));
    for (const auto& z : wn) b.push_back(as_int<std::int64_t>(z));
    return closest_sums(a, b, scale);
  }
  return closest_sums(wm, wn, scale);
}

std::pair<RootSum, RootSum> cost_split(const DiffusiveModel& model, const Instance& instance) {
  if (model.rows() != instance.rows() || model.cols() != instance.cols()) {
    throw DimensionMismatch("model and instance sizes differ");
  }
  RootSum first, second;
  for (std::size_t i = 0; i < model.rows(); ++i) {
    if (!model.mu_d[i].is_zero()) first += instance.cost(i, *model.h1[i]).to_root_sum() * model.mu_d[i];
  }
  for (std::size_t j = 0; j < model.cols(); ++j) {
    if (!model.nu_d[j].is_zero()) second += instance.cost(*model.h2[j], j).to_root_sum() * model.nu_d[j];
  }
  return {first, second};
}

CostValue t_infinity_of_model(const DiffusiveModel& model, const Instance& instance) {
  if (model.rows() != instance.rows() || model.cols() != instance.cols()) {
    throw DimensionMismatch("model and instance sizes differ");
  }
  std::optional<CostValue> best;
  auto consider = [&](const CostValue& c) {
    if (!best || compare_costs(c, *best) > 0) best = c;
  };
  for (std::size_t i = 0; i < model.rows(); ++i) {
    if (!model.mu_d[i].is_zero()) consider(instance.cost(i, *model.h1[i]));
  }
  for (std::size_t j = 0; j < model.cols(); ++j) {
    if (!model.nu_d[j].is_zero()) consider(instance.cost(*model.h2[j], j));
  }
  return best.value_or(CostValue::rational(Rational(0)));
}

PipelineResult run_pipeline(const Instance& instance, std::size_t oracle_guard) {
  PipelineResult out;
  out.solved = solve_optimal(instance);
  out.reduced = minimize_support(out.solved.plan, out.solved.potentials, instance);
  out.decomposition = decompose(out.reduced);
  out.trim = is_trim_certified(out.reduced, instance, oracle_guard);
  return out;
}

Corollary1Report verify_corollary1(const Instance& instance, std::size_t oracle_guard, std::size_t subset_guard) {
  Corollary1Report report;
  report.pipeline = run_pipeline(instance, oracle_guard);
  report.w_c = report.pipeline.solved.objective;
  report.w_inf = w_infinity(instance);
  report.alpha.alpha_model = alpha_of_model(report.pipeline.decomposition.model);
  if (instance.rows() + instance.cols() <= subset_guard) {
    UniformAlpha uniform = alpha_uniform(instance.mu(), instance.nu(), subset_guard);
    report.alpha.alpha_uniform = uniform.value;
    report.alpha.achieving_pair = std::pair{uniform.rows, uniform.cols};
  }
  report.rhs = report.w_inf.threshold.to_root_sum() * report.alpha.alpha_model;
  report.holds = report.w_c >= report.rhs;
  report.tight = report.w_c == report.rhs;
  return report;
}

CostSpec base_cost(const CostSpec& spec) {
  if (spec.is_euclidean()) return CostSpec::euclidean(Rational(1));
  return spec;
}

BoundReport verify_theorem4(const Instance& instance, const Rational& p, std::size_t subset_guard) {
  if (p < Rational(1)) throw InvalidP("exponent must satisfy p >= 1, got " + p.str());
  const Instance base = instance.with_cost(base_cost(instance.cost_spec()));
  const Instance powered = base.with_cost(base.cost_spec().powered(p));

  BoundReport report;
  report.p = p;
  const SolveResult solved = solve_optimal(powered);
  const TransportPlan reduced = minimize_support(solved.plan, solved.potentials, powered);
  const Decomposition dec = decompose(reduced);
  report.w_cp = solved.objective;
  report.w_inf = w_infinity(base).threshold;
  report.alpha_p = alpha_of_model(dec.model);

  const RootSum w_inf_p = report.w_inf.pow(p).to_root_sum();
  report.lhs = w_inf_p * report.alpha_p;
  report.rhs = report.w_cp;
  report.slack = report.rhs - report.lhs;
  report.holds = report.slack.sign() >= 0;
  report.tight = report.slack.is_zero();
  if (instance.rows() + instance.cols() <= subset_guard) {
    report.alpha_uniform = alpha_uniform(instance.mu(), instance.nu(), subset_guard).value;
    report.uniform_lhs = w_inf_p * *report.alpha_uniform;
    report.uniform_holds = *report.uniform_lhs <= report.rhs;
  }
  const double inv_p = 1.0 / p.to_double();
  report.root_lhs = report.w_inf.to_double();
  report.root_rhs = std::pow(report.w_cp.to_double(), inv_p) / std::pow(report.alpha_p.to_double(), inv_p);
  return report;
}

Instance epsilon_instance(const Rational& epsilon, const Rational& p) {
  if (epsilon.sign() <= 0 || epsilon >= Rational(1)) {
    throw ValidationError("epsilon must lie in (0, 1), got " + epsilon.str());
  }
  const Rational half(1, 2);
  std::vector<Point> line{Point{{Rational(0)}, std::nullopt}, Point{{Rational(1)}, std::nullopt}};
  DiscreteMeasure mu(line, {half, half});
  DiscreteMeasure nu(line, {(Rational(1) - epsilon) * half, (Rational(1) + epsilon) * half});
  return Instance(std::move(mu), std::move(nu), CostSpec::euclidean(p));
}

CounterexampleReport counterexample_divergence(const Rational& epsilon) {
  CounterexampleReport report;
  report.epsilon = epsilon;
  report.w_inf = w_infinity(epsilon_instance(epsilon, Rational(1))).threshold;
  const SolveResult squared = solve_optimal(epsilon_instance(epsilon, Rational(2)));
  report.w2_squared = *squared.objective.as_rational();
  const auto cube = report.w_inf.pow(Rational(3)).to_root_sum().as_rational();
  if (!cube) throw Error("bottleneck cube is not rational");
  report.ratio = *cube / report.w2_squared;
  return report;
}

}  // namespace otstruct
