#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "otstruct/errors.hpp"
#include "otstruct/random_instances.hpp"
#include "otstruct/serialize.hpp"
#include "otstruct/solver.hpp"
#include "otstruct/structure.hpp"

using namespace otstruct;
using fixture::pt;
using fixture::qs;

namespace {

std::size_t nonzero(const std::vector<Rational>& w) {
  return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](const Rational& x) { return !x.is_zero(); }));
}

std::size_t residual_support(const std::vector<Rational>& mu, const std::vector<Rational>& nu) {
  return nonzero(mu) + nonzero(nu);
}

void check_sound(const TransportPlan& plan) {
  const Decomposition d = decompose(plan);
  const auto [rows, cols] = marginals(plan);
  CHECK(d.model.consistent());
  CHECK(reconstruct(d.model) == plan);
  CHECK(d.model.mu() == rows);
  CHECK(d.model.nu() == cols);
  for (std::size_t x = 0; x < d.model.rows(); ++x) CHECK(d.model.h1[x].has_value() == !d.model.mu_d[x].is_zero());
  for (std::size_t y = 0; y < d.model.cols(); ++y) CHECK(d.model.h2[y].has_value() == !d.model.nu_d[y].is_zero());
  const std::size_t diffusive = nonzero(d.model.mu_d) + nonzero(d.model.nu_d);
  CHECK(plan.support_size() <= diffusive);
  CHECK(diffusive <= plan.rows() + plan.cols());
  CHECK(d.trace.steps.size() <= std::max(plan.rows(), plan.cols()));
  std::size_t before = residual_support(d.trace.initial_mu, d.trace.initial_nu);
  for (const auto& step : d.trace.steps) {
    const std::size_t after = residual_support(step.residual_mu, step.residual_nu);
    CHECK(after < before);
    before = after;
  }
  CHECK(before == 0);
  const auto replay = oracle::replay_trace_subsets(d.trace);
  CHECK_MESSAGE(!replay.has_value(), replay.value_or(""));
}

DiffusiveModel model_with_nu_d_on_second_column() {
  DiffusiveModel m(2, 2);
  m.mu_d = qs({"1/4", "1/2"});
  m.mu_c = qs({"1/4", "0"});
  m.nu_d = qs({"0", "1/4"});
  m.nu_c = qs({"1/4", "1/2"});
  m.h1 = {std::size_t{0}, std::size_t{1}};
  m.h2 = {std::nullopt, std::size_t{0}};
  return m;
}

DiffusiveModel model_with_nu_d_on_first_column() {
  DiffusiveModel m(2, 2);
  m.mu_d = qs({"1/4", "1/2"});
  m.mu_c = qs({"1/4", "0"});
  m.nu_d = qs({"1/4", "0"});
  m.nu_c = qs({"0", "3/4"});
  m.h1 = {std::size_t{1}, std::size_t{1}};
  m.h2 = {std::size_t{0}, std::nullopt};
  return m;
}

}  // namespace

TEST_CASE("minimize_support on the cube plan") {
  const Instance cube = fixture::load("hypercube.json");
  const TransportPlan twelve = load_plan(fixture::instance_path("hypercube_plan.json")).plan;
  const DualPotentials duals = solve_optimal(cube).potentials;
  CHECK(complementary_slackness_holds(twelve, duals, cube));
  const TransportPlan reduced = minimize_support(twelve, duals, cube);
  CHECK(reduced.support_size() == 4);
  CHECK(transport_cost(reduced, cube) == RootSum(1));
  CHECK(has_instance_marginals(reduced, cube));
  CHECK(SupportGraph(reduced).is_forest());
  CHECK(is_trim_certified(reduced, cube).status == TrimStatus::Trim);
}

TEST_CASE("minimize_support leaves blocked vertex plans alone") {
  const Instance eps = fixture::load("epsilon.json");
  const SolveResult r = solve_optimal(eps);
  REQUIRE(r.plan.support_size() == 3);
  CHECK(minimize_support(r.plan, r.potentials, eps) == r.plan);

  const Instance remark = fixture::load("remark.json");
  const SolveResult rr = solve_optimal(remark);
  CHECK(minimize_support(rr.plan, rr.potentials, remark) == rr.plan);
}

TEST_CASE("minimize_support rejects plans the potentials do not certify") {
  const Instance eps = fixture::load("epsilon.json");
  const TransportPlan poor(2, 2, {{0, 1, Rational(1, 2)}, {1, 0, Rational(1, 4)}, {1, 1, Rational(1, 4)}});
  CHECK_THROWS_AS(minimize_support(poor, solve_optimal(eps).potentials, eps), NotOptimal);
}

TEST_CASE("minimize_support on random optimal mixtures") {
  InstanceGenerator gen(8080);
  int reduced_cases = 0;
  for (int k = 0; k < 40; ++k) {
    const Instance inst = gen.matrix(2 + gen.uniform(0, 2), 2 + gen.uniform(0, 2), 2);
    const BruteForceResult bf = brute_force_optimal(inst);
    const auto vertices = oracle::enumerate_vertices(inst);
    std::vector<PlanEntry> mix;
    std::size_t used = 0;
    for (const auto& v : vertices) {
      if (v.cost != bf.optimum) continue;
      ++used;
      for (const auto& e : v.plan.entries()) mix.push_back(e);
    }
    for (auto& e : mix) e.mass /= Rational(static_cast<long>(used));
    const TransportPlan blend(inst.rows(), inst.cols(), mix);
    REQUIRE(has_instance_marginals(blend, inst));
    const SolveResult r = solve_optimal(inst);
    const TransportPlan reduced = minimize_support(blend, r.potentials, inst);
    CHECK(transport_cost(reduced, inst) == bf.optimum);
    CHECK(has_instance_marginals(reduced, inst));
    CHECK(SupportGraph(reduced).is_forest());
    CHECK(reduced.support_size() <= blend.support_size());
    if (reduced.support_size() < blend.support_size()) ++reduced_cases;
  }
  CHECK(reduced_cases > 0);
}

TEST_CASE("trim certification examples") {
  const Instance cube = fixture::load("hypercube.json");
  const TrimVerdict v = is_trim_certified(load_plan(fixture::instance_path("hypercube_plan.json")).plan, cube);
  CHECK(v.status == TrimStatus::NotTrim);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->support_size() == 4);
  CHECK(transport_cost(*v.witness, cube) == RootSum(1));
  CHECK(has_instance_marginals(*v.witness, cube));
  CHECK(v.minimal_support == std::optional<std::size_t>(4));

  const Instance single = fixture::load("singleton.json");
  CHECK(is_trim_certified(TransportPlan(1, 1, {{0, 0, Rational(1)}}), single).status == TrimStatus::Trim);
  CHECK(is_trim_certified(fixture::remark_plan(), fixture::load("remark.json")).status == TrimStatus::Trim);

  const Instance big = InstanceGenerator(2).matrix(6, 6);
  CHECK(is_trim_certified(solve_optimal(big).plan, big).status == TrimStatus::Unverifiable);
}

TEST_CASE("trim certification agrees with the brute-force oracle") {
  InstanceGenerator gen(1234);
  for (int k = 0; k < 40; ++k) {
    const std::size_t m = 1 + gen.uniform(0, 4), n = 1 + gen.uniform(0, 4);
    const Instance inst = k % 2 ? gen.matrix(m, n, 2) : gen.euclidean(m, n, Rational(1));
    const BruteForceResult bf = brute_force_optimal(inst);
    const TransportPlan plan = solve_optimal(inst).plan;
    const TrimVerdict v = is_trim_certified(plan, inst);
    CHECK(v.optimal);
    CHECK(v.status == (plan.support_size() == bf.minimal_support ? TrimStatus::Trim : TrimStatus::NotTrim));
    CHECK(v.minimal_support == std::optional<std::size_t>(std::min(plan.support_size(), bf.minimal_support)));
    if (v.witness) {
      CHECK(transport_cost(*v.witness, inst) == bf.optimum);
      CHECK(v.witness->support_size() == bf.minimal_support);
    }
    for (const auto& minimal : bf.minimal_plans) CHECK(is_trim_certified(minimal, inst).status == TrimStatus::Trim);
  }
}

TEST_CASE("trim certification flags plans that are not optimal") {
  const Instance eps = fixture::load("epsilon.json");
  const TransportPlan poor(2, 2, {{0, 1, Rational(1, 2)}, {1, 0, Rational(1, 4)}, {1, 1, Rational(1, 4)}});
  const TrimVerdict v = is_trim_certified(poor, eps);
  CHECK_FALSE(v.optimal);
  CHECK(v.status == TrimStatus::NotTrim);
  CHECK_THROWS_AS(is_trim_certified(TransportPlan(2, 2, {{0, 0, Rational(1)}}), eps), ValidationError);
}

TEST_CASE("decompose the two-by-two trim plan") {
  const Decomposition d = decompose(fixture::remark_plan());
  CHECK(d.model == model_with_nu_d_on_first_column());
  REQUIRE(d.trace.steps.size() == 2);
  CHECK(d.trace.steps[0].branch == PeelBranch::DoubleLeaf);
  CHECK(d.trace.steps[0].row_leaf == std::optional<LeafArc>(LeafArc{1, 1, Rational(1, 2)}));
  CHECK(d.trace.steps[0].column_leaf == std::optional<LeafArc>(LeafArc{0, 0, Rational(1, 4)}));
  CHECK(d.trace.steps[0].residual_mu == qs({"1/4", "0"}));
  CHECK(d.trace.steps[0].residual_nu == qs({"0", "1/4"}));
  CHECK(d.trace.steps[1].branch == PeelBranch::RowLeafEqual);
  CHECK(reconstruct(d.model) == fixture::remark_plan());
  check_sound(fixture::remark_plan());
}

TEST_CASE("both listed models of the two-by-two plan reconstruct it") {
  for (const DiffusiveModel& m : {model_with_nu_d_on_second_column(), model_with_nu_d_on_first_column()}) {
    CHECK(m.consistent());
    CHECK(reconstruct(m) == fixture::remark_plan());
    CHECK(m.mu() == qs({"1/2", "1/2"}));
    CHECK(m.nu() == qs({"1/4", "3/4"}));
  }
}

TEST_CASE("decompose a single arc") {
  const Decomposition d = decompose(TransportPlan(1, 1, {{0, 0, Rational(1)}}));
  CHECK(d.model.mu_d == qs({"1"}));
  CHECK(d.model.h1[0] == std::optional<std::size_t>(0));
  CHECK(d.model.nu_d == qs({"0"}));
  CHECK(d.model.nu_c == qs({"1"}));
  CHECK(d.model.mu_c == qs({"0"}));
  REQUIRE(d.trace.steps.size() == 1);
  CHECK(d.trace.steps[0].branch == PeelBranch::RowLeafEqual);
}

TEST_CASE("decompose errors") {
  CHECK_THROWS_AS(decompose(load_plan(fixture::instance_path("hypercube_plan.json")).plan), CyclicSupport);
  CHECK_THROWS_AS(decompose(TransportPlan(2, 2)), EmptyPlan);
}

TEST_CASE("column leaf equality is taken when the first row leaf is strict") {
  const TransportPlan plan(3, 2, {{0, 0, Rational(1, 4)}, {1, 1, Rational(1, 2)}, {2, 0, Rational(1, 4)}});
  const Decomposition d = decompose(plan);
  REQUIRE_FALSE(d.trace.steps.empty());
  CHECK(d.trace.steps[0].branch == PeelBranch::ColumnLeafEqual);
  CHECK(d.trace.steps[0].column_leaf == std::optional<LeafArc>(LeafArc{1, 1, Rational(1, 2)}));
  CHECK(d.model.h2[1] == std::optional<std::size_t>(1));
  CHECK(d.model.mu_c[1] == Rational(1, 2));
  check_sound(plan);
}

TEST_CASE("unequal support sizes peel with one-sided leaves") {
  const TransportPlan star(3, 1, {{0, 0, Rational(1)}, {1, 0, Rational(2)}, {2, 0, Rational(3)}});
  const Decomposition d = decompose(star);
  CHECK(d.trace.steps.front().branch == PeelBranch::RowLeafOnly);
  check_sound(star);
  const TransportPlan fan(1, 3, {{0, 0, Rational(1)}, {0, 1, Rational(2)}, {0, 2, Rational(3)}});
  CHECK(decompose(fan).trace.steps.front().branch == PeelBranch::ColumnLeafOnly);
  check_sound(fan);
}

TEST_CASE("reconstruct examples") {
  DiffusiveModel matching(3, 3);
  matching.mu_d = qs({"1/3", "1/6", "1/2"});
  matching.mu_c = qs({"0", "0", "0"});
  matching.nu_d = qs({"0", "0", "0"});
  matching.nu_c = qs({"1/6", "1/2", "1/3"});
  matching.h1 = {std::size_t{2}, std::size_t{0}, std::size_t{1}};
  CHECK(matching.consistent());
  CHECK(reconstruct(matching) ==
        TransportPlan(3, 3, {{0, 2, Rational(1, 3)}, {1, 0, Rational(1, 6)}, {2, 1, Rational(1, 2)}}));

  DiffusiveModel merged(1, 1);
  merged.mu_d = qs({"1/2"});
  merged.nu_d = qs({"1/2"});
  merged.mu_c = qs({"1/2"});
  merged.nu_c = qs({"1/2"});
  merged.h1 = {std::size_t{0}};
  merged.h2 = {std::size_t{0}};
  CHECK(reconstruct(merged) == TransportPlan(1, 1, {{0, 0, Rational(1)}}));

  DiffusiveModel broken = matching;
  broken.h1[0] = std::nullopt;
  CHECK_FALSE(broken.consistent());
}

TEST_CASE("restrict examples") {
  const TransportPlan plan = fixture::remark_plan();
  CHECK(restrict(plan, {{0, 0}, {0, 1}, {1, 1}}) == plan);
  const TransportPlan part = restrict(plan, {{0, 0}, {0, 1}});
  const auto [rows, cols] = marginals(part);
  CHECK(rows == qs({"1/2", "0"}));
  CHECK(cols == qs({"1/4", "1/4"}));
  CHECK(restrict(plan, {}).empty());
  CHECK(restrict(plan, {{1, 0}}).empty());
}

TEST_CASE("marginal sub-problems re-index the plan") {
  const Instance remark = fixture::load("remark.json");
  const TransportPlan part = restrict(fixture::remark_plan(), {{0, 0}, {0, 1}});
  const SubInstance sub = marginal_subproblem(part, remark);
  CHECK(sub.instance.rows() == 1);
  CHECK(sub.instance.cols() == 2);
  CHECK(sub.row_map == std::vector<std::size_t>{0});
  CHECK(sub.col_map == (std::vector<std::size_t>{0, 1}));
  CHECK(sub.plan == TransportPlan(1, 2, {{0, 0, Rational(1, 4)}, {0, 1, Rational(1, 4)}}));
  CHECK(sub.instance.cost(0, 0) == remark.cost(0, 0));
  CHECK(has_instance_marginals(sub.plan, sub.instance));
}

TEST_CASE("decomposition is sound on random forest plans") {
  InstanceGenerator gen(777);
  for (int k = 0; k < 200; ++k) {
    const std::size_t m = 1 + gen.uniform(0, 11), n = 1 + gen.uniform(0, 11);
    check_sound(gen.forest_plan(m, n));
  }
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 1 + gen.uniform(0, 9);
    check_sound(gen.forest_plan(n, n));
  }
}

TEST_CASE("decomposition is sound on solver output") {
  InstanceGenerator gen(31337);
  for (int k = 0; k < 40; ++k) {
    const Instance inst = gen.euclidean(1 + gen.uniform(0, 7), 1 + gen.uniform(0, 7), Rational(1 + k % 3));
    check_sound(solve_optimal(inst).plan);
  }
}

TEST_CASE("peel branch names") {
  CHECK(std::string(to_string(PeelBranch::DoubleLeaf)) != to_string(PeelBranch::RowLeafEqual));
  CHECK(std::string(to_string(TrimStatus::NotTrim)) == "not_trim");
  CHECK(std::string(to_string(TrimStatus::Trim)) == "trim");
  CHECK(std::string(to_string(TrimStatus::Unverifiable)) == "unverifiable");
}
