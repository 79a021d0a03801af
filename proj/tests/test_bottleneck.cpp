#include "doctest.h"
#include "fixtures.hpp"
#include "otstruct/bottleneck.hpp"
#include "otstruct/errors.hpp"
#include "otstruct/random_instances.hpp"

using namespace otstruct;
using fixture::pt;
using fixture::qs;

namespace {

// Recomputes a Hall cut's deficit from the instance alone.
Rational deficit_of(const Instance& inst, const HallCut& cut) {
  Rational supply, demand;
  std::vector<char> reached(inst.cols(), 0);
  for (std::size_t i : cut.rows) {
    supply += inst.mu().mass(i);
    for (std::size_t j = 0; j < inst.cols(); ++j) {
      if (inst.cost(i, j) <= cut.threshold) reached[j] = 1;
    }
  }
  for (std::size_t j = 0; j < inst.cols(); ++j) {
    if (reached[j]) demand += inst.nu().mass(j);
  }
  return supply - demand;
}

void check_certificate(const Instance& inst, const ThresholdCertificate& cert) {
  CHECK(certificate_valid(cert, inst));
  CHECK(has_instance_marginals(cert.witness, inst));
  std::optional<CostValue> worst;
  for (const auto& e : cert.witness.entries()) {
    CHECK(inst.cost(e.i, e.j) <= cert.threshold);
    if (!worst || inst.cost(e.i, e.j) > *worst) worst = inst.cost(e.i, e.j);
  }
  REQUIRE(worst.has_value());
  CHECK(*worst == cert.threshold);
  const auto costs = distinct_costs(inst);
  CHECK(cert.distinct_costs == costs.size());
  CHECK(costs[cert.threshold_index] == cert.threshold);
  if (cert.threshold_index == 0) {
    CHECK_FALSE(cert.below.has_value());
  } else {
    REQUIRE(cert.below.has_value());
    CHECK(cert.below->threshold == costs[cert.threshold_index - 1]);
    CHECK(cert.below->deficit.sign() > 0);
    CHECK(deficit_of(inst, *cert.below) == cert.below->deficit);
  }
}

Instance transformed(const Instance& inst) {
  auto values = inst.cost_spec().values;
  for (auto& row : values) {
    for (auto& v : row) v = v * v * v + Rational(3) * v + Rational(1, 2);
  }
  return inst.with_cost(CostSpec::matrix(std::move(values)));
}

}  // namespace

TEST_CASE("bottleneck examples") {
  const Instance eps = fixture::load("epsilon.json");
  const ThresholdCertificate e = w_infinity(eps);
  CHECK(e.threshold.str() == "1");
  check_certificate(eps, e);
  CHECK(w_infinity(fixture::load("epsilon_quarter.json")).threshold == CostValue::rational(Rational(1)));

  const Instance identity = fixture::load("identity.json");
  const ThresholdCertificate id = w_infinity(identity);
  CHECK(id.threshold == CostValue::rational(Rational(0)));
  CHECK(id.threshold.str() == "0");
  check_certificate(identity, id);

  const ThresholdCertificate single = w_infinity(fixture::load("singleton.json"));
  CHECK(single.threshold.str() == "3");
  const Instance diag = fixture::euclid({pt({0, 0})}, qs({"2"}), {pt({1, 1})}, qs({"2"}), 1);
  CHECK(w_infinity(diag).threshold.to_root_sum() == RootSum::sqrt_of(Rational(2)));
}

TEST_CASE("Hall oracle examples") {
  CHECK(w_infinity_bruteforce(fixture::load("epsilon.json")) == CostValue::rational(Rational(1)));
  const Instance one = fixture::matrix(qs({"3"}), qs({"3"}), {{Rational(7, 2)}});
  CHECK(w_infinity_bruteforce(one) == CostValue::rational(Rational(7, 2)));
  CHECK(w_infinity(one).threshold == CostValue::rational(Rational(7, 2)));
  CHECK_THROWS_AS(w_infinity_bruteforce(InstanceGenerator(4).matrix(13, 2)), InstanceTooLarge);
}

TEST_CASE("distinct costs are sorted and deduplicated exactly") {
  const Instance inst = fixture::matrix(qs({"1", "1"}), qs({"1", "1"}), {{Rational(2), Rational(1)}, {Rational(2), Rational(2)}});
  const auto costs = distinct_costs(inst);
  REQUIRE(costs.size() == 2);
  CHECK(costs[0] == CostValue::rational(Rational(1)));
  CHECK(costs[1] == CostValue::rational(Rational(2)));

  // sqrt(4) and 2 are the same threshold.
  const Instance mixed = fixture::euclid({pt({0, 0}), pt({5, 5})}, qs({"1", "1"}), {pt({2, 0}), pt({1, 1})}, qs({"1", "1"}), 1);
  const auto m = distinct_costs(mixed);
  for (std::size_t k = 1; k < m.size(); ++k) CHECK(m[k - 1] < m[k]);
}

TEST_CASE("bottleneck agrees with the Hall oracle on random instances") {
  InstanceGenerator gen(6006);
  for (int k = 0; k < 60; ++k) {
    const std::size_t m = 1 + gen.uniform(0, 5), n = 1 + gen.uniform(0, 5);
    const Instance inst = k % 2 ? gen.matrix(m, n) : gen.euclidean(m, n, Rational(1 + k % 3));
    const ThresholdCertificate cert = w_infinity(inst);
    CHECK(cert.threshold == w_infinity_bruteforce(inst));
    check_certificate(inst, cert);
  }
}

TEST_CASE("bottleneck certificates on larger instances") {
  InstanceGenerator gen(9);
  for (std::size_t n : {20u, 40u, 80u}) {
    const Instance inst = gen.euclidean(n, n + 3, Rational(1));
    check_certificate(inst, w_infinity(inst));
  }
}

TEST_CASE("power identity examples") {
  const Instance line = fixture::load("epsilon.json").with_cost(CostSpec::euclidean(Rational(1)));
  const PowerIdentityReport r = power_identity_check(line, Rational(2));
  CHECK(r.holds());
  CHECK(r.threshold_base == CostValue::rational(Rational(1)));
  CHECK(r.threshold_powered == CostValue::rational(Rational(1)));
  CHECK(power_identity_check(fixture::load("remark.json"), Rational(1)).holds());
  CHECK_THROWS_AS(power_identity_check(line, Rational(0)), InvalidP);
}

TEST_CASE("threshold index is invariant under increasing cost maps") {
  InstanceGenerator gen(1001);
  for (int k = 0; k < 30; ++k) {
    const Instance inst = gen.matrix(2 + gen.uniform(0, 4), 2 + gen.uniform(0, 4));
    const Instance lifted = transformed(inst);
    const ThresholdCertificate a = w_infinity(inst), b = w_infinity(lifted);
    CHECK(a.threshold_index == b.threshold_index);
    for (std::size_t i = 0; i < inst.rows(); ++i) {
      for (std::size_t j = 0; j < inst.cols(); ++j) {
        CHECK((inst.cost(i, j) <= a.threshold) == (lifted.cost(i, j) <= b.threshold));
      }
    }
    for (long p : {2L, 3L}) CHECK(power_identity_check(inst, Rational(p)).holds());
  }
  for (int k = 0; k < 20; ++k) {
    const Instance inst = gen.euclidean(2 + gen.uniform(0, 4), 2 + gen.uniform(0, 4), Rational(1));
    for (long p : {2L, 3L}) CHECK(power_identity_check(inst, Rational(p)).holds());
  }
}

TEST_CASE("tampered certificates are rejected") {
  const Instance eps = fixture::load("epsilon.json");
  ThresholdCertificate cert = w_infinity(eps);
  REQUIRE(certificate_valid(cert, eps));
  ThresholdCertificate wrong_value = cert;
  wrong_value.threshold = CostValue::rational(Rational(2));
  CHECK_FALSE(certificate_valid(wrong_value, eps));
  ThresholdCertificate no_cut = cert;
  no_cut.below.reset();
  CHECK_FALSE(certificate_valid(no_cut, eps));
  if (cert.below) {
    ThresholdCertificate bad_cut = cert;
    bad_cut.below->rows.clear();
    CHECK_FALSE(certificate_valid(bad_cut, eps));
  }
}
