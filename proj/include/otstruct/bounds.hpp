#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "otstruct/bottleneck.hpp"
#include "otstruct/measures.hpp"
#include "otstruct/root_sum.hpp"
#include "otstruct/structure.hpp"

namespace otstruct {

/// Smallest atom of the diffusive parts. When one diffusive part is empty the
/// minimum runs over the other alone. Throws EmptyModel if both are empty.
Rational alpha_of_model(const DiffusiveModel& model);

struct UniformAlpha {
  Rational value;
  std::vector<std::size_t> rows;  // A, indices into mu
  std::vector<std::size_t> cols;  // B, indices into nu
};

inline constexpr std::size_t kDefaultSubsetGuard = 24;

/// min over subset pairs (A, B) with nonzero difference of
/// |mu(A) - nu(B)|, by sorting both subset-sum lists and scanning nearest
/// neighbours. Requires m + n <= guard.
UniformAlpha alpha_uniform(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           std::size_t guard = kDefaultSubsetGuard);

struct AlphaReport {
  Rational alpha_model;
  std::optional<Rational> alpha_uniform;
  std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> achieving_pair;
};

/// (sum over mu_d of c(x, h1 x) mu_d[x], sum over nu_d of c(h2 y, y) nu_d[y]).
std::pair<RootSum, RootSum> cost_split(const DiffusiveModel& model, const Instance& instance);

/// Largest arc cost used by either deterministic branch (0 for an empty model).
CostValue t_infinity_of_model(const DiffusiveModel& model, const Instance& instance);

/// Solve, reduce support, decompose: the trim-candidate pipeline shared by
/// the verification routines.
struct PipelineResult {
  SolveResult solved;
  TransportPlan reduced;
  Decomposition decomposition;
  TrimVerdict trim;
};

PipelineResult run_pipeline(const Instance& instance, std::size_t oracle_guard = kDefaultOracleGuard);

struct Corollary1Report {
  PipelineResult pipeline;
  RootSum w_c;
  ThresholdCertificate w_inf;
  AlphaReport alpha;
  RootSum rhs;  // alpha * W_inf
  bool holds = false;
  bool tight = false;
};

/// W_c >= alpha * W_inf with alpha from the constructed model.
Corollary1Report verify_corollary1(const Instance& instance, std::size_t oracle_guard = kDefaultOracleGuard,
                                   std::size_t subset_guard = kDefaultSubsetGuard);

struct BoundReport {
  Rational p;
  RootSum w_cp;             // optimal transport cost under c^p
  CostValue w_inf;          // bottleneck distance under c
  Rational alpha_p;         // from the decomposed plan under c^p
  RootSum lhs;              // alpha_p * W_inf^p
  RootSum rhs;              // equals w_cp
  RootSum slack;
  bool holds = false;
  bool tight = false;
  std::optional<Rational> alpha_uniform;
  std::optional<RootSum> uniform_lhs;
  std::optional<bool> uniform_holds;
  /// Root form W_inf <= W_cp^(1/p) / alpha_p^(1/p), in floating point.
  double root_lhs = 0.0;
  double root_rhs = 0.0;
};

/// The base cost c is the Euclidean distance for Euclidean instances and the
/// matrix itself otherwise; c_p = c^p. Checked exactly in the power form
/// alpha_p * W_inf(c)^p <= W(c_p). Requires p >= 1 (InvalidP otherwise) and
/// an integer p for Euclidean instances.
BoundReport verify_theorem4(const Instance& instance, const Rational& p,
                            std::size_t subset_guard = kDefaultSubsetGuard);

/// Base cost used by verify_theorem4.
CostSpec base_cost(const CostSpec& spec);

struct CounterexampleReport {
  Rational epsilon;
  CostValue w_inf;      // Euclidean bottleneck distance
  Rational w2_squared;  // optimal cost under |x - y|^2
  Rational ratio;       // w_inf^3 / w2_squared
};

/// mu = 1/2 d0 + 1/2 d1, nu = (1-e)/2 d0 + (1+e)/2 d1 on the line.
Instance epsilon_instance(const Rational& epsilon, const Rational& p = Rational(2));

/// Builds the two-point family above and returns W_inf^3 / W_2^2 = 2/epsilon,
/// which is unbounded as epsilon -> 0: no constant independent of nu can bound
/// W_inf^(p+d) by W_p^p for discrete measures.
CounterexampleReport counterexample_divergence(const Rational& epsilon);

}  // namespace otstruct
