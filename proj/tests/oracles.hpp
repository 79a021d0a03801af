#pragma once

// Test-only reference computations, written independently of the library's
// algorithms so that agreement means something.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "otstruct/measures.hpp"
#include "otstruct/plan.hpp"
#include "otstruct/structure.hpp"

namespace oracle {

using otstruct::Instance;
using otstruct::Rational;
using otstruct::RootSum;
using otstruct::TransportPlan;

struct Vertex {
  TransportPlan plan;
  RootSum cost;
};

/// Every vertex of the transportation polytope, found by solving the
/// marginal equations exactly (Gaussian elimination) on every set of at most
/// m + n - 1 cells with linearly independent columns. Meant for m * n <= 16.
std::vector<Vertex> enumerate_vertices(const Instance& instance);

struct Summary {
  RootSum optimum;
  std::size_t minimal_support = 0;
  std::vector<TransportPlan> minimal_plans;
  /// min over vertices of the largest support cost, as a root-field value.
  RootSum bottleneck;
};

Summary summarize(const Instance& instance);

/// min |mu(A) - nu(B)| over all pairs with a nonzero difference, by a
/// straight double loop over subsets.
Rational naive_alpha_uniform(const std::vector<Rational>& mu, const std::vector<Rational>& nu);

/// base^exponent at the given binary precision, rounded to nearest, as a
/// decimal string with `digits` significant digits.
std::string mpfr_power(const Rational& base, const Rational& exponent, long bits = 512, int digits = 60);

/// Sign of a^x - b^y evaluated with MPFR at `bits` precision; 0 when the
/// difference is below 2^-(bits/2) in absolute value.
int mpfr_compare_powers(const Rational& a, const Rational& x, const Rational& b, const Rational& y, long bits = 512);

/// Replays a peel trace symbolically: every residual row mass must equal
/// mu(A) - nu(B) and every column residual nu(B) - mu(A) for subsets A, B of
/// the initial atoms, with each atom used at most once. Returns a description
/// of the first failure, or nullopt.
std::optional<std::string> replay_trace_subsets(const otstruct::PeelTrace& trace);

}  // namespace oracle
