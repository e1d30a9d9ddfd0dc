#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qamean/generator.hpp"
#include "qamean/mean.hpp"
#include "qamean/sampling.hpp"

namespace qam {

enum class ConvexityKind { Convex, Concave, ArithmeticBoth, Neither };

std::string to_string(ConvexityKind k);

struct GridTriple {
  double left;
  double mid;
  double right;
  double second_difference;
};

/// Positivity and midpoint concavity of a sampled rho profile.
struct RhoTest {
  bool passed = false;
  /// min rho - 1e-10 (hi - lo); must be > 0.
  double positivity_margin = 0.0;
  /// 1e-8 max|rho| - max second difference; must be >= 0.
  double concavity_margin = 0.0;
  std::optional<double> nonpositive_x;
  std::optional<GridTriple> violating_triple;
};

RhoTest test_positive_concave(const ScalarGrid& rho);

struct ConvexityEvidence {
  CurvatureBranch branch;
  /// rho of the increasing generator; absent on the degenerate / sign-change branches.
  std::optional<RhoTest> convex_test;
  /// rho of the reflected generator, in reflected coordinates; run only when
  /// the convex test fails.
  std::optional<RhoTest> concave_test;
};

/// Verdict about QA_f on the generator's working interval only.
struct ConvexityClass {
  ConvexityKind value;
  ConvexityEvidence evidence;
  WorkingInterval interval;
};

/// Convex iff f'' is nowhere vanishing and f'/f'' (f increasing) is positive
/// and concave; Concave iff the same holds for the reflected generator;
/// ArithmeticBoth when f'' == 0.
ConvexityClass classify(const Generator& gen);

enum class Direction { AtLeast, AtMost };

/// Sampled check of QA_f >= A (AtLeast) or QA_f <= A (AtMost) on random
/// tuples of sizes 2..n_max drawn uniformly from the generator domain.
TrialReport dominates_arithmetic(const Generator& gen, std::size_t n_max, std::size_t trials,
                                 Direction direction, std::uint64_t seed = 0);

enum class Sense { Convex, Concave };

/// Sampled midpoint test M((x+y)/2) <= (M(x)+M(y))/2 (or >=) on random pairs
/// of tuples of sizes 2..n_max.
TrialReport jensen_midpoint_check(const Mean& mean, std::size_t n_max, std::size_t trials,
                                  Sense sense, std::uint64_t seed = 0);

/// 1e-9 (hi - lo): absolute slack for sampled comparisons of mean values.
double comparison_tolerance(const WorkingInterval& interval);

}  // namespace qam
