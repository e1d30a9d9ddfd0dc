#include "qamean/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qamean/errors.hpp"

namespace qam {

std::string to_string(ConvexityKind k) {
  switch (k) {
    case ConvexityKind::Convex:
      return "Convex";
    case ConvexityKind::Concave:
      return "Concave";
    case ConvexityKind::ArithmeticBoth:
      return "ArithmeticBoth";
    case ConvexityKind::Neither:
      return "Neither";
  }
  return {};
}

double comparison_tolerance(const WorkingInterval& interval) { return 1e-9 * interval.width(); }

RhoTest test_positive_concave(const ScalarGrid& rho) {
  const WorkingInterval& dom = rho.interval();
  const auto r = rho.values();
  const std::size_t n = r.size();

  double max_abs = 0.0;
  std::size_t argmin = 0;
  for (std::size_t k = 0; k < n; ++k) {
    max_abs = std::max(max_abs, std::fabs(r[k]));
    if (r[k] < r[argmin]) argmin = k;
  }
  const double pos_floor = 1e-10 * dom.width();
  const double cc_slack = 1e-8 * max_abs;

  double max_d2 = -std::numeric_limits<double>::infinity();
  std::size_t argmax = 1;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double d2 = (r[k - 1] + r[k + 1]) - 2.0 * r[k];
    if (d2 > max_d2) {
      max_d2 = d2;
      argmax = k;
    }
  }

  RhoTest t;
  t.positivity_margin = r[argmin] - pos_floor;
  t.concavity_margin = cc_slack - max_d2;
  if (!(t.positivity_margin > 0.0)) t.nonpositive_x = dom.node(argmin);
  if (!(t.concavity_margin >= 0.0)) {
    t.violating_triple =
        GridTriple{dom.node(argmax - 1), dom.node(argmax), dom.node(argmax + 1), max_d2};
  }
  t.passed = !t.nonpositive_x && !t.violating_triple;
  return t;
}

ConvexityClass classify(const Generator& gen) {
  const Generator up = normalize(gen);
  ConvexityClass out{ConvexityKind::Neither,
                     {second_derivative_branch(up.tabulate()), std::nullopt, std::nullopt},
                     up.domain()};

  switch (out.evidence.branch.kind) {
    case CurvatureBranch::Kind::Degenerate:
      out.value = ConvexityKind::ArithmeticBoth;
      return out;
    case CurvatureBranch::Kind::Vanishing:
    case CurvatureBranch::Kind::SignChange:
      return out;
    case CurvatureBranch::Kind::NowhereVanishing:
      break;
  }

  out.evidence.convex_test = test_positive_concave(rho(up));
  if (out.evidence.convex_test->passed) {
    out.value = ConvexityKind::Convex;
    return out;
  }
  out.evidence.concave_test = test_positive_concave(rho(normalize(up.reflected())));
  if (out.evidence.concave_test->passed) out.value = ConvexityKind::Concave;
  return out;
}

TrialReport dominates_arithmetic(const Generator& gen, std::size_t n_max, std::size_t trials,
                                 Direction direction, std::uint64_t seed) {
  if (n_max < 2) throw UsageError("dominates_arithmetic requires n_max >= 2");
  const WorkingInterval dom = gen.domain();

  auto evaluate = [&](const std::vector<std::vector<double>>& in) {
    const double q = qa_mean(gen, in[0]);
    const double a = arithmetic_mean(in[0]);
    return direction == Direction::AtLeast ? TrialOutcome{a, q, in} : TrialOutcome{q, a, in};
  };
  return run_trials(
      direction == Direction::AtLeast ? "qa>=A" : "qa<=A", seed, trials,
      comparison_tolerance(dom),
      [&](TrialStream& s) { return evaluate({s.tuple(s.integer(2, n_max), dom)}); }, evaluate);
}

TrialReport jensen_midpoint_check(const Mean& mean, std::size_t n_max, std::size_t trials,
                                  Sense sense, std::uint64_t seed) {
  if (n_max < 2) throw UsageError("jensen_midpoint_check requires n_max >= 2");
  const WorkingInterval dom = mean.domain();

  auto evaluate = [&](const std::vector<std::vector<double>>& in) {
    const auto& x = in[0];
    const auto& y = in[1];
    std::vector<double> mid(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mid[i] = 0.5 * (x[i] + y[i]);
    const double at_mid = mean(mid);
    const double avg = 0.5 * (mean(x) + mean(y));
    return sense == Sense::Convex ? TrialOutcome{at_mid, avg, in} : TrialOutcome{avg, at_mid, in};
  };
  return run_trials(
      sense == Sense::Convex ? "jensen-convex" : "jensen-concave", seed, trials,
      comparison_tolerance(dom),
      [&](TrialStream& s) {
        const std::size_t n = s.integer(2, n_max);
        auto x = s.tuple(n, dom);
        auto y = s.tuple(n, dom);
        return evaluate({std::move(x), std::move(y)});
      },
      evaluate);
}

}  // namespace qam
