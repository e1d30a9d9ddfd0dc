#include "qamean/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "qamean/errors.hpp"

namespace qam {

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  engine_.seed(seq);
}

double TrialStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double TrialStream::uniform(double lo, double hi) {
  return std::clamp(lo + (hi - lo) * uniform(), lo, hi);
}

std::size_t TrialStream::integer(std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
}

std::vector<double> TrialStream::tuple(std::size_t n, const WorkingInterval& interval) {
  std::vector<double> v(n);
  for (double& x : v) x = uniform(interval.lo(), interval.hi());
  return v;
}

namespace {

double violation(const TrialOutcome& o, Relation relation) {
  return relation == Relation::Equal ? std::fabs(o.lhs - o.rhs) : o.lhs - o.rhs;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TrialReport run_trials(std::string check, std::uint64_t seed, std::size_t trials,
                       double tolerance, const TrialFn& trial, const Reevaluate& reevaluate,
                       Relation relation) {
  if (trials < 1) throw UsageError("at least one trial is required");
  TrialReport report;
  report.check = std::move(check);
  report.seed = seed;
  report.trials = trials;
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < trials; ++i) {
    TrialStream stream(seed, i);
    TrialOutcome o = trial(stream);
    const double margin = -violation(o, relation);
    report.worst_margin = std::min(report.worst_margin, margin);
    if (!(margin >= -tolerance)) {
      ++report.failures;
      if (!report.witness) report.witness = Witness{std::move(o.inputs), o.lhs, o.rhs};
    }
  }
  if (report.witness && reevaluate) {
    report.witness =
        shrink_witness(std::move(*report.witness), reevaluate, tolerance, relation);
  }
  return report;
}

Witness shrink_witness(Witness w, const Reevaluate& reevaluate, double tolerance,
                       Relation relation) {
  const double floor =
      std::max(tolerance, 0.5 * violation(TrialOutcome{w.lhs, w.rhs, {}}, relation));
  for (int pass = 0; pass < 16; ++pass) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& row : w.inputs) {
      for (double x : row) sum += x;
      count += row.size();
    }
    const double centre = sum / static_cast<double>(count);

    bool moved = false;
    for (std::size_t i = 0; i < w.inputs.size(); ++i) {
      for (std::size_t j = 0; j < w.inputs[i].size(); ++j) {
        auto candidate = w.inputs;
        const double x = candidate[i][j];
        candidate[i][j] = x + 0.5 * (centre - x);
        if (candidate[i][j] == x) continue;
        TrialOutcome o = reevaluate(candidate);
        if (violation(o, relation) > floor) {
          w = Witness{std::move(candidate), o.lhs, o.rhs};
          moved = true;
        }
      }
    }
    if (!moved) break;
  }
  return w;
}

}  // namespace qam
