#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qamean/grid.hpp"

namespace qam {

/// Inputs of a failing trial together with both sides of the checked
/// inequality lhs <= rhs.
struct Witness {
  std::vector<std::vector<double>> inputs;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Outcome of a sampled check of lhs <= rhs (+ tolerance).
struct TrialReport {
  std::string check;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double tolerance = 0.0;
  /// min over trials of rhs - lhs.
  double worst_margin = std::numeric_limits<double>::infinity();
  /// First failing trial by index, shrunk toward the diagonal.
  std::optional<Witness> witness;
  /// Candidates discarded before testing (maximality_check only).
  std::size_t rejected = 0;

  bool passed() const noexcept { return failures == 0; }
};

/// Independent random stream for one trial, derived from (seed, trial index).
/// Draws are mapped to doubles without std:: distributions so reports are
/// reproducible across standard libraries.
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t index);

  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi].
  std::size_t integer(std::size_t lo, std::size_t hi);
  std::vector<double> tuple(std::size_t n, const WorkingInterval& interval);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[integer(0, i - 1)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Relation checked per trial: lhs <= rhs + tol, or |lhs - rhs| <= tol.
enum class Relation { LessEqual, Equal };

struct TrialOutcome {
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<std::vector<double>> inputs;
};

using TrialFn = std::function<TrialOutcome(TrialStream&)>;
using Reevaluate = std::function<TrialOutcome(const std::vector<std::vector<double>>&)>;

/// Runs `trials` independent trials; trial i draws from TrialStream(seed, i).
/// A trial fails when lhs > rhs + tolerance (or |lhs - rhs| > tolerance for
/// Relation::Equal, whose margin is -|lhs - rhs|). When `reevaluate` is given
/// the first witness is shrunk with shrink_witness().
TrialReport run_trials(std::string check, std::uint64_t seed, std::size_t trials,
                       double tolerance, const TrialFn& trial, const Reevaluate& reevaluate = {},
                       Relation relation = Relation::LessEqual);

/// Moves witness coordinates halfway toward the centre of all entries, one at
/// a time, keeping a move while the violation stays above
/// max(tolerance, half the original violation).
Witness shrink_witness(Witness w, const Reevaluate& reevaluate, double tolerance,
                       Relation relation = Relation::LessEqual);

/// Mixes (seed, stream) into an independent seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace qam
