#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "qamean/generator.hpp"
#include "qamean/grid.hpp"

namespace qam {

double arithmetic_mean(std::span<const double> v);

/// f^{-1}((f(v_1) + ... + f(v_n)) / n).
///
/// The f-values are shifted by f(midpoint of the data) and scaled by their
/// largest magnitude before averaging (QA_{af+b} = QA_f), and the inverse is
/// found by bisection inside [min v, max v], so the result is internal by
/// construction. Inputs are summed in sorted order, which makes the value
/// exactly symmetric in its arguments.
double qa_mean(const Generator& gen, std::span<const double> v);

/// p-th power mean of positive reals; p = 0 is the geometric mean.
double power_mean(double p, std::span<const double> v);

/// A variadic mean on a WorkingInterval.
class Mean {
 public:
  enum class Kind { QuasiArithmetic, Arithmetic, Power, Reflected, Custom };
  using Function = std::function<double(std::span<const double>)>;

  static Mean quasi_arithmetic(Generator gen);
  static Mean arithmetic(const WorkingInterval& domain);
  static Mean power(double p, const WorkingInterval& domain);
  /// Arbitrary mean, e.g. a test double. No internality is enforced.
  static Mean custom(std::string name, const WorkingInterval& domain, Function fn);

  double operator()(std::span<const double> v) const;

  Kind kind() const noexcept { return kind_; }
  const WorkingInterval& domain() const noexcept { return domain_; }
  std::string name() const;
  /// The generator of a QuasiArithmetic mean, nullptr otherwise.
  const Generator* generator() const noexcept { return gen_ ? &*gen_ : nullptr; }

 private:
  friend Mean reflect(const Mean& m);
  Mean(Kind kind, WorkingInterval domain) : kind_(kind), domain_(domain) {}

  Kind kind_;
  WorkingInterval domain_;
  std::optional<Generator> gen_;
  double p_ = 1.0;
  std::shared_ptr<const Mean> inner_;
  std::string name_;
  Function fn_;
};

/// x -> -M(-x) on -I. QuasiArithmetic(f) maps to QuasiArithmetic(f(-x));
/// reflecting twice gives back a mean that evaluates identically.
Mean reflect(const Mean& m);

enum class Ordering { LessOrEqual, GreaterOrEqual, Equal, Incomparable };

std::string to_string(Ordering o);

struct ComparisonReport {
  Ordering ordering;
  double tolerance;
  /// max over the grid of f''/f' - g''/g' (<= tolerance means QA_f <= QA_g).
  double max_excess;
  /// min over the grid of f''/f' - g''/g'.
  double min_excess;
  /// Nodes where QA_f <= QA_g (resp. >=) fails; set for Incomparable.
  std::optional<double> le_violation_x;
  std::optional<double> ge_violation_x;
};

/// Sampled comparison criterion: QA_f <= QA_g iff f''/f' <= g''/g'.
/// Decided on the common grid with tolerance
/// 1e-8 * max(max|f''/f'|, max|g''/g'|, 1/(hi - lo)).
ComparisonReport compare(const Generator& f, const Generator& g);

}  // namespace qam
