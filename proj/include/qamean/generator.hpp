#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qamean/grid.hpp"

namespace qam {

/// Relative threshold deciding whether f'' vanishes at a grid point.
inline constexpr double kCurvatureTau = 1e-8;

/// Generator values and derivatives on the nodes of its domain.
struct DerivativeTable {
  WorkingInterval interval;
  std::vector<double> f;
  std::vector<double> f1;
  std::vector<double> f2;
  /// f'/f'' when the generator knows it without dividing (closed forms,
  /// generators rebuilt from a ratio profile). Absent when f'' == 0.
  std::optional<std::vector<double>> ratio;
};

/// A continuous strictly monotone function f on a WorkingInterval, the
/// generator of the quasiarithmetic mean f^{-1}(mean of f(x_i)).
///
/// Generators are immutable values; copies share their representation.
class Generator {
 public:
  enum class Kind { Power, Log, Exp, Identity, Affine, Tabulated, Composed, Reflected };

  /// x^p, p != 0. Requires lo > 0; lo == 0 is moved inside by a margin of
  /// 1e-6 (hi - lo) since the derivatives are singular there.
  static Generator power(double p, const WorkingInterval& domain);
  /// ln x, same domain rule as power().
  static Generator log(const WorkingInterval& domain);
  static Generator exp(const WorkingInterval& domain);
  static Generator identity(const WorkingInterval& domain);
  /// a x + b, a != 0.
  static Generator affine(double a, double b, const WorkingInterval& domain);
  /// Cubic Hermite interpolant of the samples of `f` with slopes `f1`. Missing derivative
  /// grids are filled by finite differences with the tabulation step. `ratio`
  /// optionally pins f'/f'' exactly (used for generators rebuilt from m).
  static Generator tabulated(ScalarGrid f, std::optional<ScalarGrid> f1 = std::nullopt,
                             std::optional<ScalarGrid> f2 = std::nullopt,
                             std::optional<ScalarGrid> ratio = std::nullopt);

  /// scale * f + shift, scale != 0. Generates the same mean.
  Generator composed(double scale, double shift = 0.0) const;
  Generator negated() const { return composed(-1.0, 0.0); }
  /// x -> f(-x) on the reflected interval; generates the reflected mean.
  Generator reflected() const;

  Kind kind() const noexcept;
  const WorkingInterval& domain() const noexcept;

  double value(double x) const;
  double first_derivative(double x) const;
  double second_derivative(double x) const;

  bool increasing() const;
  DerivativeTable tabulate() const;
  /// Spec-string style description, e.g. "power:2" or "neg(log)".
  std::string describe() const;

 private:
  struct Node;
  explicit Generator(std::shared_ptr<const Node> node);
  static Generator make(Node node);
  std::shared_ptr<const Node> node_;
};

/// Returns `gen` if it is increasing, otherwise its negation.
Generator normalize(const Generator& gen);

/// Classification of f'' on the grid.
struct CurvatureBranch {
  enum class Kind { Degenerate, NowhereVanishing, Vanishing, SignChange };
  Kind kind;
  int sign = 0;            // sign of f'' when NowhereVanishing
  double witness_x = 0.0;  // offending node for Vanishing / SignChange
  double max_abs_f2 = 0.0;
  double scale = 0.0;      // max|f'| / (hi - lo)
};

CurvatureBranch second_derivative_branch(const DerivativeTable& table);

/// rho = f'/f'' on the grid of an increasing generator.
/// Throws DegenerateSecondDerivative when f'' == 0 throughout and SignChange
/// when f'' vanishes or changes sign somewhere.
ScalarGrid rho(const Generator& gen);

/// x with f(x) = y. Tabulated generators invert their interpolant exactly;
/// everything else bisects the monotone f.
double invert_f(const Generator& gen, double y);

/// Parses `power:<p>`, `log`, `exp`, `id`, `affine:<a>:<b>` on `domain`, or
/// `table:<path>` (whose domain comes from the file).
Generator parse_generator(std::string_view spec, const WorkingInterval& domain);

/// Loads a CSV table `x,f` (optionally with a header; columns `f` or `g` are
/// used for values and `f1` or `g1` for first derivatives when present).
/// Nonuniform x columns are resampled onto a uniform grid of the same size.
Generator load_table(const std::filesystem::path& path);

}  // namespace qam
