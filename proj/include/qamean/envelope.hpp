#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qamean/convexity.hpp"
#include "qamean/generator.hpp"
#include "qamean/hull.hpp"
#include "qamean/mean.hpp"
#include "qamean/sampling.hpp"

namespace qam {

/// Solution g of g'/g'' = m on the grid, anchored at g(lo) = 0, g'(lo) = 1.
struct ReconstructedGenerator {
  ScalarGrid g;
  ScalarGrid g1;
  ScalarGrid m;

  /// Tabulated generator with g'' = g'/m and f'/f'' pinned to m.
  Generator generator() const;
};

/// Integrating-factor solution: g' = exp(int_lo^x dt/m), g = int_lo^x g',
/// both by the cumulative trapezoid rule. m must be nonzero with one sign:
/// positive m yields a convex increasing g, negative m a concave one.
/// Throws NonpositiveM otherwise.
ReconstructedGenerator reconstruct_from_ratio(const ScalarGrid& m);

/// Reconstruction from a hull sampled on `interval`; requires m > 0.
ReconstructedGenerator reconstruct_generator(const PiecewiseLinearHull& m,
                                             const WorkingInterval& interval);
/// Same for a negative (convex, lower-hull) profile; requires m < 0.
ReconstructedGenerator reconstruct_concave_generator(const PiecewiseLinearHull& m,
                                                     const WorkingInterval& interval);

enum class EnvelopeKind { Convex, Concave };
enum class EnvelopeStatus { Envelope, AlreadyExtremal, ArithmeticEnvelope, NoneExists, NonsmoothCase };

std::string to_string(EnvelopeStatus s);
std::string to_string(EnvelopeKind k);

struct EnvelopeOptions {
  std::size_t gate_n_max = 5;
  std::size_t gate_trials = 10000;
  std::uint64_t seed = 0;
};

/// The convex (concave) quasiarithmetic envelope of QA_f on a working interval.
struct EnvelopeResult {
  EnvelopeKind kind;
  EnvelopeStatus status;
  WorkingInterval interval;
  /// Sampled f'/f'' of the normalized input, when defined.
  std::optional<ScalarGrid> rho{};
  /// Envelope of rho: concave hull for the convex envelope, convex hull for the concave one.
  std::optional<PiecewiseLinearHull> m{};
  /// Envelope generator and its derivative, anchored at g(lo) = 0, g'(lo) = 1.
  std::optional<ScalarGrid> g{};
  std::optional<ScalarGrid> g1{};
  /// Generator of the envelope mean (the input itself when AlreadyExtremal).
  std::optional<Generator> generator{};
  /// Existence gate QA_f >= A (convex) or QA_f <= A (concave); its witness
  /// explains NoneExists.
  TrialReport gate{};
  std::string diagnostic{};

  bool has_mean() const noexcept { return generator.has_value(); }
  /// The envelope mean; throws UsageError when none exists.
  Mean mean() const;
};

/// Pipeline: normalize, existence gate, degenerate branch, convexity test,
/// concave hull of rho, reconstruction.
EnvelopeResult qa_convex_envelope(const Generator& gen, const EnvelopeOptions& options = {});

/// Direct route: convex hull of rho for an increasing concave generator.
EnvelopeResult qa_concave_envelope(const Generator& gen, const EnvelopeOptions& options = {});

/// Dual route: reflect, take the convex envelope on -I, reflect back.
EnvelopeResult qa_concave_envelope_reflected(const Generator& gen,
                                             const EnvelopeOptions& options = {});

}  // namespace qam
