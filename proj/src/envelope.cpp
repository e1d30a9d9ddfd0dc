#include "qamean/envelope.hpp"

#include <algorithm>
#include <cmath>

#include "qamean/errors.hpp"

namespace qam {

Generator ReconstructedGenerator::generator() const {
  std::vector<double> g2(g.size());
  for (std::size_t k = 0; k < g2.size(); ++k) g2[k] = g1[k] / m[k];
  return Generator::tabulated(g, g1, ScalarGrid(g.interval(), std::move(g2)), m);
}

ReconstructedGenerator reconstruct_from_ratio(const ScalarGrid& m) {
  const WorkingInterval& dom = m.interval();
  const bool positive = m[0] > 0.0;
  std::vector<double> inv(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (positive ? !(m[k] > 0.0) : !(m[k] < 0.0)) {
      throw NonpositiveM("g'/g'' = m needs m of one strict sign; m(" +
                         std::to_string(dom.node(k)) + ") = " + std::to_string(m[k]));
    }
    inv[k] = 1.0 / m[k];
  }
  std::vector<double> slope = cumulative_trapezoid(dom, inv);
  for (double& s : slope) {
    s = std::exp(s);
    if (!std::isfinite(s) || s == 0.0) {
      throw RangeError("reconstructed g' leaves the double range; narrow the interval");
    }
  }
  std::vector<double> value = cumulative_trapezoid(dom, slope);
  return {ScalarGrid(dom, std::move(value)), ScalarGrid(dom, std::move(slope)), m};
}

ReconstructedGenerator reconstruct_generator(const PiecewiseLinearHull& m,
                                             const WorkingInterval& interval) {
  const ScalarGrid sampled = m.sample(interval);
  for (double v : sampled.values()) {
    if (!(v > 0.0)) throw NonpositiveM("m must be positive to generate a convex mean");
  }
  return reconstruct_from_ratio(sampled);
}

ReconstructedGenerator reconstruct_concave_generator(const PiecewiseLinearHull& m,
                                                     const WorkingInterval& interval) {
  const ScalarGrid sampled = m.sample(interval);
  for (double v : sampled.values()) {
    if (!(v < 0.0)) throw NonpositiveM("m must be negative to generate a concave mean");
  }
  return reconstruct_from_ratio(sampled);
}

std::string to_string(EnvelopeStatus s) {
  switch (s) {
    case EnvelopeStatus::Envelope:
      return "Envelope";
    case EnvelopeStatus::AlreadyExtremal:
      return "AlreadyExtremal";
    case EnvelopeStatus::ArithmeticEnvelope:
      return "ArithmeticEnvelope";
    case EnvelopeStatus::NoneExists:
      return "NoneExists";
    case EnvelopeStatus::NonsmoothCase:
      return "NonsmoothCase";
  }
  return {};
}

std::string to_string(EnvelopeKind k) { return k == EnvelopeKind::Convex ? "convex" : "concave"; }

Mean EnvelopeResult::mean() const {
  if (status == EnvelopeStatus::ArithmeticEnvelope) return Mean::arithmetic(interval);
  if (!generator) throw UsageError("envelope status " + to_string(status) + " carries no mean");
  return Mean::quasi_arithmetic(*generator);
}

namespace {

// g = (f - f(lo)) / f'(lo), g' = f' / f'(lo) for an increasing generator
void set_anchored_grids(EnvelopeResult& r, const Generator& gen) {
  const DerivativeTable t = gen.tabulate();
  const double f0 = t.f.front();
  const double d0 = t.f1.front();
  std::vector<double> g(t.f.size()), g1(t.f.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] = (t.f[k] - f0) / d0;
    g1[k] = t.f1[k] / d0;
  }
  r.g = ScalarGrid(t.interval, std::move(g));
  r.g1 = ScalarGrid(t.interval, std::move(g1));
  r.generator = gen;
}

void set_arithmetic(EnvelopeResult& r) {
  r.status = EnvelopeStatus::ArithmeticEnvelope;
  r.diagnostic = "f'' vanishes identically; the arithmetic mean is its own envelope";
  set_anchored_grids(r, Generator::identity(r.interval));
}

void set_reconstructed(EnvelopeResult& r, const ReconstructedGenerator& rec) {
  r.status = EnvelopeStatus::Envelope;
  r.g = rec.g;
  r.g1 = rec.g1;
  r.generator = rec.generator();
}

EnvelopeResult direct_envelope(const Generator& gen, const EnvelopeOptions& options,
                               EnvelopeKind kind) {
  const bool convex = kind == EnvelopeKind::Convex;
  const Generator up = normalize(gen);
  EnvelopeResult r{.kind = kind, .status = EnvelopeStatus::NoneExists, .interval = up.domain()};

  r.gate = dominates_arithmetic(up, options.gate_n_max, options.gate_trials,
                                convex ? Direction::AtLeast : Direction::AtMost, options.seed);
  if (!r.gate.passed()) {
    r.diagnostic = convex ? "QA_f >= A fails; no convex quasiarithmetic envelope exists"
                          : "QA_f <= A fails; no concave quasiarithmetic envelope exists";
    return r;
  }

  const CurvatureBranch branch = second_derivative_branch(up.tabulate());
  if (branch.kind == CurvatureBranch::Kind::Degenerate) {
    set_arithmetic(r);
    return r;
  }
  if (branch.kind != CurvatureBranch::Kind::NowhereVanishing) {
    r.status = EnvelopeStatus::NonsmoothCase;
    r.diagnostic = "existence gate passed but f'' vanishes or changes sign near x = " +
                   std::to_string(branch.witness_x);
    return r;
  }

  const ScalarGrid ratio = rho(up);
  r.rho = ratio;
  const bool right_sign = convex ? branch.sign > 0 : branch.sign < 0;
  if (!right_sign) {
    r.status = EnvelopeStatus::NonsmoothCase;
    r.diagnostic = convex ? "existence gate passed but the increasing generator is not convex"
                          : "existence gate passed but the increasing generator is not concave";
    return r;
  }

  r.m = convex ? concave_envelope_1d(ratio) : convex_envelope_1d(ratio);
  const ConvexityKind already = convex ? ConvexityKind::Convex : ConvexityKind::Concave;
  if (classify(up).value == already) {
    r.status = EnvelopeStatus::AlreadyExtremal;
    r.diagnostic = "QA_f is already " + std::string(convex ? "convex" : "concave");
    set_anchored_grids(r, up);
    return r;
  }
  set_reconstructed(r, convex ? reconstruct_generator(*r.m, r.interval)
                              : reconstruct_concave_generator(*r.m, r.interval));
  return r;
}

}  // namespace

EnvelopeResult qa_convex_envelope(const Generator& gen, const EnvelopeOptions& options) {
  return direct_envelope(gen, options, EnvelopeKind::Convex);
}

EnvelopeResult qa_concave_envelope(const Generator& gen, const EnvelopeOptions& options) {
  return direct_envelope(gen, options, EnvelopeKind::Concave);
}

EnvelopeResult qa_concave_envelope_reflected(const Generator& gen,
                                             const EnvelopeOptions& options) {
  const EnvelopeResult dual = qa_convex_envelope(normalize(gen.reflected()), options);

  EnvelopeResult r{.kind = EnvelopeKind::Concave, .status = dual.status,
                   .interval = dual.interval.reflected()};
  r.diagnostic = dual.diagnostic;
  // QA_fr >= A at -v  <=>  QA_f <= A at v
  r.gate = dual.gate;
  r.gate.check = "qa<=A";
  if (dual.gate.witness) {
    Witness w = *dual.gate.witness;
    for (auto& row : w.inputs) {
      for (double& x : row) x = -x;
    }
    r.gate.witness = Witness{std::move(w.inputs), -dual.gate.witness->rhs,
                             -dual.gate.witness->lhs};
  }
  if (dual.rho) r.rho = dual.rho->reflected(-1.0);
  if (dual.m) r.m = dual.m->reflected();

  switch (dual.status) {
    case EnvelopeStatus::ArithmeticEnvelope:
      set_arithmetic(r);
      break;
    case EnvelopeStatus::AlreadyExtremal:
    case EnvelopeStatus::Envelope:
      set_anchored_grids(r, normalize(dual.generator->reflected()));
      break;
    case EnvelopeStatus::NoneExists:
    case EnvelopeStatus::NonsmoothCase:
      break;
  }
  return r;
}

}  // namespace qam
