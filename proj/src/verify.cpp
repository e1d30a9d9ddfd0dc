#include "qamean/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qamean/convexity.hpp"
#include "qamean/errors.hpp"
#include "qamean/hull.hpp"

namespace qam {

namespace {

const WorkingInterval& common_interval(const Mean& M, const Mean& N) {
  if (M.domain().lo() != N.domain().lo() || M.domain().hi() != N.domain().hi()) {
    throw UsageError("means " + M.name() + " and " + N.name() + " live on different intervals");
  }
  return M.domain();
}

std::size_t draw_dim(TrialStream& s, std::size_t max) { return max <= 1 ? 1 : s.integer(2, max); }

void absorb(TrialReport& total, TrialReport part) {
  total.trials += part.trials;
  total.failures += part.failures;
  total.worst_margin = std::min(total.worst_margin, part.worst_margin);
  if (!total.witness && part.witness) total.witness = std::move(part.witness);
}

}  // namespace

TrialReport ingham_jessen_check(const Mean& M, const Mean& N, std::size_t m_max,
                                std::size_t n_max, std::size_t trials, std::uint64_t seed) {
  if (m_max < 1 || n_max < 1) throw UsageError("Ingham-Jessen check needs m, n >= 1");
  const WorkingInterval dom = common_interval(M, N);

  auto evaluate = [&](const std::vector<std::vector<double>>& rows) {
    const std::size_t m = rows.front().size();
    std::vector<double> row_means(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) row_means[i] = M(rows[i]);
    std::vector<double> col_means(m);
    std::vector<double> col(rows.size());
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][j];
      col_means[j] = N(col);
    }
    return TrialOutcome{N(row_means), M(col_means), rows};
  };
  return run_trials(
      "ingham-jessen", seed, trials, comparison_tolerance(dom),
      [&](TrialStream& s) {
        const std::size_t n = draw_dim(s, n_max);
        const std::size_t m = draw_dim(s, m_max);
        std::vector<std::vector<double>> rows(n);
        for (auto& row : rows) row = s.tuple(m, dom);
        return evaluate(rows);
      },
      evaluate);
}

TrialReport kedlaya_check(const Mean& M, const Mean& N, std::size_t n_max, std::size_t trials,
                          std::uint64_t seed) {
  if (n_max < 2) throw UsageError("Kedlaya check needs n_max >= 2");
  const WorkingInterval dom = common_interval(M, N);

  auto evaluate = [&](const std::vector<std::vector<double>>& in) {
    const auto& x = in[0];
    std::vector<double> run_m(x.size());
    std::vector<double> run_n(x.size());
    for (std::size_t k = 1; k <= x.size(); ++k) {
      const std::span<const double> prefix(x.data(), k);
      run_m[k - 1] = M(prefix);
      run_n[k - 1] = N(prefix);
    }
    return TrialOutcome{N(run_m), M(run_n), in};
  };
  return run_trials(
      "kedlaya", seed, trials, comparison_tolerance(dom),
      [&](TrialStream& s) { return evaluate({s.tuple(s.integer(2, n_max), dom)}); }, evaluate);
}

TrialReport maximality_check(const Generator& f, const EnvelopeResult& env,
                             std::size_t candidates, std::size_t trials, std::uint64_t seed) {
  const bool extremal =
      env.status == EnvelopeStatus::Envelope || env.status == EnvelopeStatus::AlreadyExtremal;
  if (!extremal || !env.m || !env.rho || !env.generator) {
    throw UsageError("maximality_check needs an Envelope or AlreadyExtremal result, got " +
                     to_string(env.status));
  }
  if (!(normalize(f).domain() == env.interval)) {
    throw UsageError("maximality_check: generator and envelope live on different grids");
  }
  if (candidates < 1) throw UsageError("maximality_check needs at least one candidate");

  const bool convex = env.kind == EnvelopeKind::Convex;
  const ScalarGrid& ratio = *env.rho;
  const WorkingInterval dom = ratio.interval();
  const PiecewiseLinearHull& m = *env.m;
  // candidates are quadrature reconstructions, so compare against one too
  const Generator g = env.status == EnvelopeStatus::Envelope
                          ? *env.generator
                          : reconstruct_from_ratio(m.sample(dom)).generator();
  const auto [lo_it, hi_it] = std::minmax_element(ratio.values().begin(), ratio.values().end());
  double span = *hi_it - *lo_it;
  if (!(span > 0.0)) span = std::max(std::fabs(*lo_it), std::fabs(*hi_it));

  auto admissible = [&](const PiecewiseLinearHull& cand) {
    for (std::size_t k = 0; k < ratio.size(); ++k) {
      const double v = cand(ratio.x(k));
      if (convex ? !(v >= ratio[k]) : !(v <= ratio[k])) return false;
    }
    return true;
  };

  TrialReport total;
  total.check = "maximality";
  total.seed = seed;
  total.tolerance = comparison_tolerance(dom);

  for (std::size_t c = 0; c < candidates; ++c) {
    std::optional<PiecewiseLinearHull> cand;
    if (c == 0) {
      cand = m;
    } else if (c == 1) {
      const double level = 2.0 * (convex ? *hi_it : *lo_it);
      cand = PiecewiseLinearHull({{dom.lo(), level}, {dom.hi(), level}}, m.orientation());
    } else {
      for (std::uint64_t attempt = 0; attempt < 1000 && !cand; ++attempt) {
        TrialStream s(derive_seed(seed, c), attempt);
        const std::size_t k = s.integer(2, 6);
        std::vector<double> xs{dom.lo(), dom.hi()};
        for (std::size_t i = 2; i < k; ++i) xs.push_back(s.uniform(dom.lo(), dom.hi()));
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::vector<HullVertex> pts;
        for (double x : xs) {
          const double lift = span * s.uniform();
          pts.push_back({x, convex ? m(x) + lift : m(x) - lift});
        }
        PiecewiseLinearHull hull = convex ? upper_hull(pts) : lower_hull(pts);
        if (admissible(hull)) {
          cand = std::move(hull);
        } else {
          ++total.rejected;
        }
      }
      if (!cand) throw Error("maximality_check could not sample an admissible candidate");
    }

    const Generator h = reconstruct_from_ratio(cand->sample(dom)).generator();
    auto evaluate = [&](const std::vector<std::vector<double>>& in) {
      const double qh = qa_mean(h, in[0]);
      const double qg = qa_mean(g, in[0]);
      return convex ? TrialOutcome{qh, qg, in} : TrialOutcome{qg, qh, in};
    };
    absorb(total, run_trials(
                      "maximality", derive_seed(seed, c), trials, total.tolerance,
                      [&](TrialStream& s) { return evaluate({s.tuple(s.integer(2, 6), dom)}); },
                      evaluate));
  }
  return total;
}

TrialReport duality_check(const Generator& f, std::size_t trials, std::uint64_t seed,
                          const EnvelopeOptions& options) {
  const EnvelopeResult direct = qa_concave_envelope(f, options);
  const EnvelopeResult dual = qa_concave_envelope_reflected(f, options);
  const bool has_envelope = direct.status == EnvelopeStatus::Envelope ||
                            direct.status == EnvelopeStatus::AlreadyExtremal ||
                            direct.status == EnvelopeStatus::ArithmeticEnvelope;
  if (!has_envelope) {
    throw UsageError("duality_check needs a concave envelope; direct route returned " +
                     to_string(direct.status));
  }
  if (dual.status != direct.status) {
    throw Error("concave envelope routes disagree: direct " + to_string(direct.status) +
                ", reflected " + to_string(dual.status));
  }
  const Mean a = direct.mean();
  const Mean b = dual.mean();
  const WorkingInterval dom = direct.interval;

  auto evaluate = [&](const std::vector<std::vector<double>>& in) {
    return TrialOutcome{a(in[0]), b(in[0]), in};
  };
  return run_trials(
      "duality", seed, trials, 1e-6,
      [&](TrialStream& s) { return evaluate({s.tuple(s.integer(2, 6), dom)}); }, evaluate,
      Relation::Equal);
}

TrialReport symmetry_check(const Mean& M, std::size_t trials, std::uint64_t seed,
                           std::size_t n_max) {
  if (n_max < 2) throw UsageError("symmetry_check needs n_max >= 2");
  const WorkingInterval dom = M.domain();
  const double tol = 1e-12 * std::max({1.0, std::fabs(dom.lo()), std::fabs(dom.hi())});
  return run_trials(
      "symmetry", seed, trials, tol,
      [&](TrialStream& s) {
        auto x = s.tuple(s.integer(2, n_max), dom);
        std::vector<std::size_t> perm(x.size());
        std::iota(perm.begin(), perm.end(), 0);
        s.shuffle(perm);
        std::vector<double> y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[perm[i]];
        const double lhs = M(x);
        const double rhs = M(y);
        return TrialOutcome{lhs, rhs, {std::move(x), std::move(y)}};
      },
      {}, Relation::Equal);
}

}  // namespace qam
