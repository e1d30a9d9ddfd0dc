#pragma once

#include <cstdint>

#include "qamean/envelope.hpp"
#include "qamean/mean.hpp"
#include "qamean/sampling.hpp"

namespace qam {

/// N(M(row_1), ..., M(row_n)) <= M(N(col_1), ..., N(col_m)) on random
/// matrices with n rows and m columns, n in [2, n_max], m in [2, m_max]
/// (a maximum of 1 pins that dimension to 1). Entries are uniform on the
/// common interval of the two means.
TrialReport ingham_jessen_check(const Mean& M, const Mean& N, std::size_t m_max,
                                std::size_t n_max, std::size_t trials, std::uint64_t seed = 0);

/// N(x_1, M(x_1,x_2), ..., M(x_1..x_n)) <= M(x_1, N(x_1,x_2), ..., N(x_1..x_n))
/// on random vectors of lengths 2..n_max.
TrialReport kedlaya_check(const Mean& M, const Mean& N, std::size_t n_max, std::size_t trials,
                          std::uint64_t seed = 0);

/// Every quasiarithmetic minorant of QA_f with a concave f'/f'' profile
/// m' >= rho must lie below the envelope: QA_h <= QA_g. Candidates are the
/// envelope m itself, the constant 2 max(rho), and random upper hulls of 2-6
/// vertices placed above m. For a concave envelope everything is mirrored
/// (convex m' <= rho, QA_h >= QA_g). `trials` tuples are tested per candidate.
/// `env` must have status Envelope or AlreadyExtremal.
TrialReport maximality_check(const Generator& f, const EnvelopeResult& env,
                             std::size_t candidates, std::size_t trials, std::uint64_t seed = 0);

/// Compares the direct concave envelope of QA_f with the
/// reflect / convex-envelope / reflect route on random tuples (tolerance 1e-6).
TrialReport duality_check(const Generator& f, std::size_t trials, std::uint64_t seed = 0,
                          const EnvelopeOptions& options = {});

/// M(x) == M(sigma x) up to 1e-12 max(1, |lo|, |hi|) for random tuples of
/// sizes 2..n_max and random permutations sigma.
TrialReport symmetry_check(const Mean& M, std::size_t trials, std::uint64_t seed = 0,
                           std::size_t n_max = 6);

}  // namespace qam
