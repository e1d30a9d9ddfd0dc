#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "qamean/errors.hpp"
#include "qamean/generator.hpp"
#include "qamean/mean.hpp"

using namespace qam;

namespace {

const WorkingInterval kWide(0.1, 10.0);

// independent finite-difference oracle for f'/f''
double fd_rho(const Generator& g, double x, double h) {
  const double fp = g.value(x + h);
  const double f0 = g.value(x);
  const double fm = g.value(x - h);
  return ((fp - fm) / (2.0 * h)) / ((fp - 2.0 * f0 + fm) / (h * h));
}

std::vector<Generator> closed_forms(const WorkingInterval& I) {
  return {Generator::power(2, I),  Generator::power(3, I),   Generator::power(0.5, I),
          Generator::power(-1, I), Generator::log(I),        Generator::exp(I),
          Generator::power(-2, I), Generator::power(1.5, I)};
}

}  // namespace

TEST(Generator, ClosedFormValues) {
  EXPECT_EQ(Generator::power(2, kWide).value(3.0), 9.0);
  EXPECT_EQ(Generator::log(kWide).first_derivative(4.0), 0.25);
  const Generator a = Generator::affine(2.5, -1.0, kWide);
  for (double x : {0.1, 1.0, 3.7, 10.0}) {
    EXPECT_EQ(a.second_derivative(x), 0.0);
    EXPECT_EQ(a.value(x), 2.5 * x - 1.0);
  }
  EXPECT_EQ(Generator::exp(kWide).second_derivative(1.0), std::exp(1.0));
}

TEST(Generator, DomainErrors) {
  EXPECT_THROW(Generator::power(2, kWide).value(11.0), DomainError);
  EXPECT_THROW(Generator::power(2, WorkingInterval(-1.0, 1.0)), DomainError);
  EXPECT_THROW(Generator::log(WorkingInterval(-1.0, 1.0)), DomainError);
  EXPECT_THROW(Generator::power(0.0, kWide), UsageError);
  EXPECT_THROW(Generator::affine(0.0, 1.0, kWide), UsageError);
}

TEST(Generator, PowerDomainStartingAtZeroIsMovedInside) {
  const Generator g = Generator::power(2, WorkingInterval(0.0, 1.0));
  EXPECT_GT(g.domain().lo(), 0.0);
  EXPECT_NEAR(g.domain().lo(), 1e-6, 1e-18);
}

TEST(Generator, DerivativesMatchCentralDifferencesAtSecondOrder) {
  for (const Generator& g : closed_forms(WorkingInterval(0.5, 4.0))) {
    for (double x : {0.9, 1.7, 3.1}) {
      const double e1 = std::fabs((g.value(x + 1e-2) - g.value(x - 1e-2)) / 2e-2 -
                                  g.first_derivative(x));
      const double e2 = std::fabs((g.value(x + 5e-3) - g.value(x - 5e-3)) / 1e-2 -
                                  g.first_derivative(x));
      if (e2 < 1e-12) continue;
      EXPECT_NEAR(e1 / e2, 4.0, 0.05) << g.describe() << " at " << x;
    }
  }
}

TEST(Normalize, KeepsIncreasingAndNegatesDecreasing) {
  EXPECT_EQ(normalize(Generator::power(2, kWide)).describe(), "power:2");
  const Generator n = normalize(Generator::power(-1, WorkingInterval(1.0, 2.0)));
  EXPECT_EQ(n.describe(), "neg(power:-1)");
  EXPECT_TRUE(n.increasing());
  EXPECT_EQ(normalize(n).describe(), n.describe());
}

TEST(Normalize, GeneratesTheSameMean) {
  const Generator g = Generator::power(-1, kWide);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> v(2 + t % 5);
    for (double& x : v) x = u(rng);
    EXPECT_NEAR(qa_mean(normalize(g), v), qa_mean(g, v), 1e-12);
  }
}

TEST(Rho, PowerIsLinear) {
  for (double p : {-1.0, 0.5, 2.0, 3.0}) {
    const ScalarGrid r = rho(normalize(Generator::power(p, kWide)));
    for (std::size_t k = 0; k < r.size(); k += 64) {
      EXPECT_NEAR(r[k], r.x(k) / (p - 1.0), 1e-12 * std::fabs(r.x(k))) << "p=" << p;
    }
  }
}

TEST(Rho, ExpIsOneAndLogIsMinusX) {
  const ScalarGrid e = rho(Generator::exp(kWide));
  for (double v : e.values()) EXPECT_EQ(v, 1.0);
  const ScalarGrid l = rho(Generator::log(kWide));
  for (std::size_t k = 0; k < l.size(); k += 100) EXPECT_NEAR(l[k], -l.x(k), 1e-14);
}

TEST(Rho, ClosedFormsAgreeWithFiniteDifferenceOracle) {
  const WorkingInterval I(0.5, 4.0, 257);
  for (const Generator& g0 : closed_forms(I)) {
    const Generator g = normalize(g0);
    const ScalarGrid r = rho(g);
    for (std::size_t k = 8; k + 8 < r.size(); k += 16) {
      EXPECT_NEAR(r[k], fd_rho(g, r.x(k), 1e-3), 1e-4 * (1.0 + std::fabs(r[k])))
          << g.describe();
    }
  }
}

TEST(Rho, DegenerateAndSignChange) {
  EXPECT_THROW(rho(Generator::identity(kWide)), DegenerateSecondDerivative);
  EXPECT_THROW(rho(Generator::affine(3.0, 1.0, kWide)), DegenerateSecondDerivative);
  const WorkingInterval I(-1.0, 1.0);
  const Generator cubic =
      Generator::tabulated(ScalarGrid::sample(I, [](double x) { return x * x * x + x; }));
  EXPECT_THROW(rho(cubic), SignChange);
  EXPECT_THROW(rho(Generator::power(-1, kWide)), UsageError);
}

TEST(Rho, AffineInvariance) {
  for (const Generator& g : closed_forms(kWide)) {
    const Generator up = normalize(g);
    const ScalarGrid a = rho(up);
    const ScalarGrid b = rho(up.composed(3.5, -2.0));
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10) << g.describe();
  }
}

TEST(Rho, TabulatedConvergesAtSecondOrder) {
  auto err = [](std::size_t n) {
    const WorkingInterval I(0.0, 2.0, n);
    const Generator t = Generator::tabulated(ScalarGrid::sample(I, [](double x) {
      return std::exp(x) + x * x;
    }));
    const ScalarGrid r = rho(t);
    double e = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double x = r.x(k);
      e = std::max(e, std::fabs(r[k] - (std::exp(x) + 2 * x) / (std::exp(x) + 2)));
    }
    return e;
  };
  const double ratio = err(257) / err(513);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(InvertF, Examples) {
  EXPECT_NEAR(invert_f(Generator::power(2, kWide), 25.0), 5.0, 1e-14);
  EXPECT_NEAR(invert_f(Generator::log(kWide), 0.0), 1.0, 1e-15);
  EXPECT_THROW(invert_f(Generator::power(2, kWide), 200.0), RangeError);
  EXPECT_THROW(invert_f(Generator::log(kWide), -5.0), RangeError);
}

TEST(InvertF, RoundTrip) {
  const WorkingInterval I(0.5, 4.0);
  std::vector<Generator> gens = closed_forms(I);
  gens.push_back(Generator::tabulated(ScalarGrid::sample(I, [](double x) { return std::sqrt(x); })));
  gens.push_back(Generator::power(2, I).reflected());
  std::mt19937_64 rng(11);
  for (const Generator& g : gens) {
    const WorkingInterval D = g.domain();
    std::uniform_real_distribution<double> u(D.lo(), D.hi());
    for (int t = 0; t < 1000; ++t) {
      const double x = u(rng);
      EXPECT_NEAR(invert_f(g, g.value(x)), x, 1e-9 * D.width()) << g.describe();
    }
  }
}

TEST(Tabulated, InterpolatesNodesExactlyAndSmoothlyBetween) {
  const WorkingInterval I(0.0, 1.0, 65);
  const Generator t = Generator::tabulated(ScalarGrid::sample(I, [](double x) { return std::exp(x); }));
  EXPECT_EQ(t.value(I.node(10)), std::exp(I.node(10)));
  EXPECT_NEAR(t.value(0.123456), std::exp(0.123456), 1e-7);
}

TEST(Tabulated, RejectsNonMonotoneData) {
  const WorkingInterval I(-1.0, 1.0, 33);
  EXPECT_THROW(Generator::tabulated(ScalarGrid::sample(I, [](double x) { return x * x; })),
               DomainError);
}

TEST(Reflected, EvaluatesAtNegatedArgument) {
  const Generator e = Generator::exp(WorkingInterval(0.0, 2.0));
  const Generator r = e.reflected();
  EXPECT_EQ(r.domain().lo(), -2.0);
  EXPECT_EQ(r.value(-1.5), std::exp(1.5));
  EXPECT_EQ(r.first_derivative(-1.5), -std::exp(1.5));
  EXPECT_EQ(r.second_derivative(-1.5), std::exp(1.5));
  const ScalarGrid rr = rho(normalize(r));
  const ScalarGrid re = rho(e);
  for (std::size_t k = 0; k < rr.size(); ++k) EXPECT_EQ(rr[k], -re[re.size() - 1 - k]);
}

TEST(ParseGenerator, Grammar) {
  EXPECT_EQ(parse_generator("power:2", kWide).describe(), "power:2");
  EXPECT_EQ(parse_generator("power:-0.5", kWide).describe(), "power:-0.5");
  EXPECT_EQ(parse_generator("log", kWide).kind(), Generator::Kind::Log);
  EXPECT_EQ(parse_generator("exp", kWide).kind(), Generator::Kind::Exp);
  EXPECT_EQ(parse_generator("id", kWide).kind(), Generator::Kind::Identity);
  EXPECT_EQ(parse_generator("affine:2:3", kWide).describe(), "affine:2:3");
  for (const char* bad : {"", "pow:2", "power:", "power:x", "affine:1", "affine:0:1", "logx"}) {
    EXPECT_THROW(parse_generator(bad, kWide), UsageError) << bad;
  }
  EXPECT_THROW(parse_generator("table:/nonexistent/file.csv", kWide), UsageError);
}

TEST(LoadTable, ReadsHeaderAndDerivatives) {
  const auto path = std::filesystem::temp_directory_path() / "qamean_table_test.csv";
  {
    std::ofstream out(path);
    out.precision(17);
    out << "x,f,f1\n";
    for (int k = 0; k <= 64; ++k) {
      const double x = 1.0 + k / 32.0;
      out << x << "," << x * x * x << "," << 3 * x * x << "\n";
    }
  }
  const Generator g = parse_generator("table:" + path.string(), kWide);
  EXPECT_EQ(g.domain().lo(), 1.0);
  EXPECT_EQ(g.domain().hi(), 3.0);
  EXPECT_EQ(g.domain().grid_points(), 65u);
  EXPECT_NEAR(g.value(2.2), 2.2 * 2.2 * 2.2, 1e-12);
  const std::vector<double> v{1.3, 2.9};
  EXPECT_NEAR(qa_mean(g, v), qa_mean(Generator::power(3, WorkingInterval(1.0, 3.0)), v), 1e-12);
  std::filesystem::remove(path);
}

TEST(LoadTable, RejectsShortOrUnsortedTables) {
  const auto path = std::filesystem::temp_directory_path() / "qamean_table_bad.csv";
  {
    std::ofstream out(path);
    out << "0,0\n1,1\n";
  }
  EXPECT_THROW(load_table(path), UsageError);
  {
    std::ofstream out(path);
    out << "0,0\n2,1\n1,3\n";
  }
  EXPECT_THROW(load_table(path), UsageError);
  std::filesystem::remove(path);
}
