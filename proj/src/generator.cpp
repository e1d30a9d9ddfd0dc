#include "qamean/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <variant>

#include "qamean/bisection.hpp"
#include "qamean/errors.hpp"

namespace qam {

namespace {

struct PowerKind {
  double p;
};
struct LogKind {};
struct ExpKind {};
struct IdentityKind {};
struct AffineKind {
  double a;
  double b;
};
struct TabulatedKind {
  ScalarGrid f;
  ScalarGrid f1;
  ScalarGrid f2;
  std::optional<ScalarGrid> ratio;
};
// cubic Hermite interpolation from values and slopes at the cell ends
double hermite(const ScalarGrid& f, const ScalarGrid& f1, double x) {
  const WorkingInterval& I = f.interval();
  const std::size_t k = locate_cell(I, x);
  const double x0 = I.node(k);
  const double x1 = I.node(k + 1);
  if (x == x0) return f[k];
  if (x == x1) return f[k + 1];
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double u = 1.0 - t;
  return u * u * (1.0 + 2.0 * t) * f[k] + t * t * (3.0 - 2.0 * t) * f[k + 1] +
         h * t * u * (u * f1[k] - t * f1[k + 1]);
}

struct ComposedKind {
  Generator inner;
  double scale;
  double shift;
};
struct ReflectedKind {
  Generator inner;
};

std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

WorkingInterval positive_domain(const WorkingInterval& domain, const char* what) {
  if (domain.lo() > 0.0) return domain;
  if (domain.lo() == 0.0) {
    return {1e-6 * domain.width(), domain.hi(), domain.grid_points()};
  }
  throw DomainError(std::string(what) + " generator requires a domain inside (0, inf)");
}

std::vector<double> reversed(const std::vector<double>& v, double sign) {
  std::vector<double> out(v.rbegin(), v.rend());
  for (double& x : out) x *= sign;
  return out;
}

}  // namespace

struct Generator::Node {
  WorkingInterval domain;
  std::variant<PowerKind, LogKind, ExpKind, IdentityKind, AffineKind, TabulatedKind,
               ComposedKind, ReflectedKind>
      kind;
};

Generator::Generator(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Generator Generator::make(Node node) {
  Generator gen(std::make_shared<const Node>(std::move(node)));
  // strict monotonicity: f' keeps one sign and never vanishes on the grid
  const DerivativeTable table = gen.tabulate();
  const bool up = table.f1.front() > 0.0;
  for (std::size_t k = 0; k < table.f1.size(); ++k) {
    const double d = table.f1[k];
    if (!std::isfinite(d) || d == 0.0 || (d > 0.0) != up) {
      throw DomainError("generator " + gen.describe() + " is not strictly monotone at x = " +
                        fmt_real(table.interval.node(k)));
    }
    if (!std::isfinite(table.f[k]) || !std::isfinite(table.f2[k])) {
      throw DomainError("generator " + gen.describe() + " is not finite at x = " +
                        fmt_real(table.interval.node(k)));
    }
  }
  return gen;
}

Generator Generator::power(double p, const WorkingInterval& domain) {
  if (p == 0.0 || !std::isfinite(p)) {
    throw UsageError("power generator requires a finite exponent p != 0 (use log for p = 0)");
  }
  return make({positive_domain(domain, "power"), PowerKind{p}});
}

Generator Generator::log(const WorkingInterval& domain) {
  return make({positive_domain(domain, "log"), LogKind{}});
}

Generator Generator::exp(const WorkingInterval& domain) { return make({domain, ExpKind{}}); }

Generator Generator::identity(const WorkingInterval& domain) {
  return make({domain, IdentityKind{}});
}

Generator Generator::affine(double a, double b, const WorkingInterval& domain) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
    throw UsageError("affine generator requires finite a != 0 and finite b");
  }
  return make({domain, AffineKind{a, b}});
}

Generator Generator::tabulated(ScalarGrid f, std::optional<ScalarGrid> f1,
                               std::optional<ScalarGrid> f2, std::optional<ScalarGrid> ratio) {
  const WorkingInterval interval = f.interval();
  const auto vals = f.values();
  const bool up = vals[1] > vals[0];
  for (std::size_t k = 1; k < vals.size(); ++k) {
    if (up ? !(vals[k] > vals[k - 1]) : !(vals[k] < vals[k - 1])) {
      throw DomainError("tabulated generator values are not strictly monotone at x = " +
                        fmt_real(interval.node(k)));
    }
  }
  for (const auto* g : {&f1, &f2, &ratio}) {
    if (*g && !((*g)->interval() == interval)) {
      throw UsageError("tabulated derivative grids must share the value grid");
    }
  }
  if (!f2) {
    f2 = f1 ? ScalarGrid(interval, differentiate(interval, f1->values()))
            : ScalarGrid(interval, second_difference(interval, vals));
  }
  if (!f1) f1 = ScalarGrid(interval, differentiate(interval, vals));
  return make({interval, TabulatedKind{std::move(f), std::move(*f1), std::move(*f2),
                                       std::move(ratio)}});
}

Generator Generator::composed(double scale, double shift) const {
  if (scale == 0.0 || !std::isfinite(scale) || !std::isfinite(shift)) {
    throw UsageError("affine composition requires finite scale != 0");
  }
  return make({node_->domain, ComposedKind{*this, scale, shift}});
}

Generator Generator::reflected() const {
  return make({node_->domain.reflected(), ReflectedKind{*this}});
}

Generator::Kind Generator::kind() const noexcept {
  return static_cast<Kind>(node_->kind.index());
}

const WorkingInterval& Generator::domain() const noexcept { return node_->domain; }

namespace {

void check_domain(const WorkingInterval& domain, double x) {
  if (!domain.contains(x)) {
    std::ostringstream os;
    os << "x = " << x << " outside the generator domain [" << domain.lo() << ", " << domain.hi()
       << "]";
    throw DomainError(os.str());
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double Generator::value(double x) const {
  check_domain(node_->domain, x);
  return std::visit(Overloaded{
                        [&](const PowerKind& k) { return std::pow(x, k.p); },
                        [&](const LogKind&) { return std::log(x); },
                        [&](const ExpKind&) { return std::exp(x); },
                        [&](const IdentityKind&) { return x; },
                        [&](const AffineKind& k) { return k.a * x + k.b; },
                        [&](const TabulatedKind& k) { return hermite(k.f, k.f1, x); },
                        [&](const ComposedKind& k) { return k.scale * k.inner.value(x) + k.shift; },
                        [&](const ReflectedKind& k) { return k.inner.value(-x); },
                    },
                    node_->kind);
}

double Generator::first_derivative(double x) const {
  check_domain(node_->domain, x);
  return std::visit(Overloaded{
                        [&](const PowerKind& k) { return k.p * std::pow(x, k.p - 1.0); },
                        [&](const LogKind&) { return 1.0 / x; },
                        [&](const ExpKind&) { return std::exp(x); },
                        [&](const IdentityKind&) { return 1.0; },
                        [&](const AffineKind& k) { return k.a; },
                        [&](const TabulatedKind& k) { return k.f1.at(x); },
                        [&](const ComposedKind& k) { return k.scale * k.inner.first_derivative(x); },
                        [&](const ReflectedKind& k) { return -k.inner.first_derivative(-x); },
                    },
                    node_->kind);
}

double Generator::second_derivative(double x) const {
  check_domain(node_->domain, x);
  return std::visit(
      Overloaded{
          [&](const PowerKind& k) { return k.p * (k.p - 1.0) * std::pow(x, k.p - 2.0); },
          [&](const LogKind&) { return -1.0 / (x * x); },
          [&](const ExpKind&) { return std::exp(x); },
          [&](const IdentityKind&) { return 0.0; },
          [&](const AffineKind&) { return 0.0; },
          [&](const TabulatedKind& k) { return k.f2.at(x); },
          [&](const ComposedKind& k) { return k.scale * k.inner.second_derivative(x); },
          [&](const ReflectedKind& k) { return k.inner.second_derivative(-x); },
      },
      node_->kind);
}

bool Generator::increasing() const {
  return first_derivative(node_->domain.lo()) > 0.0;
}

DerivativeTable Generator::tabulate() const {
  const WorkingInterval& dom = node_->domain;
  const std::size_t n = dom.grid_points();
  DerivativeTable t{dom, std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                    std::nullopt};

  auto closed_form = [&](auto&& ratio_fn) {
    for (std::size_t k = 0; k < n; ++k) {
      const double x = dom.node(k);
      t.f[k] = value(x);
      t.f1[k] = first_derivative(x);
      t.f2[k] = second_derivative(x);
    }
    if constexpr (!std::is_same_v<std::decay_t<decltype(ratio_fn)>, std::nullptr_t>) {
      std::vector<double> r(n);
      for (std::size_t k = 0; k < n; ++k) r[k] = ratio_fn(dom.node(k));
      t.ratio = std::move(r);
    }
  };

  std::visit(Overloaded{
                 [&](const PowerKind& k) {
                   if (k.p == 1.0) {
                     closed_form(nullptr);
                   } else {
                     closed_form([&](double x) { return x / (k.p - 1.0); });
                   }
                 },
                 [&](const LogKind&) { closed_form([](double x) { return -x; }); },
                 [&](const ExpKind&) { closed_form([](double) { return 1.0; }); },
                 [&](const IdentityKind&) { closed_form(nullptr); },
                 [&](const AffineKind&) { closed_form(nullptr); },
                 [&](const TabulatedKind& k) {
                   t.f.assign(k.f.values().begin(), k.f.values().end());
                   t.f1.assign(k.f1.values().begin(), k.f1.values().end());
                   t.f2.assign(k.f2.values().begin(), k.f2.values().end());
                   if (k.ratio) t.ratio.emplace(k.ratio->values().begin(), k.ratio->values().end());
                 },
                 [&](const ComposedKind& k) {
                   DerivativeTable in = k.inner.tabulate();
                   for (std::size_t i = 0; i < n; ++i) {
                     t.f[i] = k.scale * in.f[i] + k.shift;
                     t.f1[i] = k.scale * in.f1[i];
                     t.f2[i] = k.scale * in.f2[i];
                   }
                   t.ratio = std::move(in.ratio);
                 },
                 [&](const ReflectedKind& k) {
                   DerivativeTable in = k.inner.tabulate();
                   t.f = reversed(in.f, 1.0);
                   t.f1 = reversed(in.f1, -1.0);
                   t.f2 = reversed(in.f2, 1.0);
                   if (in.ratio) t.ratio = reversed(*in.ratio, -1.0);
                 },
             },
             node_->kind);
  return t;
}

std::string Generator::describe() const {
  return std::visit(
      Overloaded{
          [](const PowerKind& k) { return "power:" + fmt_real(k.p); },
          [](const LogKind&) { return std::string("log"); },
          [](const ExpKind&) { return std::string("exp"); },
          [](const IdentityKind&) { return std::string("id"); },
          [](const AffineKind& k) { return "affine:" + fmt_real(k.a) + ":" + fmt_real(k.b); },
          [](const TabulatedKind&) { return std::string("table"); },
          [](const ComposedKind& k) {
            if (k.scale == -1.0 && k.shift == 0.0) return "neg(" + k.inner.describe() + ")";
            return "compose(" + k.inner.describe() + "," + fmt_real(k.scale) + "," +
                   fmt_real(k.shift) + ")";
          },
          [](const ReflectedKind& k) { return "reflect(" + k.inner.describe() + ")"; },
      },
      node_->kind);
}

Generator normalize(const Generator& gen) { return gen.increasing() ? gen : gen.negated(); }

CurvatureBranch second_derivative_branch(const DerivativeTable& table) {
  CurvatureBranch b{CurvatureBranch::Kind::NowhereVanishing};
  double max_f1 = 0.0;
  for (double d : table.f1) max_f1 = std::max(max_f1, std::fabs(d));
  for (double d : table.f2) b.max_abs_f2 = std::max(b.max_abs_f2, std::fabs(d));
  b.scale = max_f1 / table.interval.width();

  if (b.max_abs_f2 <= kCurvatureTau * b.scale) {
    b.kind = CurvatureBranch::Kind::Degenerate;
    return b;
  }
  const double floor = kCurvatureTau * b.max_abs_f2;
  b.sign = 0;
  for (std::size_t k = 0; k < table.f2.size(); ++k) {
    const double d = table.f2[k];
    if (std::fabs(d) <= floor) {
      b.kind = CurvatureBranch::Kind::Vanishing;
      b.witness_x = table.interval.node(k);
      b.sign = 0;
      return b;
    }
    const int s = d > 0.0 ? 1 : -1;
    if (b.sign == 0) {
      b.sign = s;
    } else if (s != b.sign) {
      b.kind = CurvatureBranch::Kind::SignChange;
      b.witness_x = table.interval.node(k);
      b.sign = 0;
      return b;
    }
  }
  return b;
}

ScalarGrid rho(const Generator& gen) {
  if (!gen.increasing()) {
    throw UsageError("rho expects an increasing generator; normalize " + gen.describe() + " first");
  }
  const DerivativeTable t = gen.tabulate();
  const CurvatureBranch branch = second_derivative_branch(t);
  switch (branch.kind) {
    case CurvatureBranch::Kind::Degenerate:
      throw DegenerateSecondDerivative("f'' vanishes identically for " + gen.describe() +
                                       " (arithmetic-equivalent generator)");
    case CurvatureBranch::Kind::Vanishing:
      throw SignChange("f'' vanishes at x = " + fmt_real(branch.witness_x), branch.witness_x);
    case CurvatureBranch::Kind::SignChange:
      throw SignChange("f'' changes sign at x = " + fmt_real(branch.witness_x), branch.witness_x);
    case CurvatureBranch::Kind::NowhereVanishing:
      break;
  }
  if (t.ratio) return {t.interval, *t.ratio};
  std::vector<double> r(t.f.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = t.f1[k] / t.f2[k];
  return {t.interval, std::move(r)};
}

double invert_f(const Generator& gen, double y) {
  const WorkingInterval& dom = gen.domain();
  const double ylo = gen.value(dom.lo());
  const double yhi = gen.value(dom.hi());
  if (!(y >= std::min(ylo, yhi) && y <= std::max(ylo, yhi))) {
    throw RangeError("y = " + fmt_real(y) + " outside the range of " + gen.describe());
  }
  return bisect([&](double x) { return gen.value(x) - y; }, dom.lo(), dom.hi());
}

}  // namespace qam
