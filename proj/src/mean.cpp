#include "qamean/mean.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "qamean/bisection.hpp"
#include "qamean/errors.hpp"

namespace qam {

namespace {

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> x(v.begin(), v.end());
  std::sort(x.begin(), x.end());
  return x;
}

void check_nonempty(std::span<const double> v, const char* what) {
  if (v.empty()) throw UsageError(std::string(what) + " of an empty vector");
}

void check_in(const WorkingInterval& dom, std::span<const double> v) {
  for (double x : v) {
    if (!dom.contains(x)) {
      std::ostringstream os;
      os << "argument " << x << " outside [" << dom.lo() << ", " << dom.hi() << "]";
      throw DomainError(os.str());
    }
  }
}

}  // namespace

double arithmetic_mean(std::span<const double> v) {
  check_nonempty(v, "arithmetic mean");
  const auto x = sorted_copy(v);
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  return std::clamp(m, x.front(), x.back());
}

double qa_mean(const Generator& gen, std::span<const double> v) {
  check_nonempty(v, "quasiarithmetic mean");
  check_in(gen.domain(), v);
  const auto x = sorted_copy(v);
  const double lo = x.front();
  const double hi = x.back();
  if (lo == hi) return lo;

  const double centre = gen.value(lo + 0.5 * (hi - lo));
  std::vector<double> shifted(x.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    shifted[i] = gen.value(x[i]) - centre;
    scale = std::max(scale, std::fabs(shifted[i]));
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
  double target = 0.0;
  for (double s : shifted) target += s / scale;
  target /= static_cast<double>(x.size());

  return bisect([&](double t) { return (gen.value(t) - centre) / scale - target; }, lo, hi);
}

double power_mean(double p, std::span<const double> v) {
  check_nonempty(v, "power mean");
  const auto x = sorted_copy(v);
  if (!(x.front() > 0.0)) throw DomainError("power mean requires positive arguments");
  const double top = x.back();
  double m;
  if (p == 0.0) {
    double s = 0.0;
    for (double xi : x) s += std::log(xi / top);
    m = top * std::exp(s / static_cast<double>(x.size()));
  } else {
    double s = 0.0;
    for (double xi : x) s += std::pow(xi / top, p);
    m = top * std::pow(s / static_cast<double>(x.size()), 1.0 / p);
  }
  return std::clamp(m, x.front(), x.back());
}

Mean Mean::quasi_arithmetic(Generator gen) {
  Mean m(Kind::QuasiArithmetic, gen.domain());
  m.gen_ = std::move(gen);
  return m;
}

Mean Mean::arithmetic(const WorkingInterval& domain) { return {Kind::Arithmetic, domain}; }

Mean Mean::power(double p, const WorkingInterval& domain) {
  if (!(domain.lo() > 0.0)) throw DomainError("power mean requires a domain inside (0, inf)");
  Mean m(Kind::Power, domain);
  m.p_ = p;
  return m;
}

Mean Mean::custom(std::string name, const WorkingInterval& domain, Function fn) {
  Mean m(Kind::Custom, domain);
  m.name_ = std::move(name);
  m.fn_ = std::move(fn);
  return m;
}

double Mean::operator()(std::span<const double> v) const {
  check_nonempty(v, "mean");
  check_in(domain_, v);
  switch (kind_) {
    case Kind::QuasiArithmetic:
      return qa_mean(*gen_, v);
    case Kind::Arithmetic:
      return arithmetic_mean(v);
    case Kind::Power:
      return power_mean(p_, v);
    case Kind::Reflected: {
      std::vector<double> neg(v.begin(), v.end());
      for (double& x : neg) x = -x;
      return -(*inner_)(neg);
    }
    case Kind::Custom:
      return fn_(v);
  }
  return 0.0;
}

std::string Mean::name() const {
  switch (kind_) {
    case Kind::QuasiArithmetic:
      return "QA[" + gen_->describe() + "]";
    case Kind::Arithmetic:
      return "A";
    case Kind::Power: {
      std::ostringstream os;
      os << "P[" << p_ << "]";
      return os.str();
    }
    case Kind::Reflected:
      return "reflect(" + inner_->name() + ")";
    case Kind::Custom:
      return name_;
  }
  return {};
}

Mean reflect(const Mean& m) {
  switch (m.kind_) {
    case Mean::Kind::QuasiArithmetic:
      return Mean::quasi_arithmetic(m.gen_->reflected());
    case Mean::Kind::Arithmetic:
      return Mean::arithmetic(m.domain_.reflected());
    case Mean::Kind::Reflected:
      return *m.inner_;
    case Mean::Kind::Power:
    case Mean::Kind::Custom:
      break;
  }
  Mean out(Mean::Kind::Reflected, m.domain_.reflected());
  out.inner_ = std::make_shared<const Mean>(m);
  return out;
}

std::string to_string(Ordering o) {
  switch (o) {
    case Ordering::LessOrEqual:
      return "LessOrEqual";
    case Ordering::GreaterOrEqual:
      return "GreaterOrEqual";
    case Ordering::Equal:
      return "Equal";
    case Ordering::Incomparable:
      return "Incomparable";
  }
  return {};
}

ComparisonReport compare(const Generator& f, const Generator& g) {
  if (!(f.domain() == g.domain())) {
    throw UsageError("compare requires generators on the same interval and grid");
  }
  const DerivativeTable tf = f.tabulate();
  const DerivativeTable tg = g.tabulate();
  const WorkingInterval& dom = tf.interval;

  double scale = 1.0 / dom.width();
  std::vector<double> diff(tf.f.size());
  for (std::size_t k = 0; k < diff.size(); ++k) {
    const double kf = tf.f2[k] / tf.f1[k];
    const double kg = tg.f2[k] / tg.f1[k];
    scale = std::max({scale, std::fabs(kf), std::fabs(kg)});
    diff[k] = kf - kg;
  }
  const auto [mn, mx] = std::minmax_element(diff.begin(), diff.end());

  ComparisonReport r{Ordering::Incomparable, 1e-8 * scale, *mx, *mn, std::nullopt, std::nullopt};
  const bool le = r.max_excess <= r.tolerance;
  const bool ge = r.min_excess >= -r.tolerance;
  if (le && ge) {
    r.ordering = Ordering::Equal;
  } else if (le) {
    r.ordering = Ordering::LessOrEqual;
  } else if (ge) {
    r.ordering = Ordering::GreaterOrEqual;
  } else {
    r.le_violation_x = dom.node(static_cast<std::size_t>(mx - diff.begin()));
    r.ge_violation_x = dom.node(static_cast<std::size_t>(mn - diff.begin()));
  }
  return r;
}

}  // namespace qam
