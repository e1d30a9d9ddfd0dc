#include "qamean/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "qamean/convexity.hpp"
#include "qamean/envelope.hpp"
#include "qamean/errors.hpp"
#include "qamean/verify.hpp"

namespace qam::cli {

namespace {

using nlohmann::ordered_json;

constexpr std::size_t kDefaultTrials = 10000;

struct CliConfig {
  std::string command;
  std::string gen;
  std::string gen2;
  double lo = 0.1;
  double hi = 10.0;
  std::size_t grid = kDefaultGridPoints;
  std::uint64_t seed = 0;
  std::size_t trials = kDefaultTrials;
  std::string format = "json";
  std::string out;

  std::string vec;
  std::string csv;
  std::string kind = "convex";
  std::string check;
  std::size_t candidates = 100;
  std::size_t m_max = 5;
  std::optional<std::size_t> n_max;
};


std::vector<double> parse_reals(const std::string& text, const std::string& where) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t\r");
    const auto e = item.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw UsageError(where + ": empty entry in '" + text + "'");
    item = item.substr(b, e - b + 1);
    char* end = nullptr;
    const double x = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size()) {
      throw UsageError(where + ": '" + item + "' is not a number");
    }
    v.push_back(x);
  }
  if (v.empty()) throw UsageError(where + ": no values given");
  return v;
}

std::vector<std::vector<double>> read_tuples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_reals(line, "--csv " + path));
  }
  if (rows.empty()) throw UsageError("--csv: " + path + " holds no tuples");
  return rows;
}

ordered_json header(const CliConfig& c) {
  ordered_json h;
  h["command"] = c.command;
  h["lo"] = c.lo;
  h["hi"] = c.hi;
  h["grid"] = c.grid;
  h["seed"] = c.seed;
  h["trials"] = c.trials;
  return h;
}

ordered_json interval_json(const WorkingInterval& I) {
  return {{"lo", I.lo()}, {"hi", I.hi()}, {"points", I.grid_points()}};
}

ordered_json report_json(const TrialReport& r) {
  ordered_json j;
  j["check"] = r.check;
  j["sampled"] = true;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["failures"] = r.failures;
  j["tolerance"] = r.tolerance;
  j["worst_margin"] = r.worst_margin;
  j["passed"] = r.passed();
  if (r.rejected > 0) j["rejected"] = r.rejected;
  if (r.witness) {
    j["witness"] = {{"inputs", r.witness->inputs},
                    {"lhs", r.witness->lhs},
                    {"rhs", r.witness->rhs}};
  }
  return j;
}

ordered_json rho_test_json(const RhoTest& t) {
  ordered_json j;
  j["passed"] = t.passed;
  j["positivity_margin"] = t.positivity_margin;
  j["concavity_margin"] = t.concavity_margin;
  if (t.nonpositive_x) j["nonpositive_x"] = *t.nonpositive_x;
  if (t.violating_triple) {
    const GridTriple& g = *t.violating_triple;
    j["violating_triple"] = {g.left, g.mid, g.right};
    j["second_difference"] = g.second_difference;
  }
  return j;
}

std::string branch_name(CurvatureBranch::Kind k) {
  switch (k) {
    case CurvatureBranch::Kind::Degenerate:
      return "degenerate";
    case CurvatureBranch::Kind::NowhereVanishing:
      return "nowhere_vanishing";
    case CurvatureBranch::Kind::Vanishing:
      return "vanishing";
    case CurvatureBranch::Kind::SignChange:
      return "sign_change";
  }
  return {};
}

ordered_json cmd_eval(const CliConfig& c, const Generator& f) {
  if (c.vec.empty() == c.csv.empty()) throw UsageError("eval needs exactly one of --vec or --csv");
  ordered_json j;
  j["header"] = header(c);
  j["gen"] = f.describe();
  if (!c.vec.empty()) {
    j["mean"] = qa_mean(f, parse_reals(c.vec, "--vec"));
  } else {
    ordered_json means = ordered_json::array();
    for (const auto& row : read_tuples(c.csv)) means.push_back(qa_mean(f, row));
    j["means"] = means;
  }
  return j;
}

ordered_json cmd_classify(const CliConfig& c, const Generator& f) {
  const ConvexityClass cls = classify(f);
  ordered_json j;
  j["header"] = header(c);
  j["gen"] = f.describe();
  j["class"] = to_string(cls.value);
  j["interval"] = interval_json(cls.interval);
  ordered_json margins;
  margins["branch"] = branch_name(cls.evidence.branch.kind);
  margins["max_abs_f2"] = cls.evidence.branch.max_abs_f2;
  margins["f2_scale"] = cls.evidence.branch.scale;
  if (cls.evidence.convex_test) margins["convex_test"] = rho_test_json(*cls.evidence.convex_test);
  if (cls.evidence.concave_test) {
    margins["concave_test"] = rho_test_json(*cls.evidence.concave_test);
  }
  j["margins"] = margins;
  const auto k = cls.evidence.branch.kind;
  if (k == CurvatureBranch::Kind::Vanishing || k == CurvatureBranch::Kind::SignChange) {
    j["witness"] = {{"f2_vanishes_near", cls.evidence.branch.witness_x}};
  } else if (cls.value == ConvexityKind::Neither && cls.evidence.convex_test) {
    j["witness"] = rho_test_json(*cls.evidence.convex_test);
  }
  return j;
}

ordered_json cmd_compare(const CliConfig& c, const Generator& f, const Generator& g) {
  const ComparisonReport r = compare(f, g);
  ordered_json j;
  j["header"] = header(c);
  j["gen"] = f.describe();
  j["gen2"] = g.describe();
  j["ordering"] = to_string(r.ordering);
  j["tolerance"] = r.tolerance;
  j["max_excess"] = r.max_excess;
  j["min_excess"] = r.min_excess;
  if (r.le_violation_x) j["le_violation_x"] = *r.le_violation_x;
  if (r.ge_violation_x) j["ge_violation_x"] = *r.ge_violation_x;
  return j;
}

EnvelopeKind parse_kind(const std::string& kind) {
  if (kind == "convex") return EnvelopeKind::Convex;
  if (kind == "concave") return EnvelopeKind::Concave;
  throw UsageError("--kind must be convex or concave, got '" + kind + "'");
}

EnvelopeResult envelope_of(const CliConfig& c, const Generator& f) {
  EnvelopeOptions opt;
  opt.gate_trials = c.trials;
  opt.seed = c.seed;
  return parse_kind(c.kind) == EnvelopeKind::Convex ? qa_convex_envelope(f, opt)
                                                    : qa_concave_envelope(f, opt);
}

std::string envelope_csv(const EnvelopeResult& e) {
  if (!e.rho || !e.m || !e.g || !e.g1) {
    throw UsageError("--format csv: envelope status " + to_string(e.status) +
                     " has no grid tables");
  }
  std::string s = "x,rho,m,g,g1\n";
  char buf[160];
  for (std::size_t k = 0; k < e.g->size(); ++k) {
    const double x = e.g->x(k);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, (*e.rho)[k], (*e.m)(x),
                  (*e.g)[k], (*e.g1)[k]);
    s += buf;
  }
  return s;
}

ordered_json cmd_envelope(const CliConfig& c, const EnvelopeResult& e, const Generator& f) {
  ordered_json j;
  j["header"] = header(c);
  j["gen"] = f.describe();
  j["kind"] = to_string(e.kind);
  j["status"] = to_string(e.status);
  j["diagnostic"] = e.diagnostic;
  j["grid"] = interval_json(e.interval);
  if (e.m) {
    ordered_json verts = ordered_json::array();
    for (const auto& v : e.m->vertices()) verts.push_back({v.x, v.value});
    j["hull_vertices"] = verts;
  }
  if (e.g) j["g"] = e.g->values();
  if (e.g1) j["g1"] = e.g1->values();
  j["gate"] = report_json(e.gate);
  if (e.gate.witness) j["witness"] = j["gate"]["witness"];
  return j;
}

ordered_json cmd_verify(const CliConfig& c, const Generator& f, const std::optional<Generator>& g) {
  TrialReport r;
  auto need_gen2 = [&]() -> const Generator& {
    if (!g) throw UsageError("--check " + c.check + " needs --gen2");
    return *g;
  };
  if (c.check == "ij") {
    r = ingham_jessen_check(Mean::quasi_arithmetic(f), Mean::quasi_arithmetic(need_gen2()),
                            c.m_max, c.n_max.value_or(5), c.trials, c.seed);
  } else if (c.check == "kedlaya") {
    r = kedlaya_check(Mean::quasi_arithmetic(f), Mean::quasi_arithmetic(need_gen2()),
                      c.n_max.value_or(5), c.trials, c.seed);
  } else if (c.check == "maximality") {
    const EnvelopeResult e = envelope_of(c, f);
    if (e.status != EnvelopeStatus::Envelope && e.status != EnvelopeStatus::AlreadyExtremal) {
      throw UsageError("--check maximality needs a " + c.kind + " envelope; status is " +
                       to_string(e.status));
    }
    r = maximality_check(f, e, c.candidates, c.trials, c.seed);
  } else if (c.check == "duality") {
    EnvelopeOptions opt;
    opt.gate_trials = c.trials;
    opt.seed = c.seed;
    r = duality_check(f, c.trials, c.seed, opt);
  } else if (c.check == "symmetry") {
    r = symmetry_check(Mean::quasi_arithmetic(f), c.trials, c.seed, c.n_max.value_or(6));
  } else {
    throw UsageError("--check must be one of ij, kedlaya, maximality, duality, symmetry");
  }
  ordered_json j;
  j["header"] = header(c);
  j["gen"] = f.describe();
  if (g) j["gen2"] = g->describe();
  j["report"] = report_json(r);
  if (!r.passed()) j["exit"] = 1;
  return j;
}

void emit(const CliConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw UsageError("--out: cannot write " + c.out);
  file << text;
}

Generator parse_flag(const std::string& flag, const std::string& spec,
                     const WorkingInterval& domain) {
  try {
    return parse_generator(spec, domain);
  } catch (const UsageError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

int execute(CliConfig& c, std::ostream& out) {
  if (!(c.lo < c.hi)) throw UsageError("--lo must be below --hi");
  if (c.grid < 3) throw UsageError("--grid must be at least 3");
  if (c.trials < 1) throw UsageError("--trials must be at least 1");
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
  if (c.format == "csv" && c.command != "envelope") {
    throw UsageError("--format csv is only available for envelope");
  }

  const WorkingInterval domain(c.lo, c.hi, c.grid);
  const Generator f = parse_flag("--gen", c.gen, domain);
  std::optional<Generator> g;
  if (!c.gen2.empty()) g = parse_flag("--gen2", c.gen2, domain);
  if (c.command == "envelope") parse_kind(c.kind);

  ordered_json j;
  int code = 0;
  if (c.command == "eval") {
    j = cmd_eval(c, f);
  } else if (c.command == "classify") {
    j = cmd_classify(c, f);
  } else if (c.command == "compare") {
    if (!g) throw UsageError("compare needs --gen2");
    j = cmd_compare(c, f, *g);
  } else if (c.command == "envelope") {
    const EnvelopeResult e = envelope_of(c, f);
    if (c.format == "csv") {
      emit(c, envelope_csv(e), out);
      return 0;
    }
    j = cmd_envelope(c, e, f);
  } else {
    j = cmd_verify(c, f, g);
    if (j.contains("exit")) {
      j.erase("exit");
      code = 1;
    }
  }
  emit(c, j.dump(2) + "\n", out);
  return code;
}

void add_common(CLI::App* sub, CliConfig& c, bool gen2) {
  sub->add_option("--gen", c.gen, "generator spec: power:<p>, log, exp, id, affine:<a>:<b>, table:<path>")
      ->required();
  if (gen2) sub->add_option("--gen2", c.gen2, "second generator spec");
  sub->add_option("--lo", c.lo, "interval lower end")->capture_default_str();
  sub->add_option("--hi", c.hi, "interval upper end")->capture_default_str();
  sub->add_option("--grid", c.grid, "grid points")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed (default from QAM_SEED, else 0)");
  sub->add_option("--trials", c.trials, "random trials")->capture_default_str();
  sub->add_option("--format", c.format, "json or csv")->capture_default_str();
  sub->add_option("--out", c.out, "write the report to this path");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig c;
  CLI::App app{"Quasiarithmetic means: evaluation, convexity, envelopes, sampled checks",
               "qamean"};
  app.require_subcommand(1, 1);

  auto* eval = app.add_subcommand("eval", "evaluate QA_f on tuples");
  add_common(eval, c, false);
  eval->add_option("--vec", c.vec, "comma-separated tuple");
  eval->add_option("--csv", c.csv, "CSV file with one tuple per row");

  auto* classify_cmd = app.add_subcommand("classify", "classify QA_f as convex, concave or neither");
  add_common(classify_cmd, c, false);

  auto* compare_cmd = app.add_subcommand("compare", "compare QA_f and QA_g via f''/f' vs g''/g'");
  add_common(compare_cmd, c, true);

  auto* envelope = app.add_subcommand("envelope", "convex or concave quasiarithmetic envelope");
  add_common(envelope, c, false);
  envelope->add_option("--kind", c.kind, "convex or concave")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "sampled inequality checks");
  add_common(verify, c, true);
  verify->add_option("--check", c.check, "ij, kedlaya, maximality, duality or symmetry")
      ->required();
  verify->add_option("--kind", c.kind, "envelope kind for maximality")->capture_default_str();
  verify->add_option("--candidates", c.candidates, "maximality candidates")
      ->capture_default_str();
  verify->add_option("--m-max", c.m_max, "largest column count (ij)")->capture_default_str();
  verify->add_option("--n-max", c.n_max, "largest tuple length or row count");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (auto* sub : {eval, classify_cmd, compare_cmd, envelope, verify}) {
    if (sub->parsed()) {
      c.command = sub->get_name();
      if (sub->count("--seed") == 0) {
        if (const char* env = std::getenv("QAM_SEED")) {
          try {
            std::size_t used = 0;
            c.seed = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
          } catch (const std::exception&) {
            err << "error: QAM_SEED must be an unsigned integer, got '" << env << "'\n";
            return 2;
          }
        }
      }
    }
  }

  try {
    return execute(c, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qam::cli
