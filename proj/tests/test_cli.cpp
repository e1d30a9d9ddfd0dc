#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "qamean/cli.hpp"
#include "qamean/envelope.hpp"
#include "qamean/mean.hpp"

using namespace qam;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(const std::vector<std::string>& args) {
  const Result r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("qamean_cli_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, EvalExample) {
  const json j = run_json({"eval", "--gen", "power:2", "--vec", "1,7"});
  EXPECT_NEAR(j["mean"].get<double>(), 5.0, 1e-14);
  EXPECT_EQ(j["header"]["command"], "eval");
  EXPECT_EQ(j["header"]["grid"], 1025);
  EXPECT_EQ(j["header"]["seed"], 0);
  EXPECT_EQ(j["header"]["trials"], 10000);
}

TEST(Cli, EvalCsvFile) {
  const fs::path p = temp_file("tuples.csv");
  std::ofstream(p) << "1,4\n2,8\n";
  const json j = run_json({"eval", "--gen", "log", "--csv", p.string()});
  ASSERT_EQ(j["means"].size(), 2u);
  EXPECT_NEAR(j["means"][0].get<double>(), 2.0, 1e-14);
  EXPECT_NEAR(j["means"][1].get<double>(), 4.0, 1e-14);
  fs::remove(p);
}

TEST(Cli, ClassifyExample) {
  const json j = run_json({"classify", "--gen", "id", "--lo", "0", "--hi", "1"});
  EXPECT_EQ(j["class"], "ArithmeticBoth");
  EXPECT_EQ(run_json({"classify", "--gen", "power:3"})["class"], "Convex");
  EXPECT_EQ(run_json({"classify", "--gen", "power:0.5"})["class"], "Concave");
}

TEST(Cli, CompareExample) {
  const json j = run_json({"compare", "--gen", "log", "--gen2", "power:2"});
  EXPECT_EQ(j["ordering"], "LessOrEqual");
}

TEST(Cli, EnvelopeGateWitness) {
  const json j = run_json({"envelope", "--gen", "log", "--lo", "0.5", "--hi", "4", "--kind", "convex"});
  EXPECT_EQ(j["status"], "NoneExists");
  ASSERT_TRUE(j.contains("witness"));
  const auto v = j["witness"]["inputs"][0].get<std::vector<double>>();
  const WorkingInterval I(0.5, 4.0);
  EXPECT_GT(arithmetic_mean(v) - qa_mean(Generator::log(I), v), 1e-6);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"verify", "--check", "symmetry", "--gen", "power:2", "--trials", "200"}).code, 0);
  const Result fail =
      run({"verify", "--check", "ij", "--gen", "power:2", "--gen2", "id", "--trials", "10000"});
  EXPECT_EQ(fail.code, 1);
  EXPECT_FALSE(json::parse(fail.out)["report"]["passed"].get<bool>());
  EXPECT_EQ(run({"eval", "--gen", "log", "--vec", "1,20"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
}

TEST(Cli, UsageErrorsNameTheFlag) {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"classify", "--gen", "bogus"}, "--gen"},
      {{"compare", "--gen", "log", "--gen2", "power:x"}, "--gen2"},
      {{"classify", "--gen", "log", "--lo", "3", "--hi", "2"}, "--lo"},
      {{"classify", "--gen", "log", "--grid", "2"}, "--grid"},
      {{"classify", "--gen", "log", "--trials", "0"}, "--trials"},
      {{"classify", "--gen", "log", "--format", "xml"}, "--format"},
      {{"classify", "--gen", "log", "--format", "csv"}, "--format"},
      {{"verify", "--gen", "log", "--check", "nope"}, "--check"},
      {{"verify", "--gen", "log", "--check", "ij"}, "--gen2"},
      {{"envelope", "--gen", "log", "--kind", "sideways"}, "--kind"},
      {{"eval", "--gen", "log", "--vec", "1,,2"}, "--vec"},
  };
  for (const auto& [args, flag] : cases) {
    const Result r = run(args);
    EXPECT_EQ(r.code, 2) << args[0];
    EXPECT_NE(r.err.find(flag), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
  }
}

TEST(Cli, VerifyIsByteIdentical) {
  for (const std::string check : {"ij", "kedlaya", "maximality", "duality", "symmetry"}) {
    std::vector<std::string> args{"verify", "--check", check, "--trials", "300", "--seed", "7"};
    if (check == "maximality") {
      args.insert(args.end(), {"--gen", "power:3", "--candidates", "3"});
    } else {
      args.insert(args.end(), {"--gen", "log", "--gen2", "id"});
    }
    const Result a = run(args);
    const Result b = run(args);
    EXPECT_LE(a.code, 1) << check << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << check;
  }
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args{"verify", "--check", "kedlaya", "--gen", "id", "--gen2", "log",
                                      "--trials", "500"};
  ::setenv("QAM_SEED", "11", 1);
  const Result env = run(args);
  auto explicit_args = args;
  explicit_args.insert(explicit_args.end(), {"--seed", "11"});
  const Result flag = run(explicit_args);
  auto override_args = args;
  override_args.insert(override_args.end(), {"--seed", "3"});
  const Result overridden = run(override_args);
  ::setenv("QAM_SEED", "abc", 1);
  const Result bad = run(args);
  ::unsetenv("QAM_SEED");

  EXPECT_EQ(env.out, flag.out);
  EXPECT_EQ(json::parse(env.out)["header"]["seed"], 11);
  EXPECT_EQ(json::parse(overridden.out)["header"]["seed"], 3);
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("QAM_SEED"), std::string::npos);
}

TEST(Cli, OutWritesFile) {
  const fs::path p = temp_file("out.json");
  const Result r = run({"classify", "--gen", "exp", "--lo", "0", "--hi", "2", "--out", p.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(slurp(p))["class"], "Convex");
  fs::remove(p);
}

TEST(Cli, EnvelopeCsvRoundTrip) {
  const struct {
    std::vector<std::string> args;
    WorkingInterval interval;
  } cases[] = {
      {{"--gen", "power:3", "--lo", "0.1", "--hi", "10"}, WorkingInterval(0.1, 10.0)},
      {{"--gen", "exp", "--lo", "0", "--hi", "2"}, WorkingInterval(0.0, 2.0)},
  };
  // a generator with rho = x^2, stored as a table
  const WorkingInterval sq(1.0, 3.0);
  const Generator f = reconstruct_from_ratio(ScalarGrid::sample(sq, [](double x) { return x * x; })).generator();
  const fs::path table = temp_file("rho_square.csv");
  {
    std::ofstream out(table);
    out.precision(17);
    out << "x,f,f1\n";
    for (std::size_t k = 0; k < sq.grid_points(); ++k) {
      const double x = sq.node(k);
      out << x << ',' << f.value(x) << ',' << f.first_derivative(x) << '\n';
    }
  }

  std::vector<std::pair<std::vector<std::string>, WorkingInterval>> all;
  for (const auto& c : cases) all.emplace_back(c.args, c.interval);
  all.push_back({{"--gen", "table:" + table.string()}, sq});

  std::mt19937_64 rng(3);
  for (const auto& [gen_args, I] : all) {
    std::vector<std::string> args{"envelope"};
    args.insert(args.end(), gen_args.begin(), gen_args.end());
    const json j = run_json(args);
    args.insert(args.end(), {"--format", "csv"});
    const Result csv = run(args);
    ASSERT_EQ(csv.code, 0) << csv.err;
    const fs::path p = temp_file("envelope.csv");
    std::ofstream(p) << csv.out;

    const Generator reloaded = load_table(p);
    const EnvelopeResult env = qa_convex_envelope(parse_generator(gen_args[1], I));
    ASSERT_TRUE(env.generator) << j.dump();
    std::uniform_real_distribution<double> u(I.lo(), I.hi());
    for (int t = 0; t < 2000; ++t) {
      std::vector<double> v(2 + t % 4);
      for (double& x : v) x = u(rng);
      ASSERT_NEAR(qa_mean(reloaded, v), qa_mean(*env.generator, v), 1e-8) << gen_args[1];
    }
    fs::remove(p);
  }
  fs::remove(table);
}

TEST(Cli, EnvelopeCsvNeedsGrids) {
  const Result r = run({"envelope", "--gen", "log", "--format", "csv"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--format"), std::string::npos);
}
