#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qamean/errors.hpp"
#include "qamean/generator.hpp"

namespace qam {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_real(const std::string& text, double& out) {
  if (text.empty()) return false;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && std::isfinite(out);
}

double require_real(const std::string& text, std::string_view spec) {
  double v = 0.0;
  if (!parse_real(text, v)) {
    throw UsageError("bad number '" + text + "' in generator spec '" + std::string(spec) + "'");
  }
  return v;
}

}  // namespace

Generator parse_generator(std::string_view spec, const WorkingInterval& domain) {
  const std::string text = trim(spec);
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::vector<std::string> args =
      colon == std::string::npos ? std::vector<std::string>{} : split(text.substr(colon + 1), ':');

  auto expect_args = [&](std::size_t n) {
    if (args.size() != n) {
      throw UsageError("generator spec '" + text + "' expects " + std::to_string(n) +
                       " argument(s)");
    }
  };

  if (head == "power") {
    expect_args(1);
    return Generator::power(require_real(args[0], text), domain);
  }
  if (head == "log") {
    expect_args(0);
    return Generator::log(domain);
  }
  if (head == "exp") {
    expect_args(0);
    return Generator::exp(domain);
  }
  if (head == "id") {
    expect_args(0);
    return Generator::identity(domain);
  }
  if (head == "affine") {
    expect_args(2);
    return Generator::affine(require_real(args[0], text), require_real(args[1], text), domain);
  }
  if (head == "table") {
    if (colon == std::string::npos || colon + 1 == text.size()) {
      throw UsageError("generator spec 'table:<path>' needs a path");
    }
    return load_table(text.substr(colon + 1));
  }
  throw UsageError("unknown generator spec '" + text +
                   "' (expected power:<p>, log, exp, id, affine:<a>:<b>, table:<path>)");
}

Generator load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open table file '" + path.string() + "'");

  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line, ',');
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) numeric = numeric && parse_real(fields[i], row[i]);
    if (!numeric) {
      if (rows.empty() && header.empty()) {
        header = std::move(fields);
        continue;
      }
      throw UsageError(path.string() + ":" + std::to_string(line_no) + ": non-numeric row");
    }
    rows.push_back(std::move(row));
  }

  std::size_t xcol = 0;
  std::size_t fcol = 1;
  std::optional<std::size_t> dcol;
  if (!header.empty()) {
    auto find = [&](std::initializer_list<const char*> names) -> std::optional<std::size_t> {
      for (const char* name : names) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
      }
      return std::nullopt;
    };
    xcol = find({"x"}).value_or(0);
    fcol = find({"f", "g"}).value_or(1);
    dcol = find({"f1", "g1"});
  }
  if (rows.size() < 3) throw UsageError("table '" + path.string() + "' needs at least 3 rows");

  const std::size_t ncols = std::max({xcol, fcol, dcol.value_or(0)}) + 1;
  std::vector<double> xs, fs, ds;
  for (const auto& r : rows) {
    if (r.size() < ncols) throw UsageError("table '" + path.string() + "' has a short row");
    xs.push_back(r[xcol]);
    fs.push_back(r[fcol]);
    if (dcol) ds.push_back(r[*dcol]);
  }
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (!(xs[k] > xs[k - 1])) {
      throw UsageError("table '" + path.string() + "' x column is not strictly increasing");
    }
  }

  const WorkingInterval interval(xs.front(), xs.back(), xs.size());
  bool uniform = true;
  for (std::size_t k = 0; k < xs.size() && uniform; ++k) {
    uniform = std::fabs(xs[k] - interval.node(k)) <= 1e-9 * interval.width();
  }
  auto resample = [&](const std::vector<double>& ys) {
    if (uniform) return ys;
    std::vector<double> out(ys.size());
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const double x = interval.node(k);
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - xs.begin()), 1,
                                              xs.size() - 1);
      const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
      out[k] = ys[j - 1] + t * (ys[j] - ys[j - 1]);
    }
    return out;
  };

  std::optional<ScalarGrid> f1;
  if (dcol) f1 = ScalarGrid(interval, resample(ds));
  return Generator::tabulated(ScalarGrid(interval, resample(fs)), std::move(f1));
}

}  // namespace qam
