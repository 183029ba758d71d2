#include "riskclt/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace riskclt::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return v;
}

namespace {

void dump_into(const Json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(it.key()).dump() + ": ";
        dump_into(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_into(v[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? format_double(d) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) cells.push_back(cell);
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

double json_double(const Json& v) {
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  dump_into(value, out, 0);
  out += "\n";
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line);
      continue;
    }
    auto cells = split(line, ',');
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != table.header.size()) {
        throw std::invalid_argument("ragged CSV row: " + line);
      }
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

std::string stats_csv(const std::vector<double>& stats) {
  std::string out = "stat\n";
  for (double s : stats) out += format_double(s) + "\n";
  return out;
}

std::vector<double> read_stats_csv(const std::string& text) {
  const CsvTable t = parse_csv(text);
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back(parse_double(row.at(0)));
  return out;
}

std::string histogram_csv(const Histogram& hist) {
  std::string out = "bin_left,bin_right,count\n";
  for (const auto& b : hist.rows()) {
    out += format_double(b.left) + "," + format_double(b.right) + "," +
           std::to_string(b.count) + "\n";
  }
  return out;
}

Histogram read_histogram_csv(const std::string& text) {
  const CsvTable t = parse_csv(text);
  if (t.rows.size() < 3) throw std::invalid_argument("histogram needs sentinel rows");
  Histogram h;
  const auto count_of = [](const std::string& s) {
    return static_cast<std::size_t>(std::stoull(s));
  };
  h.underflow = count_of(t.rows.front().at(2));
  h.overflow = count_of(t.rows.back().at(2));
  h.lo = parse_double(t.rows.front().at(1));
  h.hi = parse_double(t.rows.back().at(0));
  for (std::size_t i = 1; i + 1 < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    h.bins.push_back({parse_double(row[0]), parse_double(row[1]), count_of(row[2])});
  }
  return h;
}

Json summary_json(const ExperimentResult& result) {
  const CltParams& p = result.params;
  Json params = {
      {"theorem", to_string(p.theorem)},
      {"rate", p.rate == Rate::p ? "p" : "sqrt_p"},
      {"c", p.c},
      {"c_n", p.c_n},
      {"p", p.p},
      {"center", p.center},
      {"mu", p.mu},
      {"sigma2", p.sigma2},
      {"mu_practical", p.mu_practical},
      {"sigma2_practical", p.sigma2_practical},
  };
  return Json{
      {"mean", result.mean},
      {"variance", result.variance},
      {"ks_distance", result.ks_distance},
      {"cover_rate", result.cover_rate},
      {"covered", result.covered},
      {"reps", result.stats.size()},
      {"params", params},
      {"interval",
       {{"lower", result.interval.lower},
        {"upper", result.interval.upper},
        {"alpha", result.interval.alpha}}},
  };
}

Summary read_summary_json(const std::string& text) {
  const Json j = Json::parse(text);
  Summary s;
  s.mean = json_double(j.at("mean"));
  s.variance = json_double(j.at("variance"));
  s.ks_distance = json_double(j.at("ks_distance"));
  s.cover_rate = json_double(j.at("cover_rate"));
  s.reps = j.at("reps").get<std::size_t>();
  const Json& p = j.at("params");
  s.params.theorem = theorem_from_string(p.at("theorem").get<std::string>());
  s.params.rate = p.at("rate").get<std::string>() == "p" ? Rate::p : Rate::sqrt_p;
  s.params.c = json_double(p.at("c"));
  s.params.c_n = json_double(p.at("c_n"));
  s.params.p = json_double(p.at("p"));
  s.params.center = json_double(p.at("center"));
  s.params.mu = json_double(p.at("mu"));
  s.params.sigma2 = json_double(p.at("sigma2"));
  s.params.mu_practical = json_double(p.at("mu_practical"));
  s.params.sigma2_practical = json_double(p.at("sigma2_practical"));
  const Json& ci = j.at("interval");
  s.interval = {json_double(ci.at("lower")), json_double(ci.at("upper")),
                json_double(ci.at("alpha"))};
  return s;
}

std::string band_csv(const DescentBand& band) {
  std::string out = "n,c_n,center,lower,upper,valid\n";
  for (const auto& r : band.rows) {
    out += std::to_string(r.n) + "," + format_double(r.c_n) + "," +
           format_double(r.center) + "," + format_double(r.lower) + "," +
           format_double(r.upper) + "," + (r.valid ? "1" : "0") + "\n";
  }
  return out;
}

DescentBand read_band_csv(const std::string& text) {
  const CsvTable t = parse_csv(text);
  DescentBand band;
  for (const auto& row : t.rows) {
    BandRow r;
    r.n = static_cast<std::size_t>(std::stoull(row.at(0)));
    r.c_n = parse_double(row.at(1));
    r.center = parse_double(row.at(2));
    r.lower = parse_double(row.at(3));
    r.upper = parse_double(row.at(4));
    r.valid = row.at(5) == "1";
    band.rows.push_back(r);
  }
  return band;
}

std::string pairs_csv(const std::vector<HurtPair>& pairs) {
  std::string out = "n1,n2,gap\n";
  for (const auto& pr : pairs) {
    out += std::to_string(pr.n1) + "," + std::to_string(pr.n2) + "," +
           format_double(pr.gap) + "\n";
  }
  return out;
}

std::vector<HurtPair> read_pairs_csv(const std::string& text) {
  const CsvTable t = parse_csv(text);
  std::vector<HurtPair> out;
  for (const auto& row : t.rows) {
    out.push_back({static_cast<std::size_t>(std::stoull(row.at(0))),
                   static_cast<std::size_t>(std::stoull(row.at(1))),
                   parse_double(row.at(2))});
  }
  return out;
}

std::string density_surface_csv(const DescentBand& band, const std::vector<double>& grid,
                                const Matrix& density) {
  std::string out = "n,risk,density\n";
  for (std::size_t i = 0; i < band.rows.size(); ++i) {
    const std::string n = std::to_string(band.rows[i].n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      out += n + "," + format_double(grid[j]) + "," +
             format_double(density(static_cast<Eigen::Index>(i),
                                   static_cast<Eigen::Index>(j))) +
             "\n";
    }
  }
  return out;
}

std::string mp_density_csv(double c, std::size_t steps) {
  const MpLaw law(c);
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  std::string out = "# point_mass_at_zero=" + format_double(law.point_mass_at_zero) + "\n";
  out += "x,density\n";
  const double width = (law.b - law.a) / static_cast<double>(steps);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double x = i == steps ? law.b : law.a + width * static_cast<double>(i);
    out += format_double(x) + "," + format_double(mp_density(x, c)) + "\n";
  }
  return out;
}

}  // namespace riskclt::io
