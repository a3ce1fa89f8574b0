#include "cwikel/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cwikel/error.hpp"

namespace cwikel {

namespace {

using nlohmann::json;

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ',' || *p == ' ' || *p == '\t')) ++p;
    if (p >= end) break;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) {
      // from_chars rejects "inf"; accept it explicitly for infinite supports.
      if (std::strncmp(p, "inf", 3) == 0) {
        v = std::numeric_limits<double>::infinity();
        next = p + 3;
      } else {
        throw Error(ErrorKind::IoError, "malformed number in '" + line + "'");
      }
    }
    out.push_back(v);
    p = next;
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

void write_grid(const std::string& path, const SampledFunction& f, GridEncoding encoding) {
  json header;
  header["dim"] = f.dim();
  header["domain"] = f.domain().kind == DomainKind::Torus ? "torus" : "box";
  header["half_width"] = f.domain().half_width;
  header["resolution"] = f.resolution();
  header["measure"] = f.measure() == MeasureKind::Normalized ? "normalized" : "lebesgue";
  header["encoding"] = encoding == GridEncoding::Csv ? "csv" : "binary";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'");
  out << header.dump() << '\n';
  if (encoding == GridEncoding::Csv) {
    char buf[32];
    for (double v : f.values()) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << '\n';
    }
  } else {
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path + "'");
}

SampledFunction read_grid(const std::string& path) {
  const std::string text = read_text(path);
  const auto eol = text.find('\n');
  if (eol == std::string::npos) throw Error(ErrorKind::IoError, "missing grid header in '" + path + "'");
  json header;
  try {
    header = json::parse(text.substr(0, eol));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("bad grid header: ") + e.what());
  }
  try {
    const int dim = header.at("dim").get<int>();
    const std::string domain = header.at("domain").get<std::string>();
    const int resolution = header.at("resolution").get<int>();
    const double half = header.value("half_width", std::numbers::pi);
    const std::string measure =
        header.value("measure", domain == "torus" ? std::string("normalized") : std::string("lebesgue"));
    const std::string encoding = header.value("encoding", std::string("csv"));
    Domain dom = domain == "torus" ? Domain{DomainKind::Torus, half}
                 : domain == "box" ? Domain::box(half)
                                   : throw Error(ErrorKind::IoError, "unknown domain '" + domain + "'");
    const MeasureKind mk = measure == "normalized" ? MeasureKind::Normalized : MeasureKind::Lebesgue;
    std::size_t count = 1;
    for (int a = 0; a < dim; ++a) count *= static_cast<std::size_t>(resolution);
    std::vector<double> values;
    values.reserve(count);
    if (encoding == "binary") {
      const std::size_t bytes = text.size() - eol - 1;
      if (bytes != count * sizeof(double))
        throw Error(ErrorKind::IoError, "binary payload has the wrong size");
      values.resize(count);
      std::memcpy(values.data(), text.data() + eol + 1, bytes);
    } else {
      for (const auto& line : split_lines(text.substr(eol + 1)))
        for (double v : parse_row(line)) values.push_back(v);
    }
    return SampledFunction(dim, dom, resolution, std::move(values), mk);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("bad grid header: ") + e.what());
  }
}

std::string step_function_csv(const StepFunction& g) {
  std::string out = "t_left,t_right,value\n";
  double left = 0.0;
  for (std::size_t i = 0; i < g.pieces(); ++i) {
    out += format_number(left) + "," + format_number(g.ends()[i]) + "," + format_number(g.values()[i]) + "\n";
    left = g.ends()[i];
  }
  return out;
}

StepFunction parse_step_function_csv(const std::string& text) {
  std::vector<double> ends;
  std::vector<double> values;
  bool first = true;
  for (const auto& line : split_lines(text)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("t_left", 0) == 0) continue;
    }
    const auto row = parse_row(line);
    if (row.size() != 3) throw Error(ErrorKind::IoError, "expected three columns in '" + line + "'");
    ends.push_back(row[1]);
    values.push_back(row[2]);
  }
  return StepFunction(std::move(ends), std::move(values));
}

std::string covering_json(const Covering& cov) {
  std::vector<long> family(cov.cubes.size(), -1);
  for (std::size_t f = 0; f < cov.families.size(); ++f)
    for (std::size_t k : cov.families[f]) family[k] = static_cast<long>(f);
  json arr = json::array();
  for (std::size_t k = 0; k < cov.cubes.size(); ++k) {
    const auto& c = cov.cubes[k];
    json center = json::array();
    for (int a = 0; a < c.dim; ++a) center.push_back(c.center[a]);
    arr.push_back({{"center", center},
                   {"side", c.side},
                   {"j_value", k < cov.j_values.size() ? cov.j_values[k] : 0.0},
                   {"family", family[k]}});
  }
  return arr.dump(2) + "\n";
}

Covering parse_covering_json(const std::string& text) {
  Covering cov;
  try {
    const json arr = json::parse(text);
    std::vector<std::pair<long, std::size_t>> fam;
    for (const auto& item : arr) {
      TorusCube c;
      const auto& center = item.at("center");
      c.dim = static_cast<int>(center.size());
      for (int a = 0; a < c.dim; ++a) c.center[a] = center.at(a).get<double>();
      c.side = item.at("side").get<double>();
      cov.cubes.push_back(c);
      cov.j_values.push_back(item.value("j_value", 0.0));
      cov.saturated.push_back(false);
      fam.emplace_back(item.value("family", -1L), cov.cubes.size() - 1);
    }
    for (const auto& [f, k] : fam) {
      if (f < 0) continue;
      if (cov.families.size() <= static_cast<std::size_t>(f)) cov.families.resize(f + 1);
      cov.families[f].push_back(k);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("bad covering json: ") + e.what());
  }
  return cov;
}

std::string finite_rank_operator_json(const FiniteRankOperator& k) {
  json cells = json::array();
  for (const auto& cell : k.cells) {
    const auto& p = cell.projector;
    json center = json::array();
    for (int a = 0; a < k.dim; ++a) center.push_back(p.cube().center[a]);
    json monomials = json::array();
    for (const auto& m : p.monomials()) {
      json e = json::array();
      for (int a = 0; a < k.dim; ++a) e.push_back(m[a]);
      monomials.push_back(e);
    }
    json coeffs = json::array();
    for (Eigen::Index r = 0; r < p.monomial_coefficients().rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < p.monomial_coefficients().cols(); ++c)
        row.push_back(p.monomial_coefficients()(r, c));
      coeffs.push_back(row);
    }
    cells.push_back({{"center", center},
                     {"side", p.cube().side},
                     {"basis_dimension", p.dimension()},
                     {"monomials", monomials},
                     {"basis_coefficients", coeffs},
                     {"delta", cell.delta}});
  }
  json out = {{"dim", k.dim},
              {"resolution", k.resolution},
              {"rank_bound", k.rank_bound()},
              {"cells", cells}};
  return out.dump(2) + "\n";
}

std::string spectrum_csv(const std::vector<double>& mu) {
  std::string out = "k,mu_k,(k+1)*mu_k\n";
  for (std::size_t k = 0; k < mu.size(); ++k)
    out += std::to_string(k) + "," + format_number(mu[k]) + "," +
           format_number(static_cast<double>(k + 1) * mu[k]) + "\n";
  return out;
}

std::string growth_csv(const GrowthRecord& rec) {
  std::string out = "n,q_n,fit,residual\n";
  for (std::size_t i = 0; i < rec.ns.size(); ++i)
    out += std::to_string(rec.ns[i]) + "," + format_number(rec.q[i]) + "," +
           format_number(i < rec.fitted.size() ? rec.fitted[i] : 0.0) + "," +
           format_number(i < rec.residuals.size() ? rec.residuals[i] : 0.0) + "\n";
  return out;
}

}  // namespace cwikel
