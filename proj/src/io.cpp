#include "volta/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "volta/error.hpp"

namespace volta::io {

namespace fs = std::filesystem;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename onto " + path.string() + ": " + ec.message());
}

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

// Reads the next non-empty, non-comment line.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
}

struct Header {
  std::size_t n = 0;
  std::size_t m = 0;
};

Header read_header(std::istream& in, std::size_t& line_no) {
  std::string line;
  if (!next_line(in, line, line_no)) parse_error(line_no, "missing 'n m' header");
  std::istringstream fields(line);
  long long n = -1;
  long long m = -1;
  std::string extra;
  if (!(fields >> n >> m) || (fields >> extra) || n < 1 || m < 0) {
    parse_error(line_no, "expected 'n m' with n >= 1, m >= 0");
  }
  return {static_cast<std::size_t>(n), static_cast<std::size_t>(m)};
}

Vertex to_internal(long long label, std::size_t n, std::size_t line_no) {
  if (label < 1 || static_cast<std::size_t>(label) > n) {
    parse_error(line_no, "vertex label " + std::to_string(label) + " outside 1.." +
                             std::to_string(n));
  }
  return static_cast<Vertex>(label - 1);
}

template <class RowFn>
void read_rows(std::istream& in, std::size_t m, std::size_t& line_no, RowFn&& row) {
  std::string line;
  for (std::size_t k = 0; k < m; ++k) {
    if (!next_line(in, line, line_no)) {
      parse_error(line_no, "expected " + std::to_string(m) + " edge lines, found " +
                               std::to_string(k));
    }
    row(line);
  }
  if (next_line(in, line, line_no)) parse_error(line_no, "trailing content after edge list");
}

Graph build_graph(std::size_t n, std::vector<Edge> edges, std::size_t line_no) {
  try {
    return Graph(n, std::move(edges));
  } catch (const Error& e) {
    parse_error(line_no, std::string("graph is not simple: ") + e.what());
  }
}

}  // namespace

Graph read_graph(std::istream& in) {
  std::size_t line_no = 0;
  const Header h = read_header(in, line_no);
  std::vector<Edge> edges;
  edges.reserve(h.m);
  read_rows(in, h.m, line_no, [&](const std::string& line) {
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) parse_error(line_no, "expected 'i j'");
    edges.push_back({to_internal(a, h.n, line_no), to_internal(b, h.n, line_no)});
  });
  return build_graph(h.n, std::move(edges), line_no);
}

Graph read_graph(const fs::path& path) {
  auto in = open_input(path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) { out << format_graph(g); }

std::string format_graph(const Graph& g) {
  std::string text = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (const auto& e : g.edges()) {
    text += std::to_string(e.u + 1) + " " + std::to_string(e.v + 1) + "\n";
  }
  return text;
}

Network read_network(std::istream& in) {
  std::size_t line_no = 0;
  const Header h = read_header(in, line_no);
  std::vector<std::pair<Edge, double>> rows;
  rows.reserve(h.m);
  read_rows(in, h.m, line_no, [&](const std::string& line) {
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    std::string c_text;
    std::string extra;
    if (!(fields >> a >> b >> c_text) || (fields >> extra)) {
      parse_error(line_no, "expected 'i j c_ij'");
    }
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(c_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != c_text.size()) parse_error(line_no, "bad conductance '" + c_text + "'");
    if (!(c > 0.0) || !std::isfinite(c)) parse_error(line_no, "conductance must be positive");
    rows.push_back({make_edge(to_internal(a, h.n, line_no), to_internal(b, h.n, line_no)), c});
  });
  std::vector<Edge> edges;
  edges.reserve(rows.size());
  for (const auto& r : rows) edges.push_back(r.first);
  Graph g = build_graph(h.n, edges, line_no);
  std::vector<double> c(g.edge_count());
  for (const auto& r : rows) c[*g.edge_index(r.first.u, r.first.v)] = r.second;
  try {
    return Network(std::move(g), std::move(c));
  } catch (const Error& e) {
    parse_error(line_no, e.what());
  }
}

Network read_network(const fs::path& path) {
  auto in = open_input(path);
  return read_network(in);
}

void write_network(std::ostream& out, const Network& net) { out << format_network(net); }

std::string format_network(const Network& net) {
  const Graph& g = net.graph();
  std::string text = std::to_string(g.vertex_count()) + " " + std::to_string(g.edge_count()) + "\n";
  for (std::size_t id = 0; id < g.edge_count(); ++id) {
    const auto& e = g.edge(id);
    text += std::to_string(e.u + 1) + " " + std::to_string(e.v + 1) + " " +
            format_double(net.conductance(id)) + "\n";
  }
  return text;
}

namespace {

double parse_number(std::string_view text, const char* what) {
  std::string s(text);
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < s.size() && (s[used] == ' ' || s[used] == '\t')) ++used;
  if (s.empty() || used != s.size()) {
    throw Error(ErrorCode::kParse, std::string("bad ") + what + " '" + s + "'");
  }
  return x;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

BoundaryCondition parse_boundary(std::string_view text, std::size_t vertex_count) {
  text = trim(text);
  if (text.empty()) throw Error(ErrorCode::kParse, "empty boundary specification");
  std::vector<Vertex> vertices;
  std::vector<double> potentials;
  constexpr std::string_view kSpread = "spread:";
  if (text.substr(0, kSpread.size()) == kSpread) {
    const auto parts = split(text.substr(kSpread.size()), ',');
    const std::size_t count = parts.size();
    if (count > vertex_count) throw Error(ErrorCode::kArgument, "more boundary vertices than n");
    for (std::size_t k = 0; k < count; ++k) {
      vertices.push_back(static_cast<Vertex>(k * vertex_count / count));
      potentials.push_back(parse_number(trim(parts[k]), "boundary potential"));
    }
  } else {
    for (auto item : split(text, ',')) {
      item = trim(item);
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) {
        throw Error(ErrorCode::kParse, "boundary entry '" + std::string(item) +
                                           "' is not 'vertex:potential'");
      }
      const double label = parse_number(trim(item.substr(0, colon)), "boundary vertex");
      if (label != std::floor(label) || label < 1 ||
          label > static_cast<double>(vertex_count)) {
        throw Error(ErrorCode::kIndex, "boundary vertex '" + std::string(item.substr(0, colon)) +
                                           "' outside 1.." + std::to_string(vertex_count));
      }
      vertices.push_back(static_cast<Vertex>(label) - 1);
      potentials.push_back(parse_number(trim(item.substr(colon + 1)), "boundary potential"));
    }
  }
  return BoundaryCondition(std::move(vertices), std::move(potentials));
}

std::string format_boundary(const BoundaryCondition& bc) {
  std::string text;
  for (std::size_t k = 0; k < bc.size(); ++k) {
    if (k) text += ",";
    text += std::to_string(bc.vertex(k) + 1) + ":" + format_double(bc.potential(k));
  }
  return text;
}

std::string format_field_csv(const PotentialField& field) {
  std::string text = "vertex,potential,defined\n";
  for (std::size_t v = 0; v < field.vertex_count(); ++v) {
    text += std::to_string(v + 1) + ",";
    if (field.defined[v]) text += format_double(field.values[v]);
    text += field.defined[v] ? ",1\n" : ",0\n";
  }
  return text;
}

PotentialField read_field_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no) || line != "vertex,potential,defined") {
    parse_error(line_no, "expected header 'vertex,potential,defined'");
  }
  PotentialField field;
  while (next_line(in, line, line_no)) {
    const auto parts = split(line, ',');
    if (parts.size() != 3) parse_error(line_no, "expected 3 columns");
    const double label = parse_number(parts[0], "vertex");
    if (label != static_cast<double>(field.values.size() + 1)) {
      parse_error(line_no, "vertices must be listed in order 1..n");
    }
    const bool defined = parts[2] == "1";
    if (!defined && parts[2] != "0") parse_error(line_no, "defined must be 0 or 1");
    field.defined.push_back(defined);
    field.values.push_back(defined ? parse_number(parts[1], "potential")
                                   : std::numeric_limits<double>::quiet_NaN());
  }
  return field;
}

PotentialField read_field_csv(const fs::path& path) {
  auto in = open_input(path);
  return read_field_csv(in);
}

std::string format_estimates_csv(const HittingEstimate& est, const BoundaryCondition& bc,
                                 bool only_estimated) {
  std::string text = "vertex,estimate,stderr,walks,estimated";
  for (Vertex x : bc.vertices()) text += ",hit_" + std::to_string(x + 1);
  text += "\n";
  for (Vertex v = 0; v < est.vertex_count; ++v) {
    if (only_estimated && !est.estimated[v]) continue;
    text += std::to_string(v + 1) + ",";
    if (est.estimated[v]) {
      text += format_double(est.potential[v]) + "," + format_double(est.potential_stderr[v]);
    } else {
      text += ",";
    }
    text += "," + std::to_string(est.walks[v]) + (est.estimated[v] ? ",1" : ",0");
    for (std::size_t k = 0; k < est.boundary_count; ++k) {
      text += ",";
      if (est.estimated[v]) text += format_double(est.probability(v, k));
    }
    text += "\n";
  }
  return text;
}

namespace {

nlohmann::json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

std::vector<std::size_t> one_based(std::span<const Vertex> vs) {
  std::vector<std::size_t> out;
  for (Vertex v : vs) out.push_back(static_cast<std::size_t>(v) + 1);
  return out;
}

nlohmann::json property_json(const PropertyResult& r) {
  nlohmann::json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["detail"] = r.detail;
  nlohmann::json witness = nlohmann::json::object();
  if (!r.cycles.empty()) {
    auto cycles = nlohmann::json::array();
    for (const auto& c : r.cycles) cycles.push_back(one_based(c));
    witness["cycles"] = cycles;
  }
  if (r.missing_cycle_length) witness["missing_cycle_length"] = *r.missing_cycle_length;
  if (r.expansion) {
    witness["subset"] = one_based(r.expansion->subset);
    witness["excluded"] = one_based(r.expansion->excluded);
    witness["cut"] = r.expansion->cut;
    witness["volume"] = r.expansion->volume;
    witness["ratio"] = r.expansion->ratio;
  }
  if (r.vertex) witness["vertex"] = static_cast<std::size_t>(*r.vertex) + 1;
  if (r.vertex_degree) witness["degree"] = *r.vertex_degree;
  j["witness"] = witness;
  return j;
}

}  // namespace

nlohmann::json to_json(const ConcentrationStats& s) {
  return {{"v_bar_c", s.v_bar_c},
          {"max_dev", s.max_dev},
          {"mean_dev", s.mean_dev},
          {"std_dev", s.std_dev},
          {"interior_mean", s.interior_mean},
          {"interior_median", s.interior_median},
          {"interior_min", s.interior_min},
          {"interior_max", s.interior_max},
          {"interior_count", s.interior_count},
          {"undefined_count", s.undefined_count},
          {"histogram", {{"bins", s.histogram.size()}, {"range", {0.0, 1.0}}, {"counts", s.histogram}}}};
}

nlohmann::json to_json(const MixingReport& r) {
  return {{"t0", r.t0},
          {"horizon", r.horizon},
          {"start", static_cast<std::size_t>(r.start) + 1},
          {"samples", r.samples},
          {"applicable", r.applicable},
          {"reason", r.reason},
          {"tv_distance", number_or_null(r.tv_distance)},
          {"escape_prob", r.escape_prob}};
}

nlohmann::json to_json(const PropernessReport& r) {
  const auto& p = r.parameters;
  return {{"P1", property_json(r.p1)},
          {"P2", property_json(r.p2)},
          {"P3", property_json(r.p3)},
          {"P4", property_json(r.p4)},
          {"P5", property_json(r.p5)},
          {"parameters",
           {{"n", p.vertex_count},
            {"short_cycle_cap", p.short_cycle_cap},
            {"cycle_separation", p.cycle_separation},
            {"C1", p.c1},
            {"C2", p.c2},
            {"expansion_threshold", p.expansion_threshold},
            {"exhaustive_cap", p.exhaustive_cap},
            {"samples", p.samples},
            {"seed", p.seed},
            {"subsets_examined", p.subsets_examined},
            {"alpha", p.alpha},
            {"delta", p.delta},
            {"C", p.alpha},
            {"degree_lower", p.degree_lower},
            {"degree_upper", p.degree_upper}}}};
}

}  // namespace volta::io
