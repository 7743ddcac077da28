#include "match_arena/instance_io.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace match_arena {

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("instance line " + std::to_string(line_no) + ": " + what);
}

VertexId parse_vertex(std::istringstream& tokens, std::size_t line_no) {
  std::string token;
  tokens >> token;
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
    parse_error(line_no, "expected a vertex id, got '" + token + "'");
  unsigned long long value = std::stoull(token);
  if (value > std::numeric_limits<VertexId>::max()) parse_error(line_no, "vertex id too large");
  return static_cast<VertexId>(value);
}

}  // namespace

AnyInstance read_instance(std::istream& in) {
  enum class Mode { Unset, Vertex, Edge };
  Mode mode = Mode::Unset;
  std::optional<std::size_t> n;
  std::vector<std::vector<VertexId>> arrivals;
  std::vector<Edge> edges;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string keyword;
    if (!(tokens >> keyword)) continue;

    if (keyword == "mode") {
      std::string value;
      tokens >> value;
      if (mode != Mode::Unset) parse_error(line_no, "mode given twice");
      if (value == "vertex") mode = Mode::Vertex;
      else if (value == "edge") mode = Mode::Edge;
      else parse_error(line_no, "unknown mode '" + value + "'");
    } else if (keyword == "n") {
      if (mode == Mode::Unset) parse_error(line_no, "'n' before 'mode'");
      if (n) parse_error(line_no, "'n' given twice");
      n = parse_vertex(tokens, line_no);
    } else if (keyword == "arrive") {
      if (mode != Mode::Vertex || !n) parse_error(line_no, "'arrive' outside vertex mode");
      VertexId v = parse_vertex(tokens, line_no);
      if (v != arrivals.size()) parse_error(line_no, "arrivals must be listed in order");
      if (v >= *n) parse_error(line_no, "vertex id exceeds n");
      std::vector<VertexId> nbrs;
      while (tokens >> std::ws, !tokens.eof()) nbrs.push_back(parse_vertex(tokens, line_no));
      arrivals.push_back(std::move(nbrs));
      continue;
    } else if (keyword == "edge") {
      if (mode != Mode::Edge || !n) parse_error(line_no, "'edge' outside edge mode");
      VertexId a = parse_vertex(tokens, line_no);
      VertexId b = parse_vertex(tokens, line_no);
      edges.emplace_back(a, b);
    } else {
      parse_error(line_no, "unknown keyword '" + keyword + "'");
    }
    std::string trailing;
    if (tokens >> trailing) parse_error(line_no, "trailing token '" + trailing + "'");
  }

  if (mode == Mode::Unset || !n) throw std::runtime_error("instance: missing 'mode' or 'n'");
  try {
    if (mode == Mode::Vertex) {
      if (arrivals.size() != *n)
        throw std::runtime_error("instance: expected " + std::to_string(*n) + " arrivals, got " +
                                 std::to_string(arrivals.size()));
      return ArrivalInstance(std::move(arrivals));
    }
    return EdgeArrivalInstance(*n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("instance: ") + e.what());
  }
}

AnyInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const ArrivalInstance& inst) {
  out << "mode vertex\n"
      << "n " << inst.size() << '\n';
  for (VertexId v = 0; v < inst.size(); ++v) {
    out << "arrive " << v;
    for (VertexId u : inst.earlier_neighbors(v)) out << ' ' << u;
    out << '\n';
  }
}

void write_instance(std::ostream& out, const EdgeArrivalInstance& inst) {
  out << "mode edge\n"
      << "n " << inst.num_vertices() << '\n';
  for (const Edge& e : inst.edges()) out << "edge " << e.u << ' ' << e.v << '\n';
}

void write_instance(std::ostream& out, const AnyInstance& inst) {
  std::visit([&](const auto& concrete) { write_instance(out, concrete); }, inst);
}

}  // namespace match_arena
