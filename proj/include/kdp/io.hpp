#pragma once

// Line-based instance format:
//
//   instance <n> <k> <c>
//   cliques <g_0> ... <g_{n-1}>
//   edges <m>
//   <u> <v>            (m lines)
//   pairs
//   <s_i> <t_i>        (k lines)
//   end
//
// Lines starting with '#' are comments. An optional witness section may follow
// the instance block (used by counterexample dumps and solver reports):
//
//   witness
//   member <v_0> <v_1> ...     (one line per linkage member, in order)
//   set <name> <v> ...
//   note <text>
//   end

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kdp/core.hpp"

namespace kdp {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, semantic };
  ParseError(Kind kind, int line, const std::string& msg)
      : std::runtime_error((kind == Kind::syntax ? "syntax error" : "semantic error") + std::string(" at line ") +
                           std::to_string(line) + ": " + msg),
        kind_(kind),
        line_(line) {}
  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

struct Witness {
  std::optional<Linkage> linkage;
  std::map<std::string, VertexSet> sets;
  std::vector<std::string> notes;
};

namespace detail {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
  std::string raw;
};

inline std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos || raw[first] == '#') continue;
    Line line{number, {}, raw};
    std::istringstream ls(raw);
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    out.push_back(std::move(line));
  }
  return out;
}

inline long long to_int(const Line& line, std::size_t idx) {
  if (idx >= line.tokens.size()) throw ParseError(ParseError::Kind::syntax, line.number, "missing field");
  const auto& tok = line.tokens[idx];
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(ParseError::Kind::syntax, line.number, "expected integer, got '" + tok + "'");
  return value;
}

inline void expect_fields(const Line& line, std::size_t n) {
  if (line.tokens.size() != n)
    throw ParseError(ParseError::Kind::syntax, line.number,
                     "expected " + std::to_string(n) + " fields, got " + std::to_string(line.tokens.size()));
}

inline void expect_keyword(const Line* line, const char* kw, int last_line) {
  if (!line) throw ParseError(ParseError::Kind::syntax, last_line, std::string("unexpected end of input, expected '") + kw + "'");
  if (line->tokens.empty() || line->tokens[0] != kw)
    throw ParseError(ParseError::Kind::syntax, line->number, std::string("expected '") + kw + "'");
}

class Cursor {
 public:
  explicit Cursor(std::vector<Line> lines) : lines_(std::move(lines)) {}
  const Line* next() { return pos_ < lines_.size() ? &lines_[pos_++] : nullptr; }
  bool done() const { return pos_ >= lines_.size(); }
  int last_line() const { return lines_.empty() ? 0 : lines_.back().number; }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

inline ProblemInstance read_instance(Cursor& cur) {
  const int last = cur.last_line();
  const Line* header = cur.next();
  expect_keyword(header, "instance", last);
  expect_fields(*header, 4);
  long long n = to_int(*header, 1), k = to_int(*header, 2), c = to_int(*header, 3);
  if (n < 0 || n > 1'000'000) throw ParseError(ParseError::Kind::semantic, header->number, "bad vertex count");
  if (k < 1) throw ParseError(ParseError::Kind::semantic, header->number, "k must be at least 1");
  if (c < 1) throw ParseError(ParseError::Kind::semantic, header->number, "c must be at least 1");

  const Line* cl = cur.next();
  expect_keyword(cl, "cliques", last);
  expect_fields(*cl, static_cast<std::size_t>(n) + 1);
  CliquePartition part{{}, static_cast<int>(c)};
  for (long long v = 0; v < n; ++v) {
    long long g = to_int(*cl, static_cast<std::size_t>(v) + 1);
    if (g < 1 || g > c)
      throw ParseError(ParseError::Kind::semantic, cl->number, "clique id " + std::to_string(g) + " outside 1.." + std::to_string(c));
    part.assignment.push_back(static_cast<int>(g));
  }

  const Line* el = cur.next();
  expect_keyword(el, "edges", last);
  expect_fields(*el, 2);
  long long m = to_int(*el, 1);
  if (m < 0) throw ParseError(ParseError::Kind::semantic, el->number, "negative edge count");
  std::vector<Edge> edges;
  std::set<Edge> seen_edges;
  for (long long i = 0; i < m; ++i) {
    const Line* e = cur.next();
    if (!e) throw ParseError(ParseError::Kind::syntax, last, "unexpected end of input inside edge list");
    expect_fields(*e, 2);
    long long u = to_int(*e, 0), v = to_int(*e, 1);
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ParseError(ParseError::Kind::semantic, e->number, "dangling vertex id in edge " + std::to_string(u) + " " + std::to_string(v));
    if (u == v) throw ParseError(ParseError::Kind::semantic, e->number, "loop at vertex " + std::to_string(u));
    Edge edge{static_cast<Vertex>(u), static_cast<Vertex>(v)};
    if (!seen_edges.insert(edge).second)
      throw ParseError(ParseError::Kind::semantic, e->number, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    edges.push_back(edge);
  }
  Digraph g = Digraph::from_edges(static_cast<int>(n), edges);

  const Line* pl = cur.next();
  expect_keyword(pl, "pairs", last);
  expect_fields(*pl, 1);
  std::vector<TerminalPair> pairs;
  VertexSet seen;
  for (long long i = 0; i < k; ++i) {
    const Line* p = cur.next();
    if (!p) throw ParseError(ParseError::Kind::syntax, last, "unexpected end of input inside pair list");
    expect_fields(*p, 2);
    long long s = to_int(*p, 0), t = to_int(*p, 1);
    for (long long x : {s, t}) {
      if (x < 0 || x >= n) throw ParseError(ParseError::Kind::semantic, p->number, "dangling terminal " + std::to_string(x));
      if (seen.contains(static_cast<Vertex>(x)))
        throw ParseError(ParseError::Kind::semantic, p->number, "terminal " + std::to_string(x) + " repeated");
      seen.insert(static_cast<Vertex>(x));
    }
    pairs.push_back({static_cast<Vertex>(s), static_cast<Vertex>(t)});
  }
  const Line* end = cur.next();
  expect_keyword(end, "end", last);
  expect_fields(*end, 1);

  if (auto bad = validate_clique_partition(g, part)) {
    throw ParseError(ParseError::Kind::semantic, cl->number,
                     "clique " + std::to_string(bad->clique) + " is not semicomplete: no edge between " +
                         std::to_string(bad->u) + " and " + std::to_string(bad->v));
  }
  return ProblemInstance{std::move(g), std::move(part), std::move(pairs)};
}

inline std::vector<Vertex> read_vertices(const Line& line, std::size_t from) {
  std::vector<Vertex> out;
  for (std::size_t i = from; i < line.tokens.size(); ++i) out.push_back(static_cast<Vertex>(to_int(line, i)));
  return out;
}

}  // namespace detail

// Throws ParseError. Trailing content after the instance block is ignored
// (see parse_witness).
inline ProblemInstance parse_instance(std::string_view text) {
  detail::Cursor cur(detail::tokenize(text));
  return detail::read_instance(cur);
}

inline std::string serialize_instance(const ProblemInstance& inst) {
  std::ostringstream out;
  out << "instance " << inst.n() << ' ' << inst.k() << ' ' << inst.partition.c << '\n';
  out << "cliques";
  for (int g : inst.partition.assignment) out << ' ' << g;
  out << '\n';
  auto edges = inst.graph.edges();
  out << "edges " << edges.size() << '\n';
  for (const auto& e : edges) out << e.tail << ' ' << e.head << '\n';
  out << "pairs\n";
  for (const auto& p : inst.pairs) out << p.source << ' ' << p.sink << '\n';
  out << "end\n";
  return out.str();
}

inline std::string serialize_witness(const Witness& w) {
  std::ostringstream out;
  out << "witness\n";
  if (w.linkage) {
    for (const auto& m : w.linkage->members) {
      out << "member";
      for (Vertex v : m.vertices) out << ' ' << v;
      out << '\n';
    }
  }
  for (const auto& [name, set] : w.sets) {
    out << "set " << name;
    for (Vertex v : set.elements()) out << ' ' << v;
    out << '\n';
  }
  for (const auto& note : w.notes) out << "note " << note << '\n';
  out << "end\n";
  return out.str();
}

// Parses the witness section following the instance block, if any.
inline std::optional<Witness> parse_witness(std::string_view text) {
  detail::Cursor cur(detail::tokenize(text));
  detail::read_instance(cur);
  const detail::Line* line = nullptr;
  while ((line = cur.next())) {
    if (!line->tokens.empty() && line->tokens[0] == "witness") break;
  }
  if (!line) return std::nullopt;
  Witness w;
  while ((line = cur.next())) {
    const auto& kw = line->tokens.at(0);
    if (kw == "end") return w;
    if (kw == "member") {
      if (!w.linkage) w.linkage = Linkage{};
      w.linkage->members.push_back(DiPath{detail::read_vertices(*line, 1)});
    } else if (kw == "set") {
      if (line->tokens.size() < 2) throw ParseError(ParseError::Kind::syntax, line->number, "set needs a name");
      w.sets[line->tokens[1]] = VertexSet::from(detail::read_vertices(*line, 2));
    } else if (kw == "note") {
      auto pos = line->raw.find("note");
      w.notes.push_back(line->raw.substr(pos + 5 <= line->raw.size() ? pos + 5 : line->raw.size()));
    } else {
      throw ParseError(ParseError::Kind::syntax, line->number, "unknown witness line '" + kw + "'");
    }
  }
  throw ParseError(ParseError::Kind::syntax, cur.last_line(), "unterminated witness section");
}

}  // namespace kdp
