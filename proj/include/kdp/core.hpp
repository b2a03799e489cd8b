#pragma once

// Digraph, clique partition, problem instance and linkage model, plus the
// validators every solver result is checked against.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kdp/vertex_set.hpp"

namespace kdp {

struct Edge {
  Vertex tail = 0;
  Vertex head = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Simple digraph on vertices 0..n-1: no loops, no parallel edges (antiparallel
// pairs are fine). Adjacency lists are kept sorted ascending.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(int n) : n_(checked_order(n)),
                            matrix_(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0),
                            out_(static_cast<std::size_t>(n_)), in_(static_cast<std::size_t>(n_)) {}

  // Throws InvalidInstance on loops, out-of-range ids and duplicates.
  static Digraph from_edges(int n, std::span<const Edge> edges) {
    Digraph g(n);
    for (const auto& e : edges) {
      if (!g.add_edge(e.tail, e.head))
        throw InvalidInstance("duplicate edge " + std::to_string(e.tail) + " " + std::to_string(e.head));
    }
    return g;
  }

  int order() const { return n_; }
  std::size_t edge_count() const { return edge_count_; }

  bool has_edge(Vertex u, Vertex v) const {
    if (!in_range(u) || !in_range(v)) return false;
    return matrix_[index(u, v)] != 0;
  }

  std::span<const Vertex> out_neighbors(Vertex u) const { return out_.at(static_cast<std::size_t>(u)); }
  std::span<const Vertex> in_neighbors(Vertex v) const { return in_.at(static_cast<std::size_t>(v)); }

  // Lexicographically sorted edge list.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : out_[static_cast<std::size_t>(u)]) out.push_back({u, v});
    return out;
  }

  Digraph with_edge(Vertex u, Vertex v) const {
    Digraph g = *this;
    g.add_edge(u, v);
    return g;
  }

  Digraph without_edge(Vertex u, Vertex v) const {
    Digraph g = *this;
    g.remove_edge(u, v);
    return g;
  }

  VertexSet all_vertices() const {
    VertexSet s;
    for (Vertex v = 0; v < n_; ++v) s.insert(v);
    return s;
  }

  friend bool operator==(const Digraph& a, const Digraph& b) { return a.n_ == b.n_ && a.matrix_ == b.matrix_; }

 private:
  static int checked_order(int n) {
    if (n < 0) throw InvalidInstance("negative vertex count");
    return n;
  }
  bool in_range(Vertex v) const { return v >= 0 && v < n_; }
  std::size_t index(Vertex u, Vertex v) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
  }

  // false if the edge already exists
  bool add_edge(Vertex u, Vertex v) {
    if (!in_range(u) || !in_range(v))
      throw InvalidInstance("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
    if (u == v) throw InvalidInstance("loop at vertex " + std::to_string(u));
    if (matrix_[index(u, v)]) return false;
    matrix_[index(u, v)] = 1;
    auto& o = out_[static_cast<std::size_t>(u)];
    o.insert(std::lower_bound(o.begin(), o.end(), v), v);
    auto& i = in_[static_cast<std::size_t>(v)];
    i.insert(std::lower_bound(i.begin(), i.end(), u), u);
    ++edge_count_;
    return true;
  }

  void remove_edge(Vertex u, Vertex v) {
    if (!has_edge(u, v)) return;
    matrix_[index(u, v)] = 0;
    auto& o = out_[static_cast<std::size_t>(u)];
    o.erase(std::lower_bound(o.begin(), o.end(), v));
    auto& i = in_[static_cast<std::size_t>(v)];
    i.erase(std::lower_bound(i.begin(), i.end(), u));
    --edge_count_;
  }

  int n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<char> matrix_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
};

// Clique ids are 1..c; empty parts are allowed.
struct CliquePartition {
  std::vector<int> assignment;
  int c = 1;

  int clique_of(Vertex v) const { return assignment.at(static_cast<std::size_t>(v)); }

  VertexSet members(int clique) const {
    VertexSet s;
    for (std::size_t v = 0; v < assignment.size(); ++v)
      if (assignment[v] == clique) s.insert(static_cast<Vertex>(v));
    return s;
  }

  static CliquePartition single(int n) { return {std::vector<int>(static_cast<std::size_t>(n), 1), 1}; }

  friend bool operator==(const CliquePartition&, const CliquePartition&) = default;
};

struct TerminalPair {
  Vertex source = 0;
  Vertex sink = 0;
  friend bool operator==(const TerminalPair&, const TerminalPair&) = default;
};

struct ProblemInstance {
  Digraph graph;
  CliquePartition partition;
  std::vector<TerminalPair> pairs;

  int n() const { return graph.order(); }
  int k() const { return static_cast<int>(pairs.size()); }

  Vertex source(int i) const { return pairs.at(static_cast<std::size_t>(i)).source; }
  Vertex sink(int i) const { return pairs.at(static_cast<std::size_t>(i)).sink; }

  VertexSet sources() const {
    VertexSet s;
    for (const auto& p : pairs) s.insert(p.source);
    return s;
  }
  VertexSet sinks() const {
    VertexSet s;
    for (const auto& p : pairs) s.insert(p.sink);
    return s;
  }
  VertexSet terminals() const { return sources() | sinks(); }

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

struct DiPath {
  std::vector<Vertex> vertices;

  Vertex front() const { return vertices.front(); }
  Vertex back() const { return vertices.back(); }
  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  VertexSet vertex_set() const { return VertexSet::from(vertices); }

  friend bool operator==(const DiPath&, const DiPath&) = default;
  friend auto operator<=>(const DiPath&, const DiPath&) = default;
};

// Member i (0-based) joins pairs[i].
struct Linkage {
  std::vector<DiPath> members;

  int k() const { return static_cast<int>(members.size()); }

  VertexSet vertex_set() const {
    VertexSet s;
    for (const auto& p : members) s |= p.vertex_set();
    return s;
  }
  std::size_t total_vertices() const {
    std::size_t n = 0;
    for (const auto& p : members) n += p.vertices.size();
    return n;
  }

  friend bool operator==(const Linkage&, const Linkage&) = default;
  friend auto operator<=>(const Linkage&, const Linkage&) = default;
};

// ---------------------------------------------------------------------------
// Validation

struct PartitionViolation {
  Vertex u = 0;
  Vertex v = 0;
  int clique = 0;
  friend bool operator==(const PartitionViolation&, const PartitionViolation&) = default;
};

// Reports the lexicographically first same-part pair with no edge either way.
// Throws InvalidInstance if the assignment does not cover the digraph or uses
// an id outside 1..c.
inline std::optional<PartitionViolation> validate_clique_partition(const Digraph& g, const CliquePartition& p) {
  if (p.c < 1) throw InvalidInstance("clique count must be positive");
  if (static_cast<int>(p.assignment.size()) != g.order())
    throw InvalidInstance("clique assignment does not cover every vertex");
  for (std::size_t v = 0; v < p.assignment.size(); ++v) {
    if (p.assignment[v] < 1 || p.assignment[v] > p.c)
      throw InvalidInstance("clique id " + std::to_string(p.assignment[v]) + " of vertex " + std::to_string(v) +
                            " outside 1.." + std::to_string(p.c));
  }
  for (Vertex u = 0; u < g.order(); ++u) {
    for (Vertex v = u + 1; v < g.order(); ++v) {
      if (p.clique_of(u) == p.clique_of(v) && !g.has_edge(u, v) && !g.has_edge(v, u))
        return PartitionViolation{u, v, p.clique_of(u)};
    }
  }
  return std::nullopt;
}

// Full structural check of an instance; throws InvalidInstance.
inline void validate_instance(const ProblemInstance& inst) {
  if (inst.k() < 1) throw InvalidInstance("instance needs at least one terminal pair");
  if (auto bad = validate_clique_partition(inst.graph, inst.partition)) {
    throw InvalidInstance("clique " + std::to_string(bad->clique) + " is not semicomplete: no edge between " +
                          std::to_string(bad->u) + " and " + std::to_string(bad->v));
  }
  VertexSet seen;
  for (const auto& pr : inst.pairs) {
    for (Vertex t : {pr.source, pr.sink}) {
      if (t < 0 || t >= inst.n()) throw InvalidInstance("terminal " + std::to_string(t) + " out of range");
      if (seen.contains(t)) throw InvalidInstance("terminal " + std::to_string(t) + " repeated");
      seen.insert(t);
    }
  }
}

enum class DefectKind { member_count, empty_path, bad_edge, repeat_vertex, overlap, endpoint_mismatch };

inline const char* to_string(DefectKind k) {
  switch (k) {
    case DefectKind::member_count: return "member-count";
    case DefectKind::empty_path: return "empty-path";
    case DefectKind::bad_edge: return "bad-edge";
    case DefectKind::repeat_vertex: return "repeat-vertex";
    case DefectKind::overlap: return "overlap";
    case DefectKind::endpoint_mismatch: return "endpoint-mismatch";
  }
  return "?";
}

struct LinkageDefect {
  DefectKind kind;
  int member = 0;  // 0-based
  Vertex vertex = -1;
  std::string describe() const {
    return std::string(to_string(kind)) + " in member " + std::to_string(member + 1) +
           (vertex >= 0 ? " at vertex " + std::to_string(vertex) : std::string());
  }
};

// Checks a path against the digraph only (edges and repeats).
inline std::optional<LinkageDefect> validate_path(const Digraph& g, const DiPath& p, int member = 0) {
  if (p.vertices.empty()) return LinkageDefect{DefectKind::empty_path, member, -1};
  VertexSet seen;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    Vertex v = p.vertices[i];
    if (v < 0 || v >= g.order()) return LinkageDefect{DefectKind::bad_edge, member, v};
    if (seen.contains(v)) return LinkageDefect{DefectKind::repeat_vertex, member, v};
    seen.insert(v);
    if (i > 0 && !g.has_edge(p.vertices[i - 1], v)) return LinkageDefect{DefectKind::bad_edge, member, p.vertices[i - 1]};
  }
  return std::nullopt;
}

// First failure in member order: path defects, then overlap with an earlier
// member, then endpoints.
inline std::optional<LinkageDefect> validate_linkage(const ProblemInstance& inst, const Linkage& l) {
  if (l.k() != inst.k()) return LinkageDefect{DefectKind::member_count, 0, -1};
  VertexSet used;
  for (int i = 0; i < l.k(); ++i) {
    const auto& p = l.members[static_cast<std::size_t>(i)];
    if (auto d = validate_path(inst.graph, p, i)) return d;
    for (Vertex v : p.vertices)
      if (used.contains(v)) return LinkageDefect{DefectKind::overlap, i, v};
    used |= p.vertex_set();
    if (p.front() != inst.source(i)) return LinkageDefect{DefectKind::endpoint_mismatch, i, p.front()};
    if (p.back() != inst.sink(i)) return LinkageDefect{DefectKind::endpoint_mismatch, i, p.back()};
  }
  return std::nullopt;
}

// No forward shortcut: no edge vertices[a] -> vertices[b] with b > a + 1.
inline bool is_minimal_path(const Digraph& g, const DiPath& p) {
  const auto& vs = p.vertices;
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 2; b < vs.size(); ++b)
      if (g.has_edge(vs[a], vs[b])) return false;
  return true;
}

// Position of v in path, or -1.
inline int position_in(std::span<const Vertex> path, Vertex v) {
  auto it = std::find(path.begin(), path.end(), v);
  return it == path.end() ? -1 : static_cast<int>(it - path.begin());
}

}  // namespace kdp
