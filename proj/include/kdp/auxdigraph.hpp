#pragma once

// The auxiliary digraph H. Vertices are pairs (Y, D) of a coloured-edge set
// and a history set; S0 -> T0 reachability in H decides the instance. Two
// search modes: explicit (D ranges over the enumerated restricted sets) and
// powerset (D ranges over all subsets, each step adds exactly the middle
// vertex).

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "kdp/core.hpp"
#include "kdp/params.hpp"
#include "kdp/restricted.hpp"
#include "kdp/structure.hpp"

namespace kdp {

struct ColouredEdge {
  Vertex tail = 0;
  Vertex head = 0;
  int colour = 1;  // 1..k
  friend auto operator<=>(const ColouredEdge&, const ColouredEdge&) = default;
};

// Kept sorted and duplicate-free.
class ColouredEdgeSet {
 public:
  ColouredEdgeSet() = default;
  ColouredEdgeSet(std::initializer_list<ColouredEdge> es) : edges_(es) { normalize(); }
  explicit ColouredEdgeSet(std::vector<ColouredEdge> es) : edges_(std::move(es)) { normalize(); }

  const std::vector<ColouredEdge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  bool contains(const ColouredEdge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }
  void insert(const ColouredEdge& e) {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) edges_.insert(it, e);
  }
  void erase(const ColouredEdge& e) {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it != edges_.end() && *it == e) edges_.erase(it);
  }
  std::optional<ColouredEdge> with_head(Vertex v) const {
    for (const auto& e : edges_)
      if (e.head == v) return e;
    return std::nullopt;
  }
  std::optional<ColouredEdge> with_tail(Vertex v) const {
    for (const auto& e : edges_)
      if (e.tail == v) return e;
    return std::nullopt;
  }

  friend auto operator<=>(const ColouredEdgeSet&, const ColouredEdgeSet&) = default;
  friend bool operator==(const ColouredEdgeSet&, const ColouredEdgeSet&) = default;

 private:
  void normalize() {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }
  std::vector<ColouredEdge> edges_;
};

// Clauses of the edge-family definition, plus the well-formedness of each
// coloured edge (a real edge, colour in 1..k).
enum class EdgeFamilyClause {
  not_an_edge,
  colour_range,
  cardinality,
  shared_head,
  shared_tail,
  mixed_colour,
  terminal_direction,
  terminal_colour,
};

inline const char* to_string(EdgeFamilyClause c) {
  switch (c) {
    case EdgeFamilyClause::not_an_edge: return "not-an-edge";
    case EdgeFamilyClause::colour_range: return "colour-range";
    case EdgeFamilyClause::cardinality: return "cardinality";
    case EdgeFamilyClause::shared_head: return "same-head";
    case EdgeFamilyClause::shared_tail: return "same-tail";
    case EdgeFamilyClause::mixed_colour: return "shared-end-colour";
    case EdgeFamilyClause::terminal_direction: return "terminal-direction";
    case EdgeFamilyClause::terminal_colour: return "terminal-colour";
  }
  return "?";
}

inline std::optional<EdgeFamilyClause> check_edge_family(const ColouredEdgeSet& y, const ProblemInstance& inst,
                                                         const Parameters& params) {
  const auto& es = y.edges();
  for (const auto& e : es) {
    if (e.tail < 0 || e.tail >= inst.n() || e.head < 0 || e.head >= inst.n() || !inst.graph.has_edge(e.tail, e.head))
      return EdgeFamilyClause::not_an_edge;
    if (e.colour < 1 || e.colour > inst.k()) return EdgeFamilyClause::colour_range;
  }
  if (static_cast<std::int64_t>(es.size()) > params.K) return EdgeFamilyClause::cardinality;
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      if (es[i].head == es[j].head) return EdgeFamilyClause::shared_head;
      if (es[i].tail == es[j].tail) return EdgeFamilyClause::shared_tail;
      bool share = es[i].head == es[j].tail || es[i].tail == es[j].head;
      if (share && es[i].colour != es[j].colour) return EdgeFamilyClause::mixed_colour;
    }
  for (const auto& e : es) {
    for (int i = 0; i < inst.k(); ++i) {
      if (e.head == inst.source(i) || e.tail == inst.sink(i)) return EdgeFamilyClause::terminal_direction;
    }
  }
  for (const auto& e : es) {
    for (int i = 0; i < inst.k(); ++i) {
      if ((e.tail == inst.source(i) || e.head == inst.sink(i)) && e.colour != i + 1)
        return EdgeFamilyClause::terminal_colour;
    }
  }
  return std::nullopt;
}

inline bool is_edge_family(const ColouredEdgeSet& y, const ProblemInstance& inst, const Parameters& params) {
  return !check_edge_family(y, inst, params);
}

struct HVertex {
  ColouredEdgeSet y;
  VertexSet d;
  friend auto operator<=>(const HVertex&, const HVertex&) = default;
  friend bool operator==(const HVertex&, const HVertex&) = default;
};

struct HVertexHash {
  std::size_t operator()(const HVertex& hv) const {
    std::size_t h = std::hash<VertexSet>{}(hv.d);
    for (const auto& e : hv.y.edges()) {
      std::uint64_t x = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.tail)) << 40) ^
                        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.head)) << 16) ^
                        static_cast<std::uint64_t>(e.colour);
      h ^= std::hash<std::uint64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Every coloured edge of Y has exactly one end in D.
inline bool one_end_in(const ColouredEdgeSet& y, const VertexSet& d) {
  return std::all_of(y.edges().begin(), y.edges().end(),
                     [&](const ColouredEdge& e) { return d.contains(e.tail) != d.contains(e.head); });
}

inline bool h_adjacent(const HVertex& from, const HVertex& to) {
  if (from == to || !from.d.is_subset_of(to.d)) return false;
  std::vector<ColouredEdge> diff;
  std::set_symmetric_difference(from.y.edges().begin(), from.y.edges().end(), to.y.edges().begin(), to.y.edges().end(),
                                std::back_inserter(diff));
  if (diff.size() != 2 || diff[0].colour != diff[1].colour) return false;
  for (int flip = 0; flip < 2; ++flip) {
    const auto& e1 = diff[static_cast<std::size_t>(flip)];
    const auto& e2 = diff[static_cast<std::size_t>(1 - flip)];
    if (e1.head != e2.tail || e1.tail == e2.head) continue;
    const Vertex mid = e1.head;
    if (to.d.contains(mid) && !from.d.contains(mid)) return true;
  }
  return false;
}

struct TerminalMembership {
  bool s0 = false;
  bool t0 = false;
};

inline TerminalMembership s0_t0_membership(const HVertex& hv, const ProblemInstance& inst) {
  TerminalMembership m;
  if (static_cast<int>(hv.y.size()) != inst.k()) return m;
  const VertexSet sources = inst.sources();
  const VertexSet sinks = inst.sinks();
  const auto& es = hv.y.edges();
  m.s0 = std::all_of(es.begin(), es.end(), [&](const ColouredEdge& e) { return sources.contains(e.tail); });
  m.t0 = std::all_of(es.begin(), es.end(), [&](const ColouredEdge& e) { return sinks.contains(e.head); });
  return m;
}

enum class SearchMode { explicit_sets, powerset };

inline const char* to_string(SearchMode m) { return m == SearchMode::powerset ? "powerset" : "explicit"; }

struct SearchBudget {
  std::uint64_t max_states = 5'000'000;  // 0 = unlimited
  double timeout_s = 0;                  // 0 = unlimited
  std::uint64_t restricted_cap = 50'000'000;
};

struct HPath {
  std::vector<HVertex> vertices;
  SearchMode mode = SearchMode::powerset;
  std::size_t length() const { return vertices.size(); }
};

inline std::string dump_hpath(const HPath& p) {
  std::ostringstream out;
  for (std::size_t h = 0; h < p.vertices.size(); ++h) {
    out << "stage " << h << " Y";
    for (const auto& e : p.vertices[h].y.edges()) out << ' ' << e.tail << ' ' << e.head << ' ' << e.colour;
    out << " D";
    for (Vertex v : p.vertices[h].d.elements()) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

enum class HStatus { found, no_path, budget_exceeded };

inline const char* to_string(HStatus s) {
  switch (s) {
    case HStatus::found: return "found";
    case HStatus::no_path: return "no-path";
    case HStatus::budget_exceeded: return "budget-exceeded";
  }
  return "?";
}

struct HSearchResult {
  HStatus status = HStatus::no_path;
  bool certified = false;  // meaningful for no_path
  std::optional<HPath> path;
  std::uint64_t states = 0;
  std::size_t restricted_sets = 0;
  bool enumeration_complete = true;
  std::string note;
};

namespace detail {

class HSearch {
 public:
  HSearch(const ProblemInstance& inst, const Parameters& params, SearchMode mode, SearchBudget budget)
      : inst_(inst), params_(params), mode_(mode), budget_(budget), start_(std::chrono::steady_clock::now()) {}

  HSearchResult run() {
    HSearchResult res;
    if (mode_ == SearchMode::explicit_sets) {
      auto en = enumerate_restricted_sets(inst_, params_, budget_.restricted_cap);
      res.restricted_sets = en.sets.size();
      res.enumeration_complete = en.complete;
      for (const auto& rs : en.sets) d_sets_.push_back(rs.members);
      std::sort(d_sets_.begin(), d_sets_.end());
    } else {
      if (inst_.n() > 30) {
        res.status = HStatus::budget_exceeded;
        res.note = "powerset mode limited to 30 vertices";
        return res;
      }
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inst_.n()); ++mask) {
        VertexSet d;
        for (int v = 0; v < inst_.n(); ++v)
          if (mask >> v & 1U) d.insert(v);
        d_sets_.push_back(std::move(d));
      }
      std::sort(d_sets_.begin(), d_sets_.end());
    }

    std::vector<std::size_t> parent;
    std::vector<HVertex> states;
    std::unordered_map<HVertex, std::size_t, HVertexHash> index;
    std::deque<std::size_t> queue;
    auto finish = [&](std::size_t at) {
      HPath path;
      path.mode = mode_;
      for (std::size_t i = at;; i = parent[i]) {
        path.vertices.push_back(states[i]);
        if (parent[i] == i) break;
      }
      std::reverse(path.vertices.begin(), path.vertices.end());
      res.status = HStatus::found;
      res.path = std::move(path);
      res.states = states.size();
    };
    auto add = [&](HVertex hv, std::size_t from) -> std::optional<std::size_t> {
      if (index.count(hv)) return std::nullopt;
      std::size_t id = states.size();
      index.emplace(hv, id);
      states.push_back(std::move(hv));
      parent.push_back(from == SIZE_MAX ? id : from);
      queue.push_back(id);
      return id;
    };

    for (auto& hv : initial_states()) {
      auto id = add(std::move(hv), SIZE_MAX);
      if (id && s0_t0_membership(states[*id], inst_).t0) {
        finish(*id);
        return res;
      }
    }
    std::uint64_t expanded = 0;
    while (!queue.empty()) {
      if (out_of_budget(states.size(), ++expanded)) {
        res.status = HStatus::budget_exceeded;
        res.states = states.size();
        return res;
      }
      std::size_t cur = queue.front();
      queue.pop_front();
      for (auto& next : successors(states[cur])) {
        auto id = add(std::move(next), cur);
        if (id && s0_t0_membership(states[*id], inst_).t0) {
          finish(*id);
          return res;
        }
      }
    }
    res.status = HStatus::no_path;
    res.states = states.size();
    if (mode_ == SearchMode::powerset) {
      res.certified = params_.K >= inst_.k();
      if (!res.certified) res.note = "K below k";
    } else {
      res.certified = !params_.overridden && res.enumeration_complete;
      if (params_.overridden) res.note = "parameters overridden";
      else if (!res.enumeration_complete) res.note = "restricted-set enumeration capped";
    }
    return res;
  }

 private:
  bool out_of_budget(std::size_t states, std::uint64_t expanded) const {
    if (budget_.max_states && states > budget_.max_states) return true;
    if (budget_.timeout_s > 0 && (expanded & 255U) == 0) {
      std::chrono::duration<double> el = std::chrono::steady_clock::now() - start_;
      if (el.count() > budget_.timeout_s) return true;
    }
    return false;
  }

  // All S0 vertices, sorted.
  std::vector<HVertex> initial_states() const {
    std::vector<std::vector<ColouredEdge>> options(static_cast<std::size_t>(inst_.k()));
    for (int i = 0; i < inst_.k(); ++i)
      for (Vertex x : inst_.graph.out_neighbors(inst_.source(i))) options[static_cast<std::size_t>(i)].push_back({inst_.source(i), x, i + 1});
    std::vector<HVertex> out;
    std::vector<ColouredEdge> pick;
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == options.size()) {
        ColouredEdgeSet y(pick);
        if (!is_edge_family(y, inst_, params_)) return;
        for (const auto& d : d_sets_)
          if (one_end_in(y, d)) out.push_back({y, d});
        return;
      }
      for (const auto& e : options[i]) {
        pick.push_back(e);
        self(self, i + 1);
        pick.pop_back();
      }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
  }

  void moves_at(const HVertex& hv, const VertexSet& d2, Vertex v, std::vector<HVertex>& out) const {
    const auto in_e = hv.y.with_head(v);
    const auto out_e = hv.y.with_tail(v);
    auto emit = [&](std::initializer_list<ColouredEdge> remove, std::initializer_list<ColouredEdge> add) {
      ColouredEdgeSet y = hv.y;
      for (const auto& e : remove) y.erase(e);
      for (const auto& e : add) y.insert(e);
      if (!one_end_in(y, d2) || !is_edge_family(y, inst_, params_)) return;
      HVertex next{std::move(y), d2};
      if (h_adjacent(hv, next)) out.push_back(std::move(next));
    };
    const auto& g = inst_.graph;
    if (in_e && out_e) {
      emit({*in_e, *out_e}, {});
    } else if (in_e) {
      for (Vertex w : g.out_neighbors(v))
        if (!d2.contains(w)) emit({*in_e}, {{v, w, in_e->colour}});
    } else if (out_e) {
      for (Vertex u : g.in_neighbors(v))
        if (!d2.contains(u)) emit({*out_e}, {{u, v, out_e->colour}});
    } else {
      for (int col = 1; col <= inst_.k(); ++col)
        for (Vertex u : g.in_neighbors(v)) {
          if (d2.contains(u)) continue;
          for (Vertex w : g.out_neighbors(v))
            if (!d2.contains(w) && u != w) emit({}, {{u, v, col}, {v, w, col}});
        }
    }
  }

  std::vector<HVertex> successors(const HVertex& hv) const {
    std::vector<HVertex> out;
    if (mode_ == SearchMode::powerset) {
      for (Vertex v = 0; v < inst_.n(); ++v) {
        if (hv.d.contains(v)) continue;
        VertexSet d2 = hv.d;
        d2.insert(v);
        moves_at(hv, d2, v, out);
      }
    } else {
      for (const auto& d2 : d_sets_) {
        if (d2 == hv.d || !hv.d.is_subset_of(d2)) continue;
        for (Vertex v : (d2 - hv.d).elements()) moves_at(hv, d2, v, out);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  const ProblemInstance& inst_;
  const Parameters& params_;
  SearchMode mode_;
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::vector<VertexSet> d_sets_;
};

}  // namespace detail

// Breadth-first search from all of S0; a returned path is a shortest one.
inline HSearchResult find_h_path(const ProblemInstance& inst, const Parameters& params, SearchMode mode,
                                 SearchBudget budget = {}) {
  return detail::HSearch(inst, params, mode, budget).run();
}

class MalformedUnion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Follows colour i from s_i through the union of the Y sets. Components of
// the union not reached this way (cycles) are dropped.
inline Linkage extract_linkage(const HPath& path, const ProblemInstance& inst) {
  std::map<std::pair<int, Vertex>, std::vector<Vertex>> next;  // (colour, tail) -> heads
  {
    std::vector<ColouredEdge> all;
    for (const auto& hv : path.vertices) all.insert(all.end(), hv.y.edges().begin(), hv.y.edges().end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    for (const auto& e : all) next[{e.colour, e.tail}].push_back(e.head);
  }
  Linkage l;
  for (int i = 0; i < inst.k(); ++i) {
    DiPath p{{inst.source(i)}};
    VertexSet seen{inst.source(i)};
    while (p.back() != inst.sink(i)) {
      auto it = next.find({i + 1, p.back()});
      if (it == next.end())
        throw MalformedUnion("colour " + std::to_string(i + 1) + " stops at vertex " + std::to_string(p.back()));
      if (it->second.size() != 1)
        throw MalformedUnion("colour " + std::to_string(i + 1) + " branches at vertex " + std::to_string(p.back()));
      Vertex x = it->second.front();
      if (seen.contains(x)) throw MalformedUnion("colour " + std::to_string(i + 1) + " revisits vertex " + std::to_string(x));
      seen.insert(x);
      p.vertices.push_back(x);
    }
    l.members.push_back(std::move(p));
  }
  if (auto defect = validate_linkage(inst, l)) throw MalformedUnion("extracted linkage invalid: " + defect->describe());
  return l;
}

struct TraceFailure {
  std::size_t stage = 0;
  std::string clause;
};

struct TraceReport {
  HPath path;
  SeparationReport separation;
  std::vector<TraceFailure> failures;
  bool ok() const { return failures.empty(); }
};

// (Y_h, D_h) for h = 0..n, with Y_h the jumping edges coloured by member.
inline TraceReport trace_linkage(const ProblemInstance& inst, const Linkage& l, std::span<const Vertex> order,
                                 const Parameters& params) {
  TraceReport rep;
  rep.path.mode = SearchMode::explicit_sets;
  rep.separation = verify_separation(inst, l, order, params);
  for (const auto& st : rep.separation.stages) {
    if (!st.a_ok) rep.failures.push_back({st.h, "separation (a)"});
    if (!st.b_ok) rep.failures.push_back({st.h, "separation (b)"});
    if (!st.c.ok()) rep.failures.push_back({st.h, "separation (c): " + st.c.describe()});
  }
  for (std::size_t h = 0; h <= order.size(); ++h) {
    auto cd = build_cut_data(inst, l, order, h, params.s);
    ColouredEdgeSet y;
    for (const auto& j : cd.jumps) y.insert({j.edge.tail, j.edge.head, j.member + 1});
    HVertex hv{std::move(y), cd.d.members};
    if (auto bad = check_edge_family(hv.y, inst, params)) rep.failures.push_back({h, std::string("edge family: ") + to_string(*bad)});
    if (!one_end_in(hv.y, hv.d)) rep.failures.push_back({h, "one-end rule"});
    if (h > 0 && !h_adjacent(rep.path.vertices.back(), hv)) rep.failures.push_back({h, "adjacency from previous stage"});
    rep.path.vertices.push_back(std::move(hv));
  }
  if (!s0_t0_membership(rep.path.vertices.front(), inst).s0) rep.failures.push_back({0, "first state not in S0"});
  if (!s0_t0_membership(rep.path.vertices.back(), inst).t0) rep.failures.push_back({order.size(), "last state not in T0"});
  return rep;
}

struct MinimumSizeResult {
  HSearchResult search;
  std::optional<std::size_t> size;  // set when a path was found
};

// A shortest S0 -> T0 path with p vertices corresponds to p - 1 + 2k vertices.
inline MinimumSizeResult minimum_linkage_size_via_h(const ProblemInstance& inst, const Parameters& params, SearchMode mode,
                                                    SearchBudget budget = {}) {
  MinimumSizeResult out{find_h_path(inst, params, mode, budget), std::nullopt};
  if (out.search.path) out.size = out.search.path->length() - 1 + 2 * static_cast<std::size_t>(inst.k());
  return out;
}

}  // namespace kdp
