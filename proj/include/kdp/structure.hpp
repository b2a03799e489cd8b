#pragma once

// Alternating sequences, planar matchings, C-acceptable and acceptable sets,
// and the vertex enumeration of a minimum linkage built from them.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kdp/core.hpp"
#include "kdp/params.hpp"

namespace kdp {

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Half the length of the longest (X,Y)-alternating subsequence of path.
// Greedy: take the earliest X vertex, then the earliest later Y vertex, and so on.
inline std::size_t wiggle_number(std::span<const Vertex> path, const VertexSet& x, const VertexSet& y) {
  if (x.intersects(y)) throw ContractViolation("wiggle_number: X and Y overlap");
  std::size_t count = 0;
  bool want_x = true;
  for (Vertex v : path) {
    if (want_x && x.contains(v)) {
      want_x = false;
    } else if (!want_x && y.contains(v)) {
      ++count;
      want_x = true;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Planar matchings

struct PlanarMatching {
  std::vector<DiPath> members;
};

struct MatchingResult {
  std::size_t cardinality = 0;  // capped at the threshold
  PlanarMatching witness;
};

namespace detail {

struct MatchingCandidate {
  int q_pos = 0;
  int r_pos = 0;
  Vertex first = 0;
  Vertex last = 0;
  bool direct = false;           // one- or two-vertex member available
  std::vector<Vertex> middles;   // three-vertex alternatives (only when !direct)
};

class MatchingSearch {
 public:
  MatchingSearch(std::vector<MatchingCandidate> cands, std::size_t threshold)
      : cands_(std::move(cands)), threshold_(threshold), suffix_distinct_(cands_.size() + 1, 0) {
    for (std::size_t i = cands_.size(); i-- > 0;) {
      bool fresh = i + 1 == cands_.size() || cands_[i + 1].q_pos != cands_[i].q_pos;
      suffix_distinct_[i] = suffix_distinct_[i + 1] + (fresh ? 1 : 0);
    }
  }

  MatchingResult run() {
    dfs(0, -1, -1);
    MatchingResult out;
    out.cardinality = std::min(best_.size(), threshold_);
    out.witness.members = best_;
    return out;
  }

 private:
  void dfs(std::size_t from, int last_q, int last_r) {
    if (best_.size() >= threshold_) return;
    if (current_.size() > best_.size()) best_ = current_;
    if (best_.size() >= threshold_) return;
    if (current_.size() + suffix_distinct_[from] <= best_.size()) return;
    for (std::size_t i = from; i < cands_.size(); ++i) {
      const auto& c = cands_[i];
      if (c.q_pos <= last_q || c.r_pos <= last_r) continue;
      if (used_.contains(c.first) || used_.contains(c.last)) continue;
      if (c.direct) {
        push(c.first == c.last ? std::vector<Vertex>{c.first} : std::vector<Vertex>{c.first, c.last});
        dfs(i + 1, c.q_pos, c.r_pos);
        pop();
      } else {
        for (Vertex m : c.middles) {
          if (used_.contains(m)) continue;
          push({c.first, m, c.last});
          dfs(i + 1, c.q_pos, c.r_pos);
          pop();
          if (best_.size() >= threshold_) return;
        }
      }
      if (best_.size() >= threshold_) return;
    }
  }

  void push(std::vector<Vertex> member) {
    for (Vertex v : member) used_.insert(v);
    current_.push_back(DiPath{std::move(member)});
  }
  void pop() {
    for (Vertex v : current_.back().vertices) used_.erase(v);
    current_.pop_back();
  }

  std::vector<MatchingCandidate> cands_;
  std::size_t threshold_;
  std::vector<std::size_t> suffix_distinct_;
  std::vector<DiPath> current_;
  std::vector<DiPath> best_;
  VertexSet used_;
};

}  // namespace detail

// Maximum planar (Q,R)-matching from X to Y whose members have at most three
// vertices and whose middle vertices avoid forbidden_internal. Exact
// backtracking with early exit once threshold members are found. Q and R may
// be the same path.
inline MatchingResult max_planar_matching(const Digraph& g, std::span<const Vertex> q, std::span<const Vertex> r,
                                          const VertexSet& x, const VertexSet& y, const VertexSet& forbidden_internal,
                                          std::size_t threshold) {
  if (threshold == 0) throw ContractViolation("max_planar_matching: threshold must be positive");
  std::vector<detail::MatchingCandidate> cands;
  for (int a = 0; a < static_cast<int>(q.size()); ++a) {
    Vertex first = q[static_cast<std::size_t>(a)];
    if (!x.contains(first)) continue;
    for (int b = 0; b < static_cast<int>(r.size()); ++b) {
      Vertex last = r[static_cast<std::size_t>(b)];
      if (!y.contains(last)) continue;
      detail::MatchingCandidate c{a, b, first, last, false, {}};
      if (first == last || g.has_edge(first, last)) {
        // a shorter member with the same ends dominates every 3-vertex one
        c.direct = true;
      } else {
        for (Vertex m : g.out_neighbors(first))
          if (m != last && !forbidden_internal.contains(m) && g.has_edge(m, last)) c.middles.push_back(m);
        if (c.middles.empty()) continue;
      }
      cands.push_back(std::move(c));
    }
  }
  return detail::MatchingSearch(std::move(cands), threshold).run();
}

// ---------------------------------------------------------------------------
// Acceptability

enum class AcceptCondition { terminals, prefix, matching, wiggle };

inline const char* to_string(AcceptCondition c) {
  switch (c) {
    case AcceptCondition::terminals: return "terminals";
    case AcceptCondition::prefix: return "prefix";
    case AcceptCondition::matching: return "matching";
    case AcceptCondition::wiggle: return "wiggle";
  }
  return "?";
}

struct AcceptViolation {
  AcceptCondition condition;
  std::string detail;
};

// Switches for mutation testing of the verification harness. Production code
// always uses the defaults.
struct AcceptabilityOptions {
  bool check_prefix = true;
  bool check_matching = true;
};

// B (a subset of clique C) is C-acceptable for L when, with A = C \ B:
//  1. the sources in C lie in B and no sink lies in B;
//  2. the B-vertices of each member are exactly the C-vertices of some
//     initial subpath;
//  3. no planar (P_i,P_j)-matching from B to A of size k^2+k+2 is internally
//     disjoint from L, for all i and j (including i = j).
inline std::optional<AcceptViolation> check_c_acceptable(const ProblemInstance& inst, const Linkage& l, int clique,
                                                         const VertexSet& b, const AcceptabilityOptions& opt = {}) {
  const VertexSet c_set = inst.partition.members(clique);
  if (!b.is_subset_of(c_set)) throw ContractViolation("check_c_acceptable: B is not inside clique " + std::to_string(clique));

  for (int i = 0; i < inst.k(); ++i) {
    if (c_set.contains(inst.source(i)) && !b.contains(inst.source(i)))
      return AcceptViolation{AcceptCondition::terminals, "source " + std::to_string(inst.source(i)) + " not in B"};
    if (b.contains(inst.sink(i)))
      return AcceptViolation{AcceptCondition::terminals, "sink " + std::to_string(inst.sink(i)) + " in B"};
  }

  if (opt.check_prefix) {
    for (int i = 0; i < l.k(); ++i) {
      bool left_b = false;
      for (Vertex v : l.members[static_cast<std::size_t>(i)].vertices) {
        if (!c_set.contains(v)) continue;
        if (!b.contains(v)) {
          left_b = true;
        } else if (left_b) {
          return AcceptViolation{AcceptCondition::prefix, "member " + std::to_string(i + 1) + " re-enters B at " +
                                                              std::to_string(v)};
        }
      }
    }
  }

  if (opt.check_matching) {
    const VertexSet a = c_set - b;
    const VertexSet in_l = l.vertex_set();
    const auto threshold = static_cast<std::size_t>(inst.k() * inst.k() + inst.k() + 2);
    for (int i = 0; i < l.k(); ++i) {
      for (int j = 0; j < l.k(); ++j) {
        auto m = max_planar_matching(inst.graph, l.members[static_cast<std::size_t>(i)].vertices,
                                     l.members[static_cast<std::size_t>(j)].vertices, b, a, in_l, threshold);
        if (m.cardinality >= threshold)
          return AcceptViolation{AcceptCondition::matching, "planar (P" + std::to_string(i + 1) + ",P" +
                                                                std::to_string(j + 1) + ")-matching of size " +
                                                                std::to_string(m.cardinality)};
      }
    }
  }
  return std::nullopt;
}

inline bool is_c_acceptable(const ProblemInstance& inst, const Linkage& l, int clique, const VertexSet& b,
                            const AcceptabilityOptions& opt = {}) {
  return !check_c_acceptable(inst, l, clique, b, opt);
}

// B is acceptable when it holds every source and no sink, B & C_a is
// C_a-acceptable for each clique, and for distinct cliques a, b every member
// has (B & C_b, A & C_a)-wiggle number at most z, where A = V(G) \ B.
inline std::optional<AcceptViolation> check_acceptable(const ProblemInstance& inst, const Linkage& l,
                                                       const Parameters& params, const VertexSet& b,
                                                       const AcceptabilityOptions& opt = {}) {
  for (int i = 0; i < inst.k(); ++i) {
    if (!b.contains(inst.source(i)))
      return AcceptViolation{AcceptCondition::terminals, "source " + std::to_string(inst.source(i)) + " not in B"};
    if (b.contains(inst.sink(i)))
      return AcceptViolation{AcceptCondition::terminals, "sink " + std::to_string(inst.sink(i)) + " in B"};
  }
  const int c = inst.partition.c;
  std::vector<VertexSet> cliques;
  for (int a = 1; a <= c; ++a) cliques.push_back(inst.partition.members(a));
  for (int a = 1; a <= c; ++a) {
    if (auto v = check_c_acceptable(inst, l, a, b & cliques[static_cast<std::size_t>(a - 1)], opt)) {
      v->detail = "clique " + std::to_string(a) + ": " + v->detail;
      return v;
    }
  }
  const VertexSet a_set = inst.graph.all_vertices() - b;
  for (int ca = 1; ca <= c; ++ca) {
    for (int cb = 1; cb <= c; ++cb) {
      if (ca == cb) continue;
      const VertexSet x = b & cliques[static_cast<std::size_t>(cb - 1)];
      const VertexSet y = a_set & cliques[static_cast<std::size_t>(ca - 1)];
      for (int i = 0; i < l.k(); ++i) {
        auto wn = wiggle_number(l.members[static_cast<std::size_t>(i)].vertices, x, y);
        if (static_cast<std::int64_t>(wn) > params.z)
          return AcceptViolation{AcceptCondition::wiggle, "member " + std::to_string(i + 1) + " has wiggle " +
                                                              std::to_string(wn) + " between cliques " +
                                                              std::to_string(cb) + " and " + std::to_string(ca)};
      }
    }
  }
  return std::nullopt;
}

inline bool is_acceptable(const ProblemInstance& inst, const Linkage& l, const Parameters& params, const VertexSet& b,
                          const AcceptabilityOptions& opt = {}) {
  return !check_acceptable(inst, l, params, b, opt);
}

struct ExtensionStep {
  enum class Kind { extended, exhausted, stuck };
  Kind kind = Kind::stuck;
  Vertex vertex = -1;
};

// Smallest-id v in V(L) \ (B + sinks) keeping B + v acceptable.
inline ExtensionStep extend_acceptable(const ProblemInstance& inst, const Linkage& l, const Parameters& params,
                                       const VertexSet& b, const AcceptabilityOptions& opt = {}) {
  const VertexSet in_l = l.vertex_set();
  if (!b.is_subset_of(in_l)) throw ContractViolation("extend_acceptable: B is not inside V(L)");
  if (auto v = check_acceptable(inst, l, params, b, opt))
    throw ContractViolation("extend_acceptable: B is not acceptable (" + v->detail + ")");
  const VertexSet candidates = in_l - b - inst.sinks();
  if (candidates.empty()) return {ExtensionStep::Kind::exhausted, -1};
  for (Vertex v : candidates.elements()) {
    VertexSet next = b;
    next.insert(v);
    if (is_acceptable(inst, l, params, next, opt)) return {ExtensionStep::Kind::extended, v};
  }
  return {ExtensionStep::Kind::stuck, -1};
}

// {s_1..s_k} together with the first h enumerated vertices.
inline VertexSet prefix_set(const ProblemInstance& inst, std::span<const Vertex> order, std::size_t h) {
  VertexSet b = inst.sources();
  for (std::size_t i = 0; i < h && i < order.size(); ++i) b.insert(order[i]);
  return b;
}

struct VertexEnumeration {
  std::vector<Vertex> order;
  // per prefix h = 0..n: acceptability verdict and max (B_h,A_h)-wiggle number
  std::vector<bool> prefix_acceptable;
  std::vector<std::size_t> max_wiggle;
};

struct VertexOrderResult {
  bool ok = false;
  VertexEnumeration enumeration;  // partial when !ok
  std::string failure;
  VertexSet failing_set;          // B at the failing stage
};

// Repeated extension from the sources; every prefix is also checked against
// the global bound: each member has (B_h, A_h)-wiggle number at most w.
inline VertexOrderResult vertex_order(const ProblemInstance& inst, const Linkage& l, const Parameters& params,
                                      const AcceptabilityOptions& opt = {}) {
  VertexOrderResult res;
  VertexSet b = inst.sources();
  const VertexSet in_l = l.vertex_set();
  auto record = [&](const VertexSet& cur) {
    const VertexSet a = in_l - cur;
    std::size_t worst = 0;
    for (const auto& m : l.members) worst = std::max(worst, wiggle_number(m.vertices, cur, a));
    res.enumeration.prefix_acceptable.push_back(true);
    res.enumeration.max_wiggle.push_back(worst);
    if (static_cast<std::int64_t>(worst) > params.w) {
      res.failure = "stage " + std::to_string(res.enumeration.order.size()) + ": (B,A)-wiggle number " +
                    std::to_string(worst) + " exceeds w=" + std::to_string(params.w);
      res.failing_set = cur;
      return false;
    }
    return true;
  };
  if (auto v = check_acceptable(inst, l, params, b, opt)) {
    res.failure = "sources are not acceptable: " + v->detail;
    res.failing_set = b;
    return res;
  }
  if (!record(b)) return res;
  while (true) {
    auto step = extend_acceptable(inst, l, params, b, opt);
    if (step.kind == ExtensionStep::Kind::exhausted) break;
    if (step.kind == ExtensionStep::Kind::stuck) {
      res.failure = "stuck at stage " + std::to_string(res.enumeration.order.size());
      res.failing_set = b;
      return res;
    }
    b.insert(step.vertex);
    res.enumeration.order.push_back(step.vertex);
    if (!record(b)) return res;
  }
  res.ok = true;
  return res;
}

// ---------------------------------------------------------------------------
// Disjoint wiggle segments

class PreconditionViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

struct Segment {
  int member = 0;
  std::size_t begin = 0;  // inclusive offset in the member
  std::size_t end = 0;    // exclusive
  bool empty() const { return begin >= end; }
};

inline Segment locate_segment(const Linkage& l, const DiPath& q) {
  if (q.vertices.empty()) throw PreconditionViolation("host path is empty");
  for (int i = 0; i < l.k(); ++i) {
    const auto& vs = l.members[static_cast<std::size_t>(i)].vertices;
    auto it = std::search(vs.begin(), vs.end(), q.vertices.begin(), q.vertices.end());
    if (it != vs.end()) {
      auto off = static_cast<std::size_t>(it - vs.begin());
      return {i, off, off + q.vertices.size()};
    }
  }
  throw PreconditionViolation("host path is not a subpath of any member");
}

inline std::span<const Vertex> segment_span(const Linkage& l, const Segment& s) {
  const auto& vs = l.members[static_cast<std::size_t>(s.member)].vertices;
  return std::span<const Vertex>(vs).subspan(s.begin, s.end - s.begin);
}

}  // namespace detail

// Given subpaths Q_1..Q_m of members of L and pairwise disjoint sets
// X_1,Y_1,...,X_m,Y_m with wiggle(Q_i, X_i, Y_i) >= m*w, returns pairwise
// vertex-disjoint subpaths R_i of Q_i with wiggle(R_i, X_i, Y_i) >= w.
//
// Each round takes the shortest initial subpath P0 of a member (lowest member
// index first) such that P0 & Q_i reaches wiggle w for some live i; that
// intersection becomes R_i and every other live host loses its P0 part.
inline std::vector<DiPath> disjoint_wiggle_segments(const Linkage& l, std::span<const DiPath> hosts,
                                                    std::span<const std::pair<VertexSet, VertexSet>> set_pairs,
                                                    std::size_t w) {
  const std::size_t m = hosts.size();
  if (set_pairs.size() != m) throw PreconditionViolation("one (X,Y) pair per host path is required");
  if (w == 0) throw PreconditionViolation("w must be positive");
  VertexSet seen;
  for (const auto& [x, y] : set_pairs) {
    if (x.intersects(seen) || y.intersects(seen) || x.intersects(y))
      throw PreconditionViolation("the sets X_i, Y_i are not pairwise disjoint");
    seen |= x;
    seen |= y;
  }
  std::vector<detail::Segment> segs;
  for (std::size_t i = 0; i < m; ++i) {
    segs.push_back(detail::locate_segment(l, hosts[i]));
    auto wn = wiggle_number(hosts[i].vertices, set_pairs[i].first, set_pairs[i].second);
    if (wn < m * w)
      throw PreconditionViolation("host " + std::to_string(i + 1) + " has wiggle number " + std::to_string(wn) +
                                  " < " + std::to_string(m * w));
  }

  std::vector<std::optional<DiPath>> result(m);
  std::vector<bool> live(m, true);
  for (std::size_t round = 0; round < m; ++round) {
    // shortest prefix length per member at which some live host reaches w
    int best_member = -1;
    std::size_t best_len = 0;
    std::size_t best_host = 0;
    for (int mem = 0; mem < l.k() && best_member < 0; ++mem) {
      const auto& vs = l.members[static_cast<std::size_t>(mem)].vertices;
      for (std::size_t len = 1; len <= vs.size() && best_member < 0; ++len) {
        for (std::size_t i = 0; i < m; ++i) {
          if (!live[i] || segs[i].member != mem || segs[i].empty()) continue;
          std::size_t hi = std::min(len, segs[i].end);
          if (hi <= segs[i].begin) continue;
          auto part = std::span<const Vertex>(vs).subspan(segs[i].begin, hi - segs[i].begin);
          if (wiggle_number(part, set_pairs[i].first, set_pairs[i].second) >= w) {
            best_member = mem;
            best_len = len;
            best_host = i;
            break;
          }
        }
      }
    }
    if (best_member < 0) throw PreconditionViolation("wiggle premise failed during segment extraction");

    const auto& seg = segs[best_host];
    std::size_t hi = std::min(best_len, seg.end);
    auto part = detail::segment_span(l, {seg.member, seg.begin, hi});
    result[best_host] = DiPath{std::vector<Vertex>(part.begin(), part.end())};
    live[best_host] = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (live[i] && segs[i].member == best_member) segs[i].begin = std::max(segs[i].begin, best_len);
    }
  }
  std::vector<DiPath> out;
  for (auto& r : result) out.push_back(std::move(*r));
  return out;
}

}  // namespace kdp
