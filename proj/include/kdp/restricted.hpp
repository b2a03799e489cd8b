#pragma once

// Sequence-family closures, (r,s,t)-restricted sets carried with their
// generator witness, the history sets D_h of a traced linkage, and an
// enumerator of all restricted sets for small parameters.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "kdp/core.hpp"
#include "kdp/params.hpp"
#include "kdp/structure.hpp"

namespace kdp {

// Distinct vertices of one clique, in order. Length = number of terms.
struct VertexSequence {
  std::vector<Vertex> terms;
  std::size_t length() const { return terms.size(); }
  friend auto operator<=>(const VertexSequence&, const VertexSequence&) = default;
  friend bool operator==(const VertexSequence&, const VertexSequence&) = default;
};

using SequenceFamily = std::vector<VertexSequence>;

namespace detail {

// Clique shared by all terms, or 0 if the terms straddle cliques.
inline int sequence_clique(const CliquePartition& p, const VertexSequence& x) {
  if (x.terms.empty()) return 0;
  int a = p.clique_of(x.terms.front());
  for (Vertex v : x.terms)
    if (p.clique_of(v) != a) return 0;
  return a;
}

// Closure of one sequence. plus: v adjacent from the last s-1 terms;
// minus: v adjacent to the first s-1 terms.
inline VertexSet sequence_closure(const Digraph& g, const CliquePartition& p, const VertexSequence& x,
                                  std::int64_t s, bool plus) {
  VertexSet out;
  int a = sequence_clique(p, x);
  if (a == 0) return out;
  for (Vertex v : x.terms) out.insert(v);
  if (s < 1 || static_cast<std::int64_t>(x.length()) != s) return out;
  auto tail_begin = plus ? x.terms.begin() + 1 : x.terms.begin();
  auto tail_end = plus ? x.terms.end() : x.terms.end() - 1;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (p.clique_of(v) != a || out.contains(v)) continue;
    bool all = std::all_of(tail_begin, tail_end, [&](Vertex u) { return plus ? g.has_edge(u, v) : g.has_edge(v, u); });
    if (all) out.insert(v);
  }
  return out;
}

}  // namespace detail

// A+: vertices v such that for some X in the family sharing v's clique,
// v is a term of X, or X has exactly s terms and v is adjacent from each of
// the last s-1 of them.
inline VertexSet family_plus(const Digraph& g, const CliquePartition& p, const SequenceFamily& family, std::int64_t s) {
  VertexSet out;
  for (const auto& x : family) out |= detail::sequence_closure(g, p, x, s, true);
  return out;
}

// A-: mirror image using the first s-1 terms and edges towards them.
inline VertexSet family_minus(const Digraph& g, const CliquePartition& p, const SequenceFamily& family, std::int64_t s) {
  VertexSet out;
  for (const auto& x : family) out |= detail::sequence_closure(g, p, x, s, false);
  return out;
}

enum class SequenceEnd { first, last };

// First (or last) min(s, count) vertices of path inside the clique, in path order.
inline std::optional<VertexSequence> up_to_s_sequence(std::span<const Vertex> path, const CliquePartition& p,
                                                      int clique, std::int64_t s, SequenceEnd end) {
  std::vector<Vertex> in_c;
  for (Vertex v : path)
    if (p.clique_of(v) == clique) in_c.push_back(v);
  if (in_c.empty() || s < 1) return std::nullopt;
  auto keep = static_cast<std::size_t>(std::min<std::int64_t>(s, static_cast<std::int64_t>(in_c.size())));
  if (end == SequenceEnd::first) return VertexSequence{std::vector<Vertex>(in_c.begin(), in_c.begin() + static_cast<std::ptrdiff_t>(keep))};
  return VertexSequence{std::vector<Vertex>(in_c.end() - static_cast<std::ptrdiff_t>(keep), in_c.end())};
}

// D = (B+ \ A-) | S with S inside B+ & A-.
struct RestrictedWitness {
  SequenceFamily a_family;
  SequenceFamily b_family;
  VertexSet slack;
};

struct RestrictedSet {
  VertexSet members;
  RestrictedWitness witness;
};

struct RestrictednessReport {
  bool lengths_ok = true;      // every sequence has at most s terms
  bool cardinality_ok = true;  // |A|, |B| <= r
  bool overlap_ok = true;      // |B+ & A-| <= t
  bool sandwich_ok = true;     // B+ \ A- <= D <= B+
  std::size_t overlap = 0;
  bool ok() const { return lengths_ok && cardinality_ok && overlap_ok && sandwich_ok; }
  std::string describe() const {
    std::string out;
    if (!lengths_ok) out += "sequence longer than s; ";
    if (!cardinality_ok) out += "family larger than r; ";
    if (!overlap_ok) out += "overlap " + std::to_string(overlap) + " exceeds t; ";
    if (!sandwich_ok) out += "D not between B+\\A- and B+; ";
    return out.empty() ? "ok" : out;
  }
};

// Checks the four restrictedness conditions on the carried witness.
inline RestrictednessReport check_restricted(const Digraph& g, const CliquePartition& p, const RestrictedSet& d,
                                             std::int64_t r, std::int64_t s, std::int64_t t) {
  RestrictednessReport rep;
  const auto& wit = d.witness;
  for (const auto* fam : {&wit.a_family, &wit.b_family})
    for (const auto& x : *fam)
      if (static_cast<std::int64_t>(x.length()) > s) rep.lengths_ok = false;
  rep.cardinality_ok = static_cast<std::int64_t>(wit.a_family.size()) <= r &&
                       static_cast<std::int64_t>(wit.b_family.size()) <= r;
  const VertexSet plus = family_plus(g, p, wit.b_family, s);
  const VertexSet minus = family_minus(g, p, wit.a_family, s);
  rep.overlap = (plus & minus).size();
  rep.overlap_ok = static_cast<std::int64_t>(rep.overlap) <= t;
  rep.sandwich_ok = (plus - minus).is_subset_of(d.members) && d.members.is_subset_of(plus);
  return rep;
}

// ---------------------------------------------------------------------------
// Cut data of a traced linkage

struct JumpEdge {
  Edge edge;
  int member = 0;  // 0-based
  friend auto operator<=>(const JumpEdge&, const JumpEdge&) = default;
};

struct CutData {
  std::size_t h = 0;
  VertexSet b;  // B_h
  VertexSet a;  // A_h = V(L) \ B_h
  std::vector<JumpEdge> jumps;       // J_h, in member order
  std::vector<DiPath> q_fragments;   // pieces inside B_h
  std::vector<DiPath> r_fragments;   // pieces inside A_h
  SequenceFamily a_family;           // first up-to-s of each R piece per clique
  SequenceFamily b_family;           // last up-to-s of each Q piece per clique
  VertexSet b_plus;
  VertexSet a_minus;
  RestrictedSet d;                   // D_h = (B+ \ A-) | B_h
};

class StageOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

inline CutData build_cut_data(const ProblemInstance& inst, const Linkage& l, std::span<const Vertex> order,
                              std::size_t h, std::int64_t s) {
  if (h > order.size())
    throw StageOutOfRange("stage " + std::to_string(h) + " outside 0.." + std::to_string(order.size()));
  CutData cd;
  cd.h = h;
  cd.b = prefix_set(inst, order, h);
  cd.a = l.vertex_set() - cd.b;
  for (int i = 0; i < l.k(); ++i) {
    const auto& vs = l.members[static_cast<std::size_t>(i)].vertices;
    std::vector<Vertex> piece;
    auto flush = [&] {
      if (piece.empty()) return;
      (cd.b.contains(piece.front()) ? cd.q_fragments : cd.r_fragments).push_back(DiPath{piece});
      piece.clear();
    };
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (j > 0 && cd.b.contains(vs[j - 1]) != cd.b.contains(vs[j])) {
        cd.jumps.push_back({{vs[j - 1], vs[j]}, i});
        flush();
      }
      piece.push_back(vs[j]);
    }
    flush();
  }
  const auto& part = inst.partition;
  for (int a = 1; a <= part.c; ++a) {
    for (const auto& rf : cd.r_fragments)
      if (auto x = up_to_s_sequence(rf.vertices, part, a, s, SequenceEnd::first)) cd.a_family.push_back(*x);
    for (const auto& qf : cd.q_fragments)
      if (auto x = up_to_s_sequence(qf.vertices, part, a, s, SequenceEnd::last)) cd.b_family.push_back(*x);
  }
  std::sort(cd.a_family.begin(), cd.a_family.end());
  cd.a_family.erase(std::unique(cd.a_family.begin(), cd.a_family.end()), cd.a_family.end());
  std::sort(cd.b_family.begin(), cd.b_family.end());
  cd.b_family.erase(std::unique(cd.b_family.begin(), cd.b_family.end()), cd.b_family.end());

  cd.b_plus = family_plus(inst.graph, part, cd.b_family, s);
  cd.a_minus = family_minus(inst.graph, part, cd.a_family, s);
  cd.d.members = (cd.b_plus - cd.a_minus) | cd.b;
  cd.d.witness = {cd.a_family, cd.b_family, cd.b & cd.a_minus & cd.b_plus};
  return cd;
}

struct StageSeparation {
  std::size_t h = 0;
  bool a_ok = false;          // B_h <= D_h and A_h & D_h empty
  bool b_ok = true;           // D_h <= D_{h+1} (vacuous at h = n)
  RestrictednessReport c;     // witness checked against (r,s,t)
  bool sides_covered = false; // A_h <= A-, B_h <= B+
  bool witness_exact = false; // D_h = (B+ \ A-) | slack
  bool ok() const { return a_ok && b_ok && c.ok(); }
};

struct SeparationReport {
  std::vector<StageSeparation> stages;
  bool ok() const {
    return std::all_of(stages.begin(), stages.end(), [](const StageSeparation& s) { return s.ok(); });
  }
  // "stage h clause (x)" for the first failure, empty when ok
  std::string first_failure() const {
    for (const auto& st : stages) {
      if (!st.a_ok) return "stage " + std::to_string(st.h) + " clause (a)";
      if (!st.b_ok) return "stage " + std::to_string(st.h) + " clause (b)";
      if (!st.c.ok()) return "stage " + std::to_string(st.h) + " clause (c): " + st.c.describe();
    }
    return {};
  }
};

// Checks clauses (a), (b), (c) of the separation theorem at every stage, with
// r, s, t taken from params.
inline SeparationReport verify_separation(const ProblemInstance& inst, const Linkage& l, std::span<const Vertex> order,
                                          const Parameters& params) {
  SeparationReport rep;
  std::vector<CutData> cuts;
  for (std::size_t h = 0; h <= order.size(); ++h) cuts.push_back(build_cut_data(inst, l, order, h, params.s));
  for (std::size_t h = 0; h < cuts.size(); ++h) {
    const auto& cd = cuts[h];
    StageSeparation st;
    st.h = h;
    st.a_ok = cd.b.is_subset_of(cd.d.members) && !cd.a.intersects(cd.d.members);
    if (h + 1 < cuts.size()) st.b_ok = cd.d.members.is_subset_of(cuts[h + 1].d.members);
    st.c = check_restricted(inst.graph, inst.partition, cd.d, params.r, params.s, params.t);
    st.sides_covered = cd.a.is_subset_of(cd.a_minus) && cd.b.is_subset_of(cd.b_plus);
    st.witness_exact = cd.d.members == ((cd.b_plus - cd.a_minus) | cd.d.witness.slack);
    rep.stages.push_back(std::move(st));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Enumeration of restricted sets

struct RestrictedEnumeration {
  std::vector<RestrictedSet> sets;  // extensionally distinct, in discovery order
  bool complete = false;
  std::uint64_t triples_examined = 0;
};

namespace detail {

// Canonical single-clique sequences. Short ones (< s terms) only matter
// through their vertex set; full ones matter through their set plus the one
// term excluded from the adjacency test: the first term for the + closure,
// the last term for the - closure.
inline std::vector<VertexSequence> canonical_sequences(const CliquePartition& p, std::int64_t s, bool plus,
                                                       std::uint64_t limit, bool& truncated) {
  std::vector<VertexSequence> out;
  for (int a = 1; a <= p.c; ++a) {
    auto members = p.members(a).elements();
    const std::size_t m = members.size();
    if (m > 62) {
      truncated = true;
      continue;
    }
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      std::vector<Vertex> set;
      for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1U) set.push_back(members[i]);
      auto len = static_cast<std::int64_t>(set.size());
      if (len > s) continue;
      if (len < s) {
        out.push_back({set});
      } else {
        for (std::size_t j = 0; j < set.size(); ++j) {
          std::vector<Vertex> seq;
          if (plus) seq.push_back(set[j]);
          for (std::size_t i = 0; i < set.size(); ++i)
            if (i != j) seq.push_back(set[i]);
          if (!plus) seq.push_back(set[j]);
          out.push_back({seq});
        }
      }
      if (out.size() > limit) {
        truncated = true;
        return out;
      }
    }
  }
  return out;
}

// Calls visit(indices) for every subset of {0..n-1} with at most r elements,
// in increasing size then lexicographic order. visit returns false to stop.
inline bool for_each_small_subset(std::size_t n, std::int64_t r, const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> idx;
  if (!visit(idx)) return false;
  auto max_size = static_cast<std::size_t>(std::max<std::int64_t>(0, std::min<std::int64_t>(r, static_cast<std::int64_t>(n))));
  for (std::size_t size = 1; size <= max_size; ++size) {
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      if (!visit(idx)) return false;
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return true;
}

}  // namespace detail

// All (r,s,t)-restricted subsets of V(G), each with a witness, generated from
// canonical generator triples (A, B, S). cap bounds the number of triples
// examined; when hit, the result is flagged incomplete.
inline RestrictedEnumeration enumerate_restricted_sets(const ProblemInstance& inst, const Parameters& params,
                                                       std::uint64_t cap) {
  RestrictedEnumeration out;
  const auto& g = inst.graph;
  const auto& p = inst.partition;
  bool truncated = false;
  auto plus_seqs = detail::canonical_sequences(p, params.s, true, cap, truncated);
  auto minus_seqs = detail::canonical_sequences(p, params.s, false, cap, truncated);
  if (truncated) return out;

  std::vector<VertexSet> plus_of, minus_of;
  for (const auto& x : plus_seqs) plus_of.push_back(detail::sequence_closure(g, p, x, params.s, true));
  for (const auto& x : minus_seqs) minus_of.push_back(detail::sequence_closure(g, p, x, params.s, false));

  const std::uint64_t all_sets = g.order() < 63 ? (std::uint64_t{1} << g.order()) : ~std::uint64_t{0};
  std::unordered_set<VertexSet> seen;
  std::set<std::pair<VertexSet, VertexSet>> seen_generators;
  bool stopped = false;

  auto emit = [&](const VertexSet& d, const SequenceFamily& af, const SequenceFamily& bf, const VertexSet& slack) {
    if (seen.insert(d).second) out.sets.push_back({d, {af, bf, slack}});
  };

  detail::for_each_small_subset(plus_seqs.size(), params.r, [&](const std::vector<std::size_t>& bi) {
    VertexSet bplus;
    for (auto i : bi) bplus |= plus_of[i];
    return detail::for_each_small_subset(minus_seqs.size(), params.r, [&](const std::vector<std::size_t>& ai) {
      VertexSet aminus;
      for (auto i : ai) aminus |= minus_of[i];
      const VertexSet overlap = bplus & aminus;
      if (static_cast<std::int64_t>(overlap.size()) > params.t) return true;
      const VertexSet base = bplus - aminus;
      if (!seen_generators.emplace(base, overlap).second) return true;
      SequenceFamily af, bf;
      for (auto i : ai) af.push_back(minus_seqs[i]);
      for (auto i : bi) bf.push_back(plus_seqs[i]);
      auto extra = overlap.elements();
      if (extra.size() >= 63) {
        stopped = true;
        return false;
      }
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << extra.size()); ++mask) {
        if (++out.triples_examined > cap) {
          stopped = true;
          return false;
        }
        VertexSet slack;
        for (std::size_t j = 0; j < extra.size(); ++j)
          if (mask >> j & 1U) slack.insert(extra[j]);
        emit(base | slack, af, bf, slack);
      }
      // every subset of V(G) already found: nothing new can appear
      if (seen.size() == all_sets) {
        out.complete = true;
        return false;
      }
      return true;
    });
  });
  if (!stopped) out.complete = true;
  return out;
}

}  // namespace kdp
