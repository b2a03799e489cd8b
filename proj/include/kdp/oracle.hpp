#pragma once

// Exhaustive ground truth for the k disjoint paths problem. Paths are grown
// in index order, neighbours in ascending id, so the first complete linkage
// found at a given vertex budget is the lexicographically smallest one
// (member 1 first).

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kdp/core.hpp"

namespace kdp {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  std::uint64_t max_nodes = 0;  // 0 = unlimited
};

struct OracleResult {
  bool feasible = false;
  std::optional<std::size_t> min_total_vertices;  // set by minimum_linkage
  std::optional<Linkage> witness;
};

struct MinimumLinkages {
  std::vector<Linkage> linkages;
  std::size_t total_vertices = 0;
  bool cap_exceeded = false;
};

namespace detail {

class LinkageSearch {
 public:
  LinkageSearch(const ProblemInstance& inst, OracleOptions opt)
      : inst_(inst), opt_(opt), used_(static_cast<std::size_t>(inst.n()), 0),
        terminal_(static_cast<std::size_t>(inst.n()), 0), paths_(static_cast<std::size_t>(inst.k())) {
    for (const auto& p : inst.pairs) {
      terminal_[static_cast<std::size_t>(p.source)] = 1;
      terminal_[static_cast<std::size_t>(p.sink)] = 1;
    }
  }

  // Runs the search for linkages with total vertex count <= limit (or exactly
  // limit when exact is set). The visitor returns false to stop.
  template <class Visitor>
  void run(std::size_t limit, bool exact, Visitor&& visit) {
    limit_ = limit;
    exact_ = exact;
    stop_ = false;
    for (auto& p : paths_) p.clear();
    std::fill(used_.begin(), used_.end(), 0);
    count_ = 0;
    auto s0 = inst_.source(0);
    paths_[0].push_back(s0);
    mark(s0);
    extend(0, visit);
    unmark(s0);
    paths_[0].clear();
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  void mark(Vertex v) {
    used_[static_cast<std::size_t>(v)] = 1;
    ++count_;
  }
  void unmark(Vertex v) {
    used_[static_cast<std::size_t>(v)] = 0;
    --count_;
  }

  // BFS distance (edges) from a to b through unused, non-terminal vertices
  // (b itself may be a terminal). max() when unreachable.
  std::size_t distance(Vertex a, Vertex b) const {
    const auto n = static_cast<std::size_t>(inst_.n());
    std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
    std::deque<Vertex> queue{a};
    dist[static_cast<std::size_t>(a)] = 0;
    while (!queue.empty()) {
      Vertex u = queue.front();
      queue.pop_front();
      if (u == b) return dist[static_cast<std::size_t>(u)];
      for (Vertex x : inst_.graph.out_neighbors(u)) {
        auto xi = static_cast<std::size_t>(x);
        if (dist[xi] != std::numeric_limits<std::size_t>::max()) continue;
        if (x != b && (used_[xi] || terminal_[xi])) continue;
        dist[xi] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(x);
      }
    }
    return std::numeric_limits<std::size_t>::max();
  }

  // Lower bound on vertices still to be added; max() when some pair is cut off.
  std::size_t remaining_bound(int i) const {
    constexpr auto inf = std::numeric_limits<std::size_t>::max();
    std::size_t need = 0;
    Vertex cur = paths_[static_cast<std::size_t>(i)].back();
    if (cur != inst_.sink(i)) {
      auto d = distance(cur, inst_.sink(i));
      if (d == inf) return inf;
      need += d;
    }
    for (int j = i + 1; j < inst_.k(); ++j) {
      auto d = distance(inst_.source(j), inst_.sink(j));
      if (d == inf) return inf;
      need += d + 1;
    }
    return need;
  }

  template <class Visitor>
  void extend(int i, Visitor& visit) {
    if (stop_) return;
    if (++nodes_ > opt_.max_nodes && opt_.max_nodes) throw BudgetExceeded("oracle node budget exhausted");

    auto bound = remaining_bound(i);
    if (bound == std::numeric_limits<std::size_t>::max() || count_ + bound > limit_) return;

    auto& path = paths_[static_cast<std::size_t>(i)];
    Vertex cur = path.back();
    if (cur == inst_.sink(i)) {
      if (i + 1 == inst_.k()) {
        if (!exact_ || count_ == limit_) {
          Linkage l;
          for (const auto& p : paths_) l.members.push_back(DiPath{p});
          if (!visit(l)) stop_ = true;
        }
        return;
      }
      Vertex s = inst_.source(i + 1);
      paths_[static_cast<std::size_t>(i + 1)].push_back(s);
      mark(s);
      extend(i + 1, visit);
      unmark(s);
      paths_[static_cast<std::size_t>(i + 1)].pop_back();
      return;
    }
    for (Vertex x : inst_.graph.out_neighbors(cur)) {
      auto xi = static_cast<std::size_t>(x);
      if (used_[xi]) continue;
      if (terminal_[xi] && x != inst_.sink(i)) continue;
      path.push_back(x);
      mark(x);
      extend(i, visit);
      unmark(x);
      path.pop_back();
      if (stop_) return;
    }
  }

  const ProblemInstance& inst_;
  OracleOptions opt_;
  std::vector<char> used_;
  std::vector<char> terminal_;
  std::vector<std::vector<Vertex>> paths_;
  std::size_t count_ = 0;
  std::size_t limit_ = 0;
  bool exact_ = false;
  bool stop_ = false;
  std::uint64_t nodes_ = 0;
};

// Smallest total vertex count of a linkage, if any.
inline std::optional<std::size_t> minimum_total(const ProblemInstance& inst, LinkageSearch& search) {
  bool any = false;
  search.run(static_cast<std::size_t>(inst.n()), false, [&](const Linkage&) {
    any = true;
    return false;
  });
  if (!any) return std::nullopt;
  for (auto total = static_cast<std::size_t>(2 * inst.k()); total <= static_cast<std::size_t>(inst.n()); ++total) {
    bool found = false;
    search.run(total, true, [&](const Linkage&) {
      found = true;
      return false;
    });
    if (found) return total;
  }
  return std::nullopt;  // unreachable for a feasible instance
}

}  // namespace detail

// Throws BudgetExceeded when the node cap is hit, so "unknown" is never
// reported as "no".
inline OracleResult exists_linkage(const ProblemInstance& inst, OracleOptions opt = {}) {
  detail::LinkageSearch search(inst, opt);
  OracleResult result;
  search.run(static_cast<std::size_t>(inst.n()), false, [&](const Linkage& l) {
    result.feasible = true;
    result.witness = l;
    return false;
  });
  return result;
}

// Minimum |V(L)|; ties broken by the lexicographically smallest member
// sequence.
inline OracleResult minimum_linkage(const ProblemInstance& inst, OracleOptions opt = {}) {
  detail::LinkageSearch search(inst, opt);
  OracleResult result;
  auto total = detail::minimum_total(inst, search);
  if (!total) return result;
  search.run(*total, true, [&](const Linkage& l) {
    result.witness = l;
    return false;
  });
  result.feasible = true;
  result.min_total_vertices = *total;
  return result;
}

// All minimum linkages in lexicographic order, at most cap of them.
inline MinimumLinkages enumerate_minimum_linkages(const ProblemInstance& inst, std::size_t cap, OracleOptions opt = {}) {
  detail::LinkageSearch search(inst, opt);
  MinimumLinkages out;
  auto total = detail::minimum_total(inst, search);
  if (!total) return out;
  out.total_vertices = *total;
  search.run(*total, true, [&](const Linkage& l) {
    if (out.linkages.size() == cap) {
      out.cap_exceeded = true;
      return false;
    }
    out.linkages.push_back(l);
    return true;
  });
  return out;
}

}  // namespace kdp
