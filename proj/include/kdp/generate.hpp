#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "kdp/core.hpp"

namespace kdp {

class InfeasibleParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Portable draws on top of mt19937_64 (whose output sequence is fixed by the
// standard, unlike the std distributions).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : engine_() % bound; }
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct GeneratorOptions {
  std::uint64_t seed = 1;
  int n = 6;
  int k = 1;
  int c = 1;
  double cross_density = 0.2;
  bool plant_linkage = false;
  // probability that an intra-clique pair gets both orientations
  double both_ways = 0.1;
  // probability that a spare vertex is threaded into a planted path
  double plant_detour = 0.35;
  // probability that a pair of vertices on one planted path is oriented from
  // the later vertex to the earlier one (no shortcut)
  double backward_bias = 0.5;
};

// Deterministic for fixed options. Each clique is made semicomplete; with
// plant_linkage, k disjoint paths are laid down first so the instance is a
// YES instance.
inline ProblemInstance generate_instance(const GeneratorOptions& opt) {
  if (opt.k < 1) throw InfeasibleParameters("k must be at least 1");
  if (opt.n < 2 * opt.k)
    throw InfeasibleParameters("n=" + std::to_string(opt.n) + " is smaller than 2k=" + std::to_string(2 * opt.k));
  if (opt.c < 1 || opt.c > opt.n) throw InfeasibleParameters("c must lie in 1..n");

  SeededRng rng(opt.seed);
  const int n = opt.n;

  std::vector<Vertex> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);

  // every part gets at least one vertex
  CliquePartition part{std::vector<int>(static_cast<std::size_t>(n), 1), opt.c};
  for (int i = 0; i < n; ++i)
    part.assignment[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        i < opt.c ? i + 1 : rng.between(1, opt.c);

  rng.shuffle(perm);
  std::vector<TerminalPair> pairs;
  for (int i = 0; i < opt.k; ++i)
    pairs.push_back({perm[static_cast<std::size_t>(2 * i)], perm[static_cast<std::size_t>(2 * i + 1)]});

  std::vector<char> adj(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  auto set_edge = [&](Vertex u, Vertex v) { adj[static_cast<std::size_t>(u * n + v)] = 1; };
  auto edge = [&](Vertex u, Vertex v) { return adj[static_cast<std::size_t>(u * n + v)] != 0; };

  // (path, position) of planted vertices
  std::vector<std::pair<int, int>> planted(static_cast<std::size_t>(n), {-1, -1});
  if (opt.plant_linkage) {
    std::vector<std::vector<Vertex>> paths(static_cast<std::size_t>(opt.k));
    for (int i = 0; i < opt.k; ++i) paths[static_cast<std::size_t>(i)].push_back(pairs[static_cast<std::size_t>(i)].source);
    for (std::size_t j = static_cast<std::size_t>(2 * opt.k); j < perm.size(); ++j) {
      if (rng.chance(opt.plant_detour)) paths[rng.below(static_cast<std::uint64_t>(opt.k))].push_back(perm[j]);
    }
    for (int i = 0; i < opt.k; ++i) {
      auto& p = paths[static_cast<std::size_t>(i)];
      p.push_back(pairs[static_cast<std::size_t>(i)].sink);
      for (std::size_t j = 1; j < p.size(); ++j) set_edge(p[j - 1], p[j]);
      for (std::size_t j = 0; j < p.size(); ++j) planted[static_cast<std::size_t>(p[j])] = {i, static_cast<int>(j)};
    }
  }

  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      // preference for u->v over v->u; skewed only along a planted path
      double forward = 0.5;
      const auto pu = planted[static_cast<std::size_t>(u)];
      const auto pv = planted[static_cast<std::size_t>(v)];
      if (pu.first >= 0 && pu.first == pv.first)
        forward = pu.second < pv.second ? 1 - opt.backward_bias : opt.backward_bias;
      const double both = opt.both_ways * std::min(1.0, 2 * std::min(forward, 1 - forward));
      if (part.clique_of(u) == part.clique_of(v)) {
        if (edge(u, v) || edge(v, u)) {
          if (rng.chance(both)) {
            set_edge(u, v);
            set_edge(v, u);
          }
        } else if (rng.chance(both)) {
          set_edge(u, v);
          set_edge(v, u);
        } else if (rng.chance(forward)) {
          set_edge(u, v);
        } else {
          set_edge(v, u);
        }
      } else {
        if (rng.chance(opt.cross_density * 2 * forward)) set_edge(u, v);
        if (rng.chance(opt.cross_density * 2 * (1 - forward))) set_edge(v, u);
      }
    }
  }

  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (edge(u, v)) edges.push_back({u, v});

  return ProblemInstance{Digraph::from_edges(n, edges), std::move(part), std::move(pairs)};
}

}  // namespace kdp
