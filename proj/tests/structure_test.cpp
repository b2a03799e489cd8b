#include <gtest/gtest.h>

#include "kdp/generate.hpp"
#include "kdp/oracle.hpp"
#include "kdp/params.hpp"
#include "kdp/structure.hpp"
#include "kdp/testing/brute_force.hpp"

using namespace kdp;
namespace bf = kdp::testing;

namespace {

ProblemInstance t1() {
  std::vector<Edge> es{{0, 1}, {1, 2}, {2, 0}};
  return {Digraph::from_edges(3, es), CliquePartition::single(3), {{0, 2}}};
}

// One clique on 0..n-1 carrying the path 0->1->...->n-1. Every other pair
// points backwards unless listed in `forward`.
ProblemInstance path_clique(int n, const std::vector<Edge>& forward = {}) {
  std::vector<Edge> es;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      bool fwd = v == u + 1 || std::find(forward.begin(), forward.end(), Edge{u, v}) != forward.end();
      es.push_back(fwd ? Edge{u, v} : Edge{v, u});
    }
  return {Digraph::from_edges(n, es), CliquePartition::single(n), {{0, n - 1}}};
}

Linkage straight(int n) {
  DiPath p;
  for (int v = 0; v < n; ++v) p.vertices.push_back(v);
  return Linkage{{p}};
}

VertexSet random_subset(SeededRng& rng, int n, double p) {
  VertexSet s;
  for (int v = 0; v < n; ++v)
    if (rng.chance(p)) s.insert(v);
  return s;
}

std::vector<Vertex> random_path(SeededRng& rng, int len, int n) {
  std::vector<Vertex> vs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) vs[static_cast<std::size_t>(i)] = i;
  rng.shuffle(vs);
  vs.resize(static_cast<std::size_t>(len));
  return vs;
}

}  // namespace

TEST(Wiggle, Examples) {
  std::vector<Vertex> abcd{0, 1, 2, 3};
  EXPECT_EQ(wiggle_number(abcd, VertexSet{0, 2}, VertexSet{1, 3}), 2u);
  EXPECT_EQ(wiggle_number(abcd, VertexSet{}, VertexSet{1, 3}), 0u);
  EXPECT_EQ(wiggle_number(abcd, VertexSet{0, 2}, VertexSet{}), 0u);
  std::vector<Vertex> abc{0, 1, 2};
  EXPECT_EQ(wiggle_number(abc, VertexSet{1}, VertexSet{0}), 0u);
  EXPECT_THROW(wiggle_number(abc, VertexSet{1}, VertexSet{1}), ContractViolation);
}

TEST(WiggleProperty, GreedyEqualsBruteForce) {
  SeededRng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    int len = rng.between(1, 10);
    auto path = random_path(rng, len, 12);
    VertexSet x, y;
    for (Vertex v : path) {
      auto roll = rng.below(3);
      if (roll == 0) x.insert(v);
      if (roll == 1) y.insert(v);
    }
    EXPECT_EQ(wiggle_number(path, x, y), bf::brute_wiggle(path, x, y)) << "trial " << trial;
  }
}

TEST(WiggleProperty, MonotoneInBothSets) {
  SeededRng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    auto path = random_path(rng, rng.between(1, 10), 10);
    VertexSet x = random_subset(rng, 10, 0.4);
    VertexSet y = random_subset(rng, 10, 0.5) - x;
    VertexSet x2 = x & random_subset(rng, 10, 0.6);
    VertexSet y2 = y & random_subset(rng, 10, 0.6);
    EXPECT_LE(wiggle_number(path, x2, y2), wiggle_number(path, x, y));
  }
}

TEST(PlanarMatching, Examples) {
  // q1=0 q2=1 r1=2 r2=3
  std::vector<Vertex> q{0, 1}, r{2, 3};
  VertexSet x{0, 1}, y{2, 3};
  std::vector<Edge> parallel{{0, 2}, {1, 3}}, crossed{{0, 3}, {1, 2}};
  auto g1 = Digraph::from_edges(4, parallel);
  auto g2 = Digraph::from_edges(4, crossed);

  auto none = max_planar_matching(g1, q, r, VertexSet{}, y, VertexSet{}, 2);
  EXPECT_EQ(none.cardinality, 0u);
  EXPECT_TRUE(none.witness.members.empty());

  auto two = max_planar_matching(g1, q, r, x, y, VertexSet{}, 2);
  EXPECT_EQ(two.cardinality, 2u);
  ASSERT_EQ(two.witness.members.size(), 2u);
  EXPECT_EQ(two.witness.members[0].vertices, (std::vector<Vertex>{0, 2}));
  EXPECT_EQ(two.witness.members[1].vertices, (std::vector<Vertex>{1, 3}));

  EXPECT_EQ(max_planar_matching(g2, q, r, x, y, VertexSet{}, 2).cardinality, 1u);
  EXPECT_EQ(bf::brute_planar_matching(g2, q, r, x, y, VertexSet{}), 1u);
  EXPECT_THROW(max_planar_matching(g1, q, r, x, y, VertexSet{}, 0), ContractViolation);
}

TEST(PlanarMatching, MiddleVerticesAvoidForbidden) {
  // 0 -> 4 -> 2 is the only route
  std::vector<Edge> es{{0, 4}, {4, 2}};
  auto g = Digraph::from_edges(5, es);
  std::vector<Vertex> q{0}, r{2};
  EXPECT_EQ(max_planar_matching(g, q, r, VertexSet{0}, VertexSet{2}, VertexSet{}, 4).cardinality, 1u);
  EXPECT_EQ(max_planar_matching(g, q, r, VertexSet{0}, VertexSet{2}, VertexSet{4}, 4).cardinality, 0u);
}

TEST(PlanarMatchingProperty, EqualsExhaustiveEnumeration) {
  SeededRng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 12;
    std::vector<Edge> es;
    double p = 0.15 + 0.3 * rng.unit();
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && rng.chance(p)) es.push_back({u, v});
    auto g = Digraph::from_edges(n, es);
    auto all = random_path(rng, n, n);
    std::vector<Vertex> q(all.begin(), all.begin() + rng.between(1, 6));
    std::vector<Vertex> r = rng.chance(0.3) ? q : std::vector<Vertex>(all.begin() + 6, all.begin() + 6 + rng.between(1, 6));
    VertexSet x, y;
    for (Vertex v : q)
      if (rng.chance(0.6)) x.insert(v);
    for (Vertex v : r)
      if (!x.contains(v) && rng.chance(0.7)) y.insert(v);
    VertexSet forbidden = random_subset(rng, n, 0.3);
    auto exact = max_planar_matching(g, q, r, x, y, forbidden, 64);
    EXPECT_EQ(exact.cardinality, bf::brute_planar_matching(g, q, r, x, y, forbidden)) << "trial " << trial;
    // the witness is itself a planar matching of that size
    VertexSet used;
    int last_q = -1, last_r = -1;
    for (const auto& m : exact.witness.members) {
      for (Vertex v : m.vertices) {
        EXPECT_FALSE(used.contains(v));
        used.insert(v);
      }
      int qa = static_cast<int>(std::find(q.begin(), q.end(), m.vertices.front()) - q.begin());
      int rb = static_cast<int>(std::find(r.begin(), r.end(), m.vertices.back()) - r.begin());
      EXPECT_GT(qa, last_q);
      EXPECT_GT(rb, last_r);
      last_q = qa;
      last_r = rb;
    }
    EXPECT_EQ(exact.witness.members.size(), exact.cardinality);
  }
}

TEST(CAcceptable, Examples) {
  auto inst = t1();
  Linkage l{{DiPath{{0, 1, 2}}}};
  EXPECT_FALSE(check_c_acceptable(inst, l, 1, VertexSet{0}));

  auto v = check_c_acceptable(inst, l, 1, VertexSet{0, 2});
  ASSERT_TRUE(v);
  EXPECT_EQ(v->condition, AcceptCondition::terminals);

  auto four = path_clique(4);
  auto p = check_c_acceptable(four, straight(4), 1, VertexSet{0, 2});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->condition, AcceptCondition::prefix);

  EXPECT_THROW(check_c_acceptable(inst, l, 1, VertexSet{5}), ContractViolation);
}

TEST(CAcceptable, MatchingViolationOnNonMinimumLinkage) {
  // path s b1 b2 b3 b4 a1 a2 a3 a4 t with shortcuts b_i -> a_i
  auto inst = path_clique(10, {{1, 5}, {2, 6}, {3, 7}, {4, 8}});
  auto l = straight(10);
  auto v = check_c_acceptable(inst, l, 1, VertexSet{0, 1, 2, 3, 4});
  ASSERT_TRUE(v);
  EXPECT_EQ(v->condition, AcceptCondition::matching);

  AcceptabilityOptions off;
  off.check_matching = false;
  EXPECT_FALSE(check_c_acceptable(inst, l, 1, VertexSet{0, 1, 2, 3, 4}, off));

  // three shortcuts stay below k^2+k+2 = 4
  EXPECT_FALSE(check_c_acceptable(inst, l, 1, VertexSet{0, 1, 2, 3}));

  auto params = compute_parameters(1, 1);
  auto step = extend_acceptable(inst, l, params, VertexSet{0, 1, 2, 3});
  EXPECT_EQ(step.kind, ExtensionStep::Kind::stuck);
  auto order = vertex_order(inst, l, params);
  EXPECT_FALSE(order.ok);
  EXPECT_EQ(order.failing_set, (VertexSet{0, 1, 2, 3}));
}

TEST(Acceptable, Examples) {
  auto inst = t1();
  Linkage l{{DiPath{{0, 1, 2}}}};
  auto params = compute_parameters(1, 1);
  EXPECT_FALSE(check_acceptable(inst, l, params, VertexSet{0}));
  EXPECT_FALSE(check_acceptable(inst, l, params, VertexSet{0, 1}));
  auto v = check_acceptable(inst, l, params, VertexSet{0, 2});
  ASSERT_TRUE(v);
  EXPECT_EQ(v->condition, AcceptCondition::terminals);
  EXPECT_TRUE(is_acceptable(inst, l, params, VertexSet{0}));
}

TEST(Acceptable, WiggleBoundBetweenCliques) {
  // member alternates between cliques {0,2,4,6,...} and {1,3,5,...}
  const int n = 8;
  std::vector<Edge> es;
  std::vector<int> part;
  for (int v = 0; v < n; ++v) part.push_back(v % 2 + 1);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (v == u + 1)
        es.push_back({u, v});
      else if (u % 2 == v % 2)
        es.push_back({v, u});
  ProblemInstance inst{Digraph::from_edges(n, es), CliquePartition{part, 2}, {{0, n - 1}}};
  validate_instance(inst);
  auto l = straight(n);
  ParameterOverrides ov;
  ov.z = 1;
  auto tight = compute_parameters(1, 2, ov);
  // B = {0,2,4}: B&C1 = {0,2,4}, A&C2 = {1,3,5,7}; wiggle 3 > 1
  auto v = check_acceptable(inst, l, tight, VertexSet{0, 2, 4});
  ASSERT_TRUE(v);
  EXPECT_EQ(v->condition, AcceptCondition::wiggle);
  EXPECT_FALSE(check_acceptable(inst, l, compute_parameters(1, 2), VertexSet{0, 1, 2, 3}));
}

TEST(Extension, T1) {
  auto inst = t1();
  Linkage l{{DiPath{{0, 1, 2}}}};
  auto params = compute_parameters(1, 1);
  auto a = extend_acceptable(inst, l, params, VertexSet{0});
  EXPECT_EQ(a.kind, ExtensionStep::Kind::extended);
  EXPECT_EQ(a.vertex, 1);
  EXPECT_EQ(extend_acceptable(inst, l, params, VertexSet{0, 1}).kind, ExtensionStep::Kind::exhausted);
  EXPECT_THROW(extend_acceptable(inst, l, params, VertexSet{0, 2}), ContractViolation);
}

TEST(VertexOrder, Examples) {
  auto inst = t1();
  auto params = compute_parameters(1, 1);
  auto r = vertex_order(inst, Linkage{{DiPath{{0, 1, 2}}}}, params);
  ASSERT_TRUE(r.ok) << r.failure;
  EXPECT_EQ(r.enumeration.order, (std::vector<Vertex>{1}));
  EXPECT_EQ(r.enumeration.prefix_acceptable.size(), 2u);

  auto four = path_clique(4);
  auto r4 = vertex_order(four, straight(4), params);
  ASSERT_TRUE(r4.ok) << r4.failure;
  EXPECT_EQ(r4.enumeration.order, (std::vector<Vertex>{1, 2}));
  EXPECT_EQ(prefix_set(four, r4.enumeration.order, 1), (VertexSet{0, 1}));
}

TEST(VertexOrderProperty, MinimumLinkagesNeverStuck) {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    SeededRng rng(seed * 101);
    GeneratorOptions opt;
    opt.seed = seed;
    opt.k = rng.between(1, 2);
    opt.c = rng.between(1, 2);
    opt.n = rng.between(2 * opt.k + 2, 9);
    opt.cross_density = 0.1 + 0.2 * rng.unit();
    opt.plant_linkage = true;
    opt.backward_bias = 0.9;
    auto inst = generate_instance(opt);
    auto m = minimum_linkage(inst);
    ASSERT_TRUE(m.feasible);
    auto params = compute_parameters(opt.k, opt.c);
    auto r = vertex_order(inst, *m.witness, params);
    ASSERT_TRUE(r.ok) << "seed " << seed << ": " << r.failure;
    const auto& e = r.enumeration;
    auto internal = m.witness->vertex_set() - inst.terminals();
    EXPECT_EQ(e.order.size(), internal.size());
    EXPECT_EQ(VertexSet::from(e.order), internal);
    for (std::size_t h = 0; h <= e.order.size(); ++h) {
      auto b = prefix_set(inst, e.order, h);
      EXPECT_TRUE(is_acceptable(inst, *m.witness, params, b));
      auto a = m.witness->vertex_set() - b;
      for (const auto& p : m.witness->members)
        EXPECT_LE(static_cast<std::int64_t>(bf::brute_wiggle(p.vertices, b, a)), params.w);
    }
  }
}

// Within one clique, C-acceptable sets reachable by extension can always grow.
TEST(CAcceptableProperty, ExtensionWithinCliqueNeverStalls) {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    SeededRng rng(seed * 7);
    GeneratorOptions opt;
    opt.seed = seed + 5000;
    opt.k = rng.between(1, 2);
    opt.c = rng.between(1, 2);
    opt.n = rng.between(2 * opt.k + 2, 9);
    opt.cross_density = 0.2;
    opt.plant_linkage = true;
    opt.backward_bias = 0.9;
    auto inst = generate_instance(opt);
    auto m = minimum_linkage(inst);
    ASSERT_TRUE(m.feasible);
    const auto& l = *m.witness;
    for (int a = 1; a <= inst.partition.c; ++a) {
      const VertexSet ca = inst.partition.members(a);
      const VertexSet goal = (l.vertex_set() & ca) - inst.terminals();
      VertexSet b = inst.sources() & ca;
      ASSERT_FALSE(check_c_acceptable(inst, l, a, b));
      while (!(goal - b).empty()) {
        bool grew = false;
        for (Vertex v : (goal - b).elements()) {
          VertexSet next = b;
          next.insert(v);
          if (is_c_acceptable(inst, l, a, next)) {
            b = next;
            grew = true;
            break;
          }
        }
        ASSERT_TRUE(grew) << "seed " << seed << " clique " << a;
      }
    }
  }
}

TEST(DisjointSegments, SingleHostTakesMinimalPrefix) {
  auto l = straight(6);
  std::vector<DiPath> hosts{l.members[0]};
  std::vector<std::pair<VertexSet, VertexSet>> sets{{VertexSet{0, 2, 4}, VertexSet{1, 3, 5}}};
  auto r = disjoint_wiggle_segments(l, hosts, sets, 2);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].vertices, (std::vector<Vertex>{0, 1, 2, 3}));
}

TEST(DisjointSegments, TwoInterleavedHosts) {
  // X1=even<6, Y1=odd<6 and X2,Y2 on 6..11; both hosts are the whole member
  auto l = straight(12);
  std::vector<DiPath> hosts{l.members[0], l.members[0]};
  std::vector<std::pair<VertexSet, VertexSet>> sets{{VertexSet{0, 2, 4}, VertexSet{1, 3, 5}},
                                                    {VertexSet{6, 8, 10}, VertexSet{7, 9, 11}}};
  auto r = disjoint_wiggle_segments(l, hosts, sets, 1);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].vertices, (std::vector<Vertex>{0, 1}));
  EXPECT_GE(wiggle_number(r[1].vertices, sets[1].first, sets[1].second), 1u);
  EXPECT_FALSE(VertexSet::from(r[0].vertices)
                   .intersects(VertexSet::from(r[1].vertices)));
}

TEST(DisjointSegments, Preconditions) {
  auto l = straight(6);
  std::vector<DiPath> hosts{l.members[0]};
  std::vector<std::pair<VertexSet, VertexSet>> low{{VertexSet{0}, VertexSet{1}}};
  EXPECT_THROW(disjoint_wiggle_segments(l, hosts, low, 2), PreconditionViolation);
  std::vector<std::pair<VertexSet, VertexSet>> overlap{{VertexSet{0, 1}, VertexSet{1, 3}}};
  EXPECT_THROW(disjoint_wiggle_segments(l, hosts, overlap, 1), PreconditionViolation);
  std::vector<DiPath> stray{DiPath{{3, 1}}};
  std::vector<std::pair<VertexSet, VertexSet>> ok{{VertexSet{3}, VertexSet{1}}};
  EXPECT_THROW(disjoint_wiggle_segments(l, stray, ok, 1), PreconditionViolation);
}

TEST(DisjointSegmentsProperty, OutputIsDisjointAndWiggly) {
  SeededRng rng(21);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 200; ++trial) {
    const int n = 14;
    auto order = random_path(rng, n, n);
    int cut = rng.between(4, 10);
    Linkage l{{DiPath{{order.begin(), order.begin() + cut}}, DiPath{{order.begin() + cut, order.end()}}}};
    const std::size_t m = static_cast<std::size_t>(rng.between(1, 3));
    const std::size_t w = static_cast<std::size_t>(rng.between(1, 2));
    std::vector<DiPath> hosts;
    std::vector<std::pair<VertexSet, VertexSet>> sets(m);
    for (std::size_t i = 0; i < m; ++i) {
      const auto& mem = l.members[rng.below(2)].vertices;
      std::size_t a = rng.below(mem.size());
      std::size_t b = a + 1 + rng.below(mem.size() - a);
      hosts.push_back(DiPath{{mem.begin() + static_cast<std::ptrdiff_t>(a), mem.begin() + static_cast<std::ptrdiff_t>(b)}});
    }
    for (int v = 0; v < n; ++v) {
      auto slot = rng.below(2 * m + 1);
      if (slot == 2 * m) continue;
      (slot % 2 == 0 ? sets[slot / 2].first : sets[slot / 2].second).insert(v);
    }
    bool premise = true;
    for (std::size_t i = 0; i < m; ++i)
      premise = premise && wiggle_number(hosts[i].vertices, sets[i].first, sets[i].second) >= m * w;
    if (!premise) continue;
    ++checked;
    auto r = disjoint_wiggle_segments(l, hosts, sets, w);
    ASSERT_EQ(r.size(), m);
    VertexSet used;
    for (std::size_t i = 0; i < m; ++i) {
      EXPECT_GE(bf::brute_wiggle(r[i].vertices, sets[i].first, sets[i].second), w);
      const auto& hv = hosts[i].vertices;
      EXPECT_NE(std::search(hv.begin(), hv.end(), r[i].vertices.begin(), r[i].vertices.end()), hv.end());
      for (Vertex v : r[i].vertices) {
        EXPECT_FALSE(used.contains(v));
        used.insert(v);
      }
    }
  }
  EXPECT_GE(checked, 50);
}
