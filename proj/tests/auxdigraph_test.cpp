#include <gtest/gtest.h>

#include "kdp/auxdigraph.hpp"
#include "kdp/generate.hpp"
#include "kdp/oracle.hpp"
#include "kdp/params.hpp"
#include "kdp/testing/brute_force.hpp"

using namespace kdp;

namespace {

ProblemInstance t1() {
  std::vector<Edge> es{{0, 1}, {1, 2}, {2, 0}};
  return {Digraph::from_edges(3, es), CliquePartition::single(3), {{0, 2}}};
}

// T1 without 1->2; c=2 keeps the partition semicomplete
ProblemInstance t1_cut() {
  std::vector<Edge> es{{0, 1}, {2, 0}};
  return {Digraph::from_edges(3, es), CliquePartition{{1, 1, 2}, 2}, {{0, 2}}};
}

HVertex hv(std::initializer_list<ColouredEdge> y, VertexSet d) { return HVertex{ColouredEdgeSet(y), std::move(d)}; }

ProblemInstance random_instance(std::uint64_t seed, int max_n) {
  SeededRng rng(seed * 7919);
  GeneratorOptions opt;
  opt.seed = seed;
  opt.k = rng.between(1, 2);
  opt.c = rng.between(1, 2);
  opt.n = rng.between(2 * opt.k, max_n);
  opt.c = std::min(opt.c, opt.n);
  opt.plant_linkage = rng.chance(0.5);
  opt.cross_density = rng.unit() * (opt.plant_linkage ? 0.35 : 0.15);
  opt.plant_detour = 0.5 + 0.5 * rng.unit();
  opt.backward_bias = 0.5 + 0.5 * rng.unit();
  return generate_instance(opt);
}

}  // namespace

TEST(Parameters, SpotValues) {
  auto a = compute_parameters(1, 1);
  EXPECT_EQ((std::vector<std::int64_t>{a.z, a.w, a.r, a.s, a.t, a.K}), (std::vector<std::int64_t>{6, 1, 1, 5, 19, 1}));
  EXPECT_EQ(a.h_size_exponent(), 28);
  auto b = compute_parameters(2, 1);
  EXPECT_EQ((std::vector<std::int64_t>{b.z, b.w, b.r, b.s, b.t, b.K}), (std::vector<std::int64_t>{11, 1, 2, 9, 120, 2}));
  auto c = compute_parameters(2, 2);
  EXPECT_EQ((std::vector<std::int64_t>{c.z, c.w, c.r, c.s, c.t, c.K}), (std::vector<std::int64_t>{36, 75, 300, 9, 13856, 298}));
  EXPECT_FALSE(c.overridden);
  EXPECT_THROW(compute_parameters(0, 1), std::invalid_argument);
  EXPECT_THROW(compute_parameters(1, -2), std::invalid_argument);
}

TEST(Parameters, MatchExpandedFormulas) {
  for (int k = 1; k <= 5; ++k)
    for (int c = 1; c <= 5; ++c) {
      auto p = compute_parameters(k, c);
      auto e = kdp::testing::expanded_parameters(k, c);
      EXPECT_EQ(p.z, e.z);
      EXPECT_EQ(p.w, e.w);
      EXPECT_EQ(p.r, e.r);
      EXPECT_EQ(p.s, e.s);
      EXPECT_EQ(p.t, e.t);
      EXPECT_EQ(p.K, e.K);
    }
}

TEST(Parameters, OverridesCascade) {
  ParameterOverrides ov;
  ov.z = 0;
  auto p = compute_parameters(1, 2, ov);
  EXPECT_TRUE(p.overridden);
  EXPECT_EQ(p.z, 0);
  EXPECT_EQ(p.w, 2 * 1 * 1 + 1);
  EXPECT_EQ(p.r, 2 * p.w);
  ov.w = 7;
  EXPECT_EQ(compute_parameters(1, 2, ov).w, 7);
}

TEST(EdgeFamily, Examples) {
  auto inst = t1();
  auto params = compute_parameters(1, 1);
  EXPECT_TRUE(is_edge_family({}, inst, params));
  EXPECT_TRUE(is_edge_family({{0, 1, 1}}, inst, params));
  EXPECT_EQ(check_edge_family({{0, 2, 1}}, inst, params), EdgeFamilyClause::not_an_edge);
  EXPECT_EQ(check_edge_family({{0, 1, 2}}, inst, params), EdgeFamilyClause::colour_range);
  EXPECT_EQ(check_edge_family({{0, 1, 1}, {1, 2, 1}}, inst, params), EdgeFamilyClause::cardinality);
  EXPECT_EQ(check_edge_family({{2, 0, 1}}, inst, params), EdgeFamilyClause::terminal_direction);

  // 0->2, 1->2 share a head
  std::vector<Edge> es{{0, 2}, {1, 2}, {0, 1}, {2, 3}, {3, 0}, {3, 1}};
  ProblemInstance four{Digraph::from_edges(4, es), CliquePartition::single(4), {{0, 3}}};
  ParameterOverrides ov;
  ov.K = 4;
  auto wide = compute_parameters(1, 1, ov);
  EXPECT_EQ(check_edge_family({{0, 2, 1}, {1, 2, 1}}, four, wide), EdgeFamilyClause::shared_head);
  EXPECT_EQ(check_edge_family({{0, 1, 1}, {0, 2, 1}}, four, wide), EdgeFamilyClause::shared_tail);
  EXPECT_STREQ(to_string(EdgeFamilyClause::shared_head), "same-head");
}

TEST(EdgeFamily, ColourRules) {
  // s1=0 t1=3, s2=1 t2=4; path 0->2->3 and 1->4
  std::vector<Edge> es{{0, 2}, {2, 3}, {1, 4}, {2, 4}};
  ProblemInstance inst{Digraph::from_edges(5, es), CliquePartition{{1, 2, 3, 4, 5}, 5}, {{0, 3}, {1, 4}}};
  auto params = compute_parameters(2, 1);
  EXPECT_TRUE(is_edge_family({{0, 2, 1}, {1, 4, 2}}, inst, params));
  EXPECT_EQ(check_edge_family({{0, 2, 2}}, inst, params), EdgeFamilyClause::terminal_colour);
  EXPECT_EQ(check_edge_family({{2, 4, 1}}, inst, params), EdgeFamilyClause::terminal_colour);
  EXPECT_EQ(check_edge_family({{0, 2, 1}, {2, 4, 2}}, inst, params), EdgeFamilyClause::mixed_colour);
}

TEST(HAdjacency, Examples) {
  auto a = hv({{0, 1, 1}}, VertexSet{0});
  auto b = hv({{1, 2, 1}}, VertexSet{0, 1});
  EXPECT_TRUE(h_adjacent(a, b));
  EXPECT_FALSE(h_adjacent(b, a));
  EXPECT_FALSE(h_adjacent(a, a));
  EXPECT_FALSE(h_adjacent(a, hv({{1, 2, 1}}, VertexSet{1})));
  // middle vertex already in D
  EXPECT_FALSE(h_adjacent(hv({{0, 1, 1}}, VertexSet{0, 1}), b));
  // colours differ
  EXPECT_FALSE(h_adjacent(a, hv({{1, 2, 2}}, VertexSet{0, 1})));
  EXPECT_TRUE(one_end_in(a.y, a.d));
  EXPECT_FALSE(one_end_in(a.y, VertexSet{0, 1}));
}

TEST(HAdjacency, TerminalMembership) {
  auto inst = t1();
  auto s = s0_t0_membership(hv({{0, 1, 1}}, VertexSet{0}), inst);
  EXPECT_TRUE(s.s0);
  EXPECT_FALSE(s.t0);
  auto t = s0_t0_membership(hv({{1, 2, 1}}, VertexSet{0, 1}), inst);
  EXPECT_FALSE(t.s0);
  EXPECT_TRUE(t.t0);
  auto e = s0_t0_membership(hv({}, VertexSet{}), inst);
  EXPECT_FALSE(e.s0 || e.t0);
}

TEST(HSearch, T1Explicit) {
  auto inst = t1();
  auto params = compute_parameters(1, 1);
  auto r = find_h_path(inst, params, SearchMode::explicit_sets);
  ASSERT_EQ(r.status, HStatus::found);
  ASSERT_TRUE(r.path);
  ASSERT_EQ(r.path->length(), 2u);
  EXPECT_EQ(r.path->vertices[0], hv({{0, 1, 1}}, VertexSet{0}));
  EXPECT_EQ(r.path->vertices[1], hv({{1, 2, 1}}, VertexSet{0, 1}));
  EXPECT_EQ(r.restricted_sets, 8u);
  EXPECT_TRUE(r.enumeration_complete);
  EXPECT_EQ(extract_linkage(*r.path, inst), (Linkage{{DiPath{{0, 1, 2}}}}));
  EXPECT_EQ(dump_hpath(*r.path), "stage 0 Y 0 1 1 D 0\nstage 1 Y 1 2 1 D 0 1\n");
}

TEST(HSearch, CutT1IsCertifiedNo) {
  auto inst = t1_cut();
  validate_instance(inst);
  auto params = compute_parameters(1, 2);
  auto r = find_h_path(inst, params, SearchMode::powerset);
  EXPECT_EQ(r.status, HStatus::no_path);
  EXPECT_TRUE(r.certified);
  EXPECT_FALSE(r.path);
  auto e = find_h_path(inst, params, SearchMode::explicit_sets);
  EXPECT_EQ(e.status, HStatus::no_path);
  EXPECT_TRUE(e.certified);
}

TEST(HSearch, OverriddenNoIsInconclusive) {
  auto inst = t1_cut();
  ParameterOverrides ov;
  ov.s = 5;
  auto params = compute_parameters(1, 2, ov);
  auto r = find_h_path(inst, params, SearchMode::explicit_sets);
  EXPECT_EQ(r.status, HStatus::no_path);
  EXPECT_FALSE(r.certified);

  ParameterOverrides zero;
  zero.K = 0;
  auto p = find_h_path(t1(), compute_parameters(1, 1, zero), SearchMode::powerset);
  EXPECT_EQ(p.status, HStatus::no_path);
  EXPECT_FALSE(p.certified);
}

TEST(HSearch, CappedEnumerationIsInconclusive) {
  SearchBudget b;
  b.restricted_cap = 2;
  auto r = find_h_path(t1_cut(), compute_parameters(1, 2), SearchMode::explicit_sets, b);
  EXPECT_FALSE(r.enumeration_complete);
  EXPECT_FALSE(r.certified);
}

TEST(HSearch, StateBudget) {
  GeneratorOptions opt;
  opt.seed = 4;
  opt.n = 10;
  opt.k = 2;
  opt.c = 2;
  auto inst = generate_instance(opt);
  SearchBudget b;
  b.max_states = 3;
  auto r = find_h_path(inst, compute_parameters(2, 2), SearchMode::powerset, b);
  EXPECT_EQ(r.status, HStatus::budget_exceeded);
  EXPECT_FALSE(r.path);
}

TEST(HSearch, DirectEdgeGivesSingleState) {
  auto inst = t1();
  inst.graph = inst.graph.with_edge(0, 2);
  for (auto mode : {SearchMode::powerset, SearchMode::explicit_sets}) {
    auto m = minimum_linkage_size_via_h(inst, compute_parameters(1, 1), mode);
    ASSERT_TRUE(m.size);
    EXPECT_EQ(m.search.path->length(), 1u);
    EXPECT_EQ(*m.size, 2u);
    auto both = s0_t0_membership(m.search.path->vertices[0], inst);
    EXPECT_TRUE(both.s0 && both.t0);
  }
}

TEST(HSearch, T1MinimumSize) {
  auto m = minimum_linkage_size_via_h(t1(), compute_parameters(1, 1), SearchMode::powerset);
  ASSERT_TRUE(m.size);
  EXPECT_EQ(*m.size, 3u);
}

TEST(Extract, RejectsMalformedPaths) {
  auto inst = t1();
  HPath stuck{{hv({{0, 1, 1}}, VertexSet{0})}, SearchMode::powerset};
  EXPECT_THROW(extract_linkage(stuck, inst), MalformedUnion);
}

TEST(Trace, T1) {
  auto inst = t1();
  std::vector<Vertex> order{1};
  auto rep = trace_linkage(inst, Linkage{{DiPath{{0, 1, 2}}}}, order, compute_parameters(1, 1));
  EXPECT_TRUE(rep.ok());
  ASSERT_EQ(rep.path.length(), 2u);
  EXPECT_TRUE(h_adjacent(rep.path.vertices[0], rep.path.vertices[1]));
  EXPECT_EQ(rep.path.vertices[0], hv({{0, 1, 1}}, VertexSet{0}));
}

TEST(HSearchProperty, PowersetAgreesWithOracle) {
  int yes = 0, no = 0;
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    auto inst = random_instance(seed, 8);
    auto params = compute_parameters(inst.k(), inst.partition.c);
    auto oracle = minimum_linkage(inst);
    auto r = find_h_path(inst, params, SearchMode::powerset);
    ASSERT_NE(r.status, HStatus::budget_exceeded) << "seed " << seed;
    EXPECT_EQ(r.status == HStatus::found, oracle.feasible) << "seed " << seed;
    if (r.status == HStatus::no_path) {
      EXPECT_TRUE(r.certified);
      ++no;
      continue;
    }
    ++yes;
    const auto& path = *r.path;
    for (std::size_t i = 0; i < path.length(); ++i) {
      EXPECT_TRUE(is_edge_family(path.vertices[i].y, inst, params));
      EXPECT_TRUE(one_end_in(path.vertices[i].y, path.vertices[i].d));
      if (i > 0) {
        EXPECT_TRUE(h_adjacent(path.vertices[i - 1], path.vertices[i]));
        EXPECT_LT(path.vertices[i - 1].d.size(), path.vertices[i].d.size());
      }
    }
    EXPECT_LE(path.length(), static_cast<std::size_t>(inst.n()) + 1);
    EXPECT_TRUE(s0_t0_membership(path.vertices.front(), inst).s0);
    EXPECT_TRUE(s0_t0_membership(path.vertices.back(), inst).t0);
    auto l = extract_linkage(path, inst);
    EXPECT_FALSE(validate_linkage(inst, l));
    EXPECT_LE(l.total_vertices(), path.length() - 1 + 2 * static_cast<std::size_t>(inst.k()));
    EXPECT_EQ(path.length() - 1 + 2 * static_cast<std::size_t>(inst.k()), *oracle.min_total_vertices) << "seed " << seed;
  }
  EXPECT_GT(yes, 20);
  EXPECT_GT(no, 3);
}

TEST(HSearchProperty, ExplicitAgreesWithOracleOnSmallInstances) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    SeededRng rng(seed * 31337);
    GeneratorOptions opt;
    opt.seed = seed;
    opt.k = 1;
    opt.c = 1;
    opt.n = rng.between(2, 6);
    opt.backward_bias = 0.5 + 0.5 * rng.unit();
    auto inst = generate_instance(opt);
    auto oracle = minimum_linkage(inst);
    auto r = find_h_path(inst, compute_parameters(1, 1), SearchMode::explicit_sets);
    ASSERT_TRUE(r.enumeration_complete);
    EXPECT_EQ(r.status == HStatus::found, oracle.feasible) << "seed " << seed;
    if (r.path) {
      EXPECT_FALSE(validate_linkage(inst, extract_linkage(*r.path, inst)));
      EXPECT_EQ(r.path->length() + 1, *oracle.min_total_vertices) << "seed " << seed;
    } else {
      EXPECT_TRUE(r.certified);
    }
  }
}

TEST(TraceProperty, RoundTripsMinimumLinkages) {
  int seen = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    SeededRng rng(seed * 4243);
    GeneratorOptions opt;
    opt.seed = seed;
    opt.k = rng.between(1, 2);
    opt.c = rng.between(1, 2);
    opt.n = rng.between(2 * opt.k + 2, 9);
    opt.cross_density = 0.05 + 0.3 * rng.unit();
    opt.plant_linkage = true;
    opt.backward_bias = 0.9;
    auto inst = generate_instance(opt);
    auto m = minimum_linkage(inst);
    ASSERT_TRUE(m.feasible);
    auto params = compute_parameters(opt.k, opt.c);
    auto vo = vertex_order(inst, *m.witness, params);
    ASSERT_TRUE(vo.ok) << vo.failure;
    auto rep = trace_linkage(inst, *m.witness, vo.enumeration.order, params);
    ASSERT_TRUE(rep.ok()) << "seed " << seed << ": " << rep.failures.front().clause;
    ++seen;
    const auto& y0 = rep.path.vertices.front().y;
    EXPECT_EQ(static_cast<int>(y0.size()), inst.k());
    for (const auto& e : y0.edges()) EXPECT_EQ(e.tail, inst.source(e.colour - 1));
    EXPECT_EQ(extract_linkage(rep.path, inst), *m.witness);
  }
  EXPECT_EQ(seen, 120);
}
