#pragma once

// Seeded property suites behind `kdp verify` and the acceptance test. Suite
// numbers follow the acceptance list in the README. Every failure is kept as
// a one-line description, and where an instance is involved as a
// counterexample dump in the instance format plus a witness section.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kdp/auxdigraph.hpp"
#include "kdp/generate.hpp"
#include "kdp/io.hpp"
#include "kdp/oracle.hpp"
#include "kdp/params.hpp"
#include "kdp/restricted.hpp"
#include "kdp/structure.hpp"
#include "kdp/testing/brute_force.hpp"

namespace kdp::suites {

// Deliberate defects injected into the acceptability checker used to build
// enumerations, to confirm the suites notice them.
enum class Mutation { none, drop_matching, drop_prefix };

inline std::optional<Mutation> parse_mutation(const std::string& s) {
  if (s == "none") return Mutation::none;
  if (s == "drop-matching") return Mutation::drop_matching;
  if (s == "drop-prefix") return Mutation::drop_prefix;
  return std::nullopt;
}

inline const char* to_string(Mutation m) {
  switch (m) {
    case Mutation::none: return "none";
    case Mutation::drop_matching: return "drop-matching";
    case Mutation::drop_prefix: return "drop-prefix";
  }
  return "?";
}

inline AcceptabilityOptions checker_options(Mutation m) {
  AcceptabilityOptions opt;
  opt.check_matching = m != Mutation::drop_matching;
  opt.check_prefix = m != Mutation::drop_prefix;
  return opt;
}

struct Tally {
  int id = 0;
  std::string name;
  std::uint64_t passed = 0;
  std::uint64_t total = 0;
  std::vector<std::string> failures;  // first few only
  std::vector<std::string> dumps;     // counterexample artifacts, first few only
  std::string note;
  double seconds = 0;

  bool ok() const { return passed == total; }
  void record(bool ok, const std::string& what = {}, const std::string& dump = {}) {
    ++total;
    if (ok) {
      ++passed;
      return;
    }
    if (failures.size() < 5) failures.push_back(what);
    if (!dump.empty() && dumps.size() < 5) dumps.push_back(dump);
  }
};

struct Config {
  std::uint64_t seed = 1;
  std::optional<std::size_t> count;  // replaces the per-suite instance counts
  Mutation mutation = Mutation::none;
  std::vector<int> selection{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "parameter fidelity",       "oracle vs reachability",     "vertex enumeration",
      "separation",               "trace round trip",           "powerset equivalence",
      "explicit equivalence",     "minimum-size identity",      "sub-oracle exactness",
      "shift property",
  };
  return names;
}

inline std::uint64_t case_seed(std::uint64_t base, int suite, std::size_t index) {
  SeededRng rng(base * 1'000'003ULL + static_cast<std::uint64_t>(suite) * 7'919ULL + index);
  return rng.next();
}

inline std::string counterexample(const ProblemInstance& inst, const std::optional<Linkage>& l,
                                  const std::map<std::string, VertexSet>& sets, const std::string& note) {
  Witness w;
  w.linkage = l;
  w.sets = sets;
  w.notes.push_back(note);
  return serialize_instance(inst) + serialize_witness(w);
}

// One instance of the shared corpus of suites 3, 4, 5 and 10.
struct CorpusCase {
  std::uint64_t seed = 0;
  ProblemInstance inst;
  Linkage linkage;  // oracle minimum
  Parameters params;
  VertexOrderResult order;
};

struct EquivalenceRecord {
  std::uint64_t seed = 0;
  int k = 1;
  bool oracle_yes = false;
  std::optional<std::size_t> oracle_min;
  std::optional<std::size_t> h_path_length;
};

class Runner {
 public:
  explicit Runner(Config cfg) : cfg_(std::move(cfg)) {}

  std::vector<Tally> run_all() {
    std::vector<Tally> out;
    std::vector<int> sel = cfg_.selection;
    std::sort(sel.begin(), sel.end());
    sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
    for (int id : sel) out.push_back(run(id));
    return out;
  }

  Tally run(int id) {
    auto start = std::chrono::steady_clock::now();
    Tally t;
    switch (id) {
      case 1: t = parameters(); break;
      case 2: t = oracle_vs_reachability(); break;
      case 3: t = enumeration(); break;
      case 4: t = separation(); break;
      case 5: t = trace(); break;
      case 6: t = powerset(); break;
      case 7: t = explicit_sets(); break;
      case 8: t = minimum_size(); break;
      case 9: t = sub_oracles(); break;
      case 10: t = shift(); break;
      default: throw std::invalid_argument("unknown suite " + std::to_string(id));
    }
    t.id = id;
    t.name = suite_names()[static_cast<std::size_t>(id - 1)];
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return t;
  }

  std::size_t count_or(std::size_t fallback) const { return cfg_.count.value_or(fallback); }

  // -------------------------------------------------------------------------

  Tally parameters() {
    Tally t;
    struct Spot {
      std::int64_t k, c, z, w, r, s, tt, K;
    };
    const Spot spots[] = {{1, 1, 6, 1, 1, 5, 19, 1}, {2, 1, 11, 1, 2, 9, 120, 2}, {2, 2, 36, 75, 300, 9, 13856, 298}};
    for (const auto& sp : spots) {
      auto p = compute_parameters(sp.k, sp.c);
      bool ok = p.z == sp.z && p.w == sp.w && p.r == sp.r && p.s == sp.s && p.t == sp.tt && p.K == sp.K;
      t.record(ok, "spot values differ at k=" + std::to_string(sp.k) + " c=" + std::to_string(sp.c));
    }
    t.record(compute_parameters(1, 1).h_size_exponent() == 28, "exponent at k=1 c=1 is not 28");
    for (std::int64_t k = 1; k <= 5; ++k)
      for (std::int64_t c = 1; c <= 5; ++c) {
        auto p = compute_parameters(k, c);
        auto e = testing::expanded_parameters(k, c);
        bool ok = p.z == e.z && p.w == e.w && p.r == e.r && p.s == e.s && p.t == e.t && p.K == e.K && !p.overridden;
        t.record(ok, "formula mismatch at k=" + std::to_string(k) + " c=" + std::to_string(c));
      }
    return t;
  }

  Tally oracle_vs_reachability() {
    Tally t;
    std::size_t yes = 0;
    for (std::size_t i = 0; i < count_or(200); ++i) {
      const auto seed = case_seed(cfg_.seed, 2, i);
      SeededRng rng(seed);
      GeneratorOptions g;
      g.seed = rng.next();
      g.k = 1;
      g.n = rng.between(2, 10);
      g.c = rng.between(1, std::min(3, g.n));
      g.cross_density = rng.unit() * 0.3;
      g.plant_linkage = rng.chance(0.5);
      auto inst = generate_instance(g);
      bool oracle = exists_linkage(inst).feasible;
      bool reach = testing::reachable(inst.graph, inst.source(0), inst.sink(0));
      yes += oracle ? 1 : 0;
      t.record(oracle == reach, "seed " + std::to_string(seed) + ": oracle " + (oracle ? "yes" : "no") + ", reachability " + (reach ? "yes" : "no"),
               counterexample(inst, std::nullopt, {}, "oracle disagrees with reachability"));
    }
    t.note = "yes=" + std::to_string(yes) + " no=" + std::to_string(t.total - yes);
    return t;
  }

  const std::vector<CorpusCase>& corpus() {
    if (corpus_) return *corpus_;
    corpus_.emplace();
    const auto opt = checker_options(cfg_.mutation);
    for (std::size_t i = 0; i < count_or(200); ++i) {
      const auto seed = case_seed(cfg_.seed, 3, i);
      SeededRng rng(seed);
      GeneratorOptions g;
      g.seed = rng.next();
      g.k = rng.between(1, 2);
      g.c = rng.between(1, 2);
      g.n = rng.between(2 * g.k + 2, 9);
      g.cross_density = 0.05 + rng.unit() * 0.3;
      g.plant_linkage = true;
      g.plant_detour = 0.7 + rng.unit() * 0.3;
      g.backward_bias = 0.9 + rng.unit() * 0.1;
      CorpusCase cc{seed, generate_instance(g), {}, compute_parameters(g.k, g.c), {}};
      cc.linkage = *minimum_linkage(cc.inst).witness;
      cc.order = vertex_order(cc.inst, cc.linkage, cc.params, opt);
      corpus_->push_back(std::move(cc));
    }
    return *corpus_;
  }

  Tally enumeration() {
    Tally t;
    for (const auto& cc : corpus()) {
      std::string why;
      VertexSet bad;
      if (!cc.order.ok) {
        why = cc.order.failure;
        bad = cc.order.failing_set;
      } else {
        // recheck every prefix with the unmutated checker and a brute-force wiggle
        const auto& order = cc.order.enumeration.order;
        const VertexSet in_l = cc.linkage.vertex_set();
        for (std::size_t h = 0; h <= order.size() && why.empty(); ++h) {
          VertexSet b = prefix_set(cc.inst, order, h);
          if (auto v = check_acceptable(cc.inst, cc.linkage, cc.params, b)) {
            why = "prefix " + std::to_string(h) + " not acceptable: " + v->detail;
            bad = b;
            break;
          }
          for (const auto& m : cc.linkage.members)
            if (static_cast<std::int64_t>(testing::brute_wiggle(m.vertices, b, in_l - b)) > cc.params.w) {
              why = "prefix " + std::to_string(h) + " exceeds the wiggle bound";
              bad = b;
            }
        }
        if (why.empty() && order.size() != (in_l - cc.inst.terminals()).size()) why = "enumeration is not a permutation";
      }
      t.record(why.empty(), "seed " + std::to_string(cc.seed) + ": " + why,
               counterexample(cc.inst, cc.linkage, {{"B", bad}}, why));
    }
    return t;
  }

  Tally separation() {
    Tally t;
    for (const auto& cc : corpus()) {
      std::string why;
      if (!cc.order.ok) {
        why = "no enumeration: " + cc.order.failure;
      } else {
        auto rep = verify_separation(cc.inst, cc.linkage, cc.order.enumeration.order, cc.params);
        why = rep.first_failure();
        for (const auto& st : rep.stages) {
          if (!why.empty()) break;
          if (!st.sides_covered) why = "stage " + std::to_string(st.h) + ": sides not covered by the closures";
          else if (!st.witness_exact) why = "stage " + std::to_string(st.h) + ": witness identity fails";
        }
      }
      t.record(why.empty(), "seed " + std::to_string(cc.seed) + ": " + why, counterexample(cc.inst, cc.linkage, {}, why));
    }
    return t;
  }

  Tally trace() {
    Tally t;
    for (const auto& cc : corpus()) {
      std::string why;
      if (!cc.order.ok) {
        why = "no enumeration: " + cc.order.failure;
      } else {
        auto rep = trace_linkage(cc.inst, cc.linkage, cc.order.enumeration.order, cc.params);
        if (!rep.ok()) {
          why = "stage " + std::to_string(rep.failures.front().stage) + ": " + rep.failures.front().clause;
        } else {
          try {
            if (extract_linkage(rep.path, cc.inst) != cc.linkage) why = "extraction differs from the traced linkage";
          } catch (const MalformedUnion& e) {
            why = e.what();
          }
        }
      }
      t.record(why.empty(), "seed " + std::to_string(cc.seed) + ": " + why, counterexample(cc.inst, cc.linkage, {}, why));
    }
    return t;
  }

  // Shared checks of suites 6 and 7.
  void equivalence_case(Tally& t, std::uint64_t seed, const ProblemInstance& inst, SearchMode mode,
                        std::vector<EquivalenceRecord>& records) {
    const auto params = compute_parameters(inst.k(), inst.partition.c);
    auto oracle = minimum_linkage(inst);
    auto res = find_h_path(inst, params, mode, SearchBudget{});
    EquivalenceRecord rec{seed, inst.k(), oracle.feasible, oracle.min_total_vertices, std::nullopt};
    std::string why;
    if (res.status == HStatus::budget_exceeded) {
      why = "budget exceeded";
    } else if ((res.status == HStatus::found) != oracle.feasible) {
      why = std::string("H says ") + to_string(res.status) + ", oracle says " + (oracle.feasible ? "yes" : "no");
    } else if (res.status == HStatus::no_path && !res.certified) {
      why = "no-path not certified: " + res.note;
    } else if (res.path) {
      rec.h_path_length = res.path->length();
      try {
        extract_linkage(*res.path, inst);
      } catch (const MalformedUnion& e) {
        why = e.what();
      }
    }
    if (why.empty() && mode == SearchMode::explicit_sets) {
      if (!res.enumeration_complete) why = "restricted-set enumeration incomplete";
      else if (res.restricted_sets > (std::size_t{1} << inst.n())) why = "more restricted sets than subsets";
    }
    records.push_back(rec);
    t.record(why.empty(), "seed " + std::to_string(seed) + ": " + why, counterexample(inst, oracle.witness, {}, why));
  }

  Tally powerset() {
    Tally t;
    powerset_records_.emplace();
    for (std::size_t i = 0; i < count_or(100); ++i) {
      const auto seed = case_seed(cfg_.seed, 6, i);
      SeededRng rng(seed);
      GeneratorOptions g;
      g.seed = rng.next();
      g.k = rng.between(1, 2);
      g.c = rng.between(1, 2);
      g.n = rng.between(std::max(2 * g.k, 2), 8);
      g.plant_linkage = rng.chance(0.5);
      g.cross_density = rng.unit() * (g.plant_linkage ? 0.35 : 0.15);
      g.plant_detour = 0.5 + rng.unit() * 0.5;
      g.backward_bias = 0.5 + rng.unit() * 0.5;
      equivalence_case(t, seed, generate_instance(g), SearchMode::powerset, *powerset_records_);
    }
    t.note = yes_no(*powerset_records_) + longest(*powerset_records_);
    return t;
  }

  Tally explicit_sets() {
    Tally t;
    explicit_records_.emplace();
    for (std::size_t i = 0; i < count_or(50); ++i) {
      const auto seed = case_seed(cfg_.seed, 7, i);
      SeededRng rng(seed);
      GeneratorOptions g;
      g.seed = rng.next();
      g.k = 1;
      g.c = 1;
      g.n = rng.between(2, 6);
      g.both_ways = rng.unit() * 0.3;
      g.plant_linkage = rng.chance(0.5);
      g.plant_detour = 0.5 + rng.unit() * 0.5;
      g.backward_bias = 0.5 + rng.unit() * 0.5;
      equivalence_case(t, seed, generate_instance(g), SearchMode::explicit_sets, *explicit_records_);
    }
    t.note = yes_no(*explicit_records_) + longest(*explicit_records_);
    return t;
  }

  Tally minimum_size() {
    if (!powerset_records_) powerset();
    if (!explicit_records_) explicit_sets();
    Tally t;
    for (const auto* recs : {&*powerset_records_, &*explicit_records_}) {
      for (const auto& r : *recs) {
        if (!r.oracle_yes) continue;
        bool ok = r.h_path_length && r.oracle_min && *r.h_path_length - 1 + 2 * static_cast<std::size_t>(r.k) == *r.oracle_min;
        t.record(ok, "seed " + std::to_string(r.seed) + ": p-1+2k=" +
                         (r.h_path_length ? std::to_string(*r.h_path_length - 1 + 2 * static_cast<std::size_t>(r.k)) : "?") +
                         " oracle=" + (r.oracle_min ? std::to_string(*r.oracle_min) : "?"));
      }
    }
    return t;
  }

  Tally sub_oracles() {
    Tally t;
    SeededRng rng(case_seed(cfg_.seed, 9, 0));
    std::size_t wiggles = 0, matchings = 0;
    for (int i = 0; i < 500; ++i) {
      std::vector<Vertex> perm(12);
      for (int v = 0; v < 12; ++v) perm[static_cast<std::size_t>(v)] = v;
      rng.shuffle(perm);
      perm.resize(static_cast<std::size_t>(rng.between(1, 10)));
      VertexSet x, y;
      for (int v = 0; v < 12; ++v) {
        auto roll = rng.below(3);
        if (roll == 0) x.insert(v);
        else if (roll == 1) y.insert(v);
      }
      bool ok = wiggle_number(perm, x, y) == testing::brute_wiggle(perm, x, y);
      wiggles += ok ? 0 : 1;
      t.record(ok, "wiggle mismatch on case " + std::to_string(i));
    }
    for (int i = 0; i < 200; ++i) {
      const int n = rng.between(6, 12);
      std::vector<Vertex> perm(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v;
      rng.shuffle(perm);
      const auto qlen = static_cast<std::size_t>(rng.between(1, std::min(6, n)));
      std::vector<Vertex> q(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(qlen));
      std::vector<Vertex> r = q;
      if (!rng.chance(0.3) && n - static_cast<int>(qlen) >= 1) {
        const auto rlen = static_cast<std::size_t>(rng.between(1, std::min(6, n - static_cast<int>(qlen))));
        r.assign(perm.begin() + static_cast<std::ptrdiff_t>(qlen), perm.begin() + static_cast<std::ptrdiff_t>(qlen + rlen));
      }
      std::set<Edge> es;
      for (const auto* host : {&q, &r})
        for (std::size_t j = 1; j < host->size(); ++j) es.insert({(*host)[j - 1], (*host)[j]});
      const double density = 0.2 + rng.unit() * 0.4;
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = 0; v < n; ++v)
          if (u != v && rng.chance(density)) es.insert({u, v});
      std::vector<Edge> ev(es.begin(), es.end());
      auto g = Digraph::from_edges(n, ev);
      VertexSet x, y, forbidden;
      for (Vertex v = 0; v < n; ++v) {
        auto roll = rng.below(3);
        if (roll == 0) x.insert(v);
        else if (roll == 1) y.insert(v);
      }
      for (Vertex v : q) forbidden.insert(v);
      for (Vertex v : r) forbidden.insert(v);
      for (Vertex v = 0; v < n; ++v)
        if (rng.chance(0.15)) forbidden.insert(v);
      const auto brute = testing::brute_planar_matching(g, q, r, x, y, forbidden);
      const auto full = max_planar_matching(g, q, r, x, y, forbidden, 64);
      const auto cap = static_cast<std::size_t>(rng.between(1, 4));
      const auto capped = max_planar_matching(g, q, r, x, y, forbidden, cap);
      bool ok = full.cardinality == brute && full.witness.members.size() == brute &&
                capped.cardinality == std::min(brute, cap);
      matchings += ok ? 0 : 1;
      t.record(ok, "planar matching mismatch on case " + std::to_string(i) + ": exact " + std::to_string(full.cardinality) +
                       " brute " + std::to_string(brute));
    }
    t.note = "wiggle mismatches=" + std::to_string(wiggles) + " matching mismatches=" + std::to_string(matchings);
    return t;
  }

  Tally shift() {
    Tally t;
    std::uint64_t checks = 0;
    for (const auto& cc : corpus()) {
      const auto& part = cc.inst.partition;
      const VertexSet in_l = cc.linkage.vertex_set();
      std::string why;
      for (const auto& m : cc.linkage.members) {
        const auto& p = m.vertices;
        for (std::size_t i1 = 0; i1 < p.size(); ++i1)
          for (std::size_t j1 = i1; j1 < p.size(); ++j1)
            for (std::size_t i2 = i1; i2 <= j1; ++i2)
              for (std::size_t j2 = i2; j2 <= j1; ++j2)
                for (int a = 1; a <= part.c; ++a) {
                  std::vector<Vertex> in_q, in_q2;
                  for (std::size_t x = i1; x <= j1; ++x)
                    if (part.clique_of(p[x]) == a) in_q2.push_back(p[x]);
                  for (std::size_t x = i2; x <= j2; ++x)
                    if (part.clique_of(p[x]) == a) in_q.push_back(p[x]);
                  for (std::size_t l = 3; l <= in_q.size(); ++l) {
                    for (Vertex v : part.members(a).elements()) {
                      if (in_l.contains(v)) continue;
                      auto from_last = [&](const std::vector<Vertex>& seq) {
                        return std::all_of(seq.end() - static_cast<std::ptrdiff_t>(l), seq.end(),
                                           [&](Vertex u) { return cc.inst.graph.has_edge(u, v); });
                      };
                      ++checks;
                      if (from_last(in_q) && !from_last(in_q2) && why.empty())
                        why = "v=" + std::to_string(v) + " l=" + std::to_string(l) + " on member starting " +
                              std::to_string(p.front());
                    }
                  }
                }
      }
      t.record(why.empty(), "seed " + std::to_string(cc.seed) + ": " + why, counterexample(cc.inst, cc.linkage, {}, why));
    }
    t.note = "checks=" + std::to_string(checks);
    return t;
  }

 private:
  static std::string yes_no(const std::vector<EquivalenceRecord>& recs) {
    auto yes = std::count_if(recs.begin(), recs.end(), [](const EquivalenceRecord& r) { return r.oracle_yes; });
    return "yes=" + std::to_string(yes) + " no=" + std::to_string(static_cast<long>(recs.size()) - yes);
  }

  static std::string longest(const std::vector<EquivalenceRecord>& recs) {
    std::size_t best = 0;
    for (const auto& r : recs) best = std::max(best, r.oracle_min.value_or(0));
    return " largest-minimum=" + std::to_string(best);
  }

  Config cfg_;
  std::optional<std::vector<CorpusCase>> corpus_;
  std::optional<std::vector<EquivalenceRecord>> powerset_records_;
  std::optional<std::vector<EquivalenceRecord>> explicit_records_;
};

}  // namespace kdp::suites
