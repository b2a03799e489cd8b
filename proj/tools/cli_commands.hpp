#pragma once

// Command implementations for the kdp executable, kept free of argument
// parsing so the tests can drive them directly.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kdp/auxdigraph.hpp"
#include "kdp/generate.hpp"
#include "kdp/io.hpp"
#include "kdp/oracle.hpp"
#include "kdp/params.hpp"
#include "kdp/structure.hpp"
#include "kdp/suites.hpp"

namespace kdp::cli {

enum ExitCode : int { yes = 0, certified_no = 1, inconclusive = 2, usage_error = 3, counterexample = 4 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::uint64_t seed = 1;
  std::string mode = "oracle";
  ParameterOverrides overrides;
  std::uint64_t max_states = 5'000'000;
  double timeout_s = 0;
  std::string out;
  bool timings = false;
  // gen
  int n = 6;
  int k = 1;
  int c = 1;
  double density = 0.2;
  bool plant = false;
  // verify
  std::optional<std::size_t> count;
  std::vector<int> suites{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string mutation = "none";
  std::string artifacts = "kdp-counterexamples";
};

// key: value lines followed by free-form sections. The .kv mirror carries
// only the key/value pairs.
class RunReport {
 public:
  void set(const std::string& key, const std::string& value) {
    for (auto& kv : entries_)
      if (kv.first == key) {
        kv.second = value;
        return;
      }
    entries_.emplace_back(key, value);
  }
  template <class T>
  void set(const std::string& key, const T& value) {
    std::ostringstream s;
    s << value;
    set(key, s.str());
  }
  void section(const std::string& name, const std::string& body) { sections_.emplace_back(name, body); }

  std::optional<std::string> get(const std::string& key) const {
    for (const auto& kv : entries_)
      if (kv.first == key) return kv.second;
    return std::nullopt;
  }

  std::string text() const {
    std::ostringstream out;
    for (const auto& [k, v] : entries_) out << k << ": " << v << '\n';
    for (const auto& [name, body] : sections_) out << '[' << name << "]\n" << body;
    return out.str();
  }
  std::string kv() const {
    std::ostringstream out;
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
    return out.str();
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::pair<std::string, std::string>> sections_;
};

struct CommandResult {
  int exit_code = ExitCode::yes;
  RunReport report;
  std::optional<std::string> raw;  // written verbatim instead of the report
};

// "z=3,w=2" -> overrides. Unknown keys and malformed values are usage errors.
inline ParameterOverrides parse_overrides(const std::string& spec) {
  ParameterOverrides ov;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("override '" + item + "' is not key=value");
    std::string key = item.substr(0, eq);
    std::int64_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoll(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError("override '" + item + "' has a non-integer value");
    }
    if (value < 0) throw UsageError("override '" + item + "' is negative");
    if (key == "z") ov.z = value;
    else if (key == "w") ov.w = value;
    else if (key == "r") ov.r = value;
    else if (key == "s") ov.s = value;
    else if (key == "t") ov.t = value;
    else if (key == "K") ov.K = value;
    else throw UsageError("unknown override key '" + key + "'");
  }
  return ov;
}

inline void put_parameters(RunReport& r, const Parameters& p) {
  r.set("k", p.k);
  r.set("c", p.c);
  r.set("z", p.z);
  r.set("w", p.w);
  r.set("r", p.r);
  r.set("s", p.s);
  r.set("t", p.t);
  r.set("K", p.K);
  r.set("exponent", p.h_size_exponent());
  r.set("approximate-exponent", static_cast<std::int64_t>(p.approximate_exponent()));
  r.set("overridden", p.overridden ? "true" : "false");
}

inline CommandResult cmd_params(const RunConfig& cfg) {
  if (cfg.k < 1 || cfg.c < 1) throw UsageError("k and c must be at least 1");
  CommandResult res;
  res.report.set("command", "params");
  put_parameters(res.report, compute_parameters(cfg.k, cfg.c, cfg.overrides));
  return res;
}

inline CommandResult cmd_gen(const RunConfig& cfg) {
  GeneratorOptions opt;
  opt.seed = cfg.seed;
  opt.n = cfg.n;
  opt.k = cfg.k;
  opt.c = cfg.c;
  opt.cross_density = cfg.density;
  opt.plant_linkage = cfg.plant;
  auto inst = generate_instance(opt);
  CommandResult res;
  res.report.set("command", "gen");
  res.report.set("seed", cfg.seed);
  res.raw = serialize_instance(inst);
  return res;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// The instance block (and witness) of a solve report.
inline std::string report_payload(const std::string& report_text) {
  auto pos = report_text.find("[instance]\n");
  if (pos == std::string::npos) throw UsageError("report has no instance section");
  return report_text.substr(pos + 11);
}

namespace detail {

inline void put_linkage(RunReport& r, const ProblemInstance& inst, const Linkage& l, std::map<std::string, VertexSet> sets = {},
                        std::vector<std::string> notes = {}) {
  r.set("min-total-vertices", l.total_vertices());
  Witness w{l, std::move(sets), std::move(notes)};
  r.section("instance", serialize_instance(inst) + serialize_witness(w));
}

inline void put_verdict(CommandResult& res, int code) {
  res.exit_code = code;
  const char* v = code == ExitCode::yes            ? "yes"
                  : code == ExitCode::certified_no ? "certified-no"
                  : code == ExitCode::inconclusive ? "inconclusive"
                                                   : "counterexample";
  res.report.set("verdict", v);
}

inline void solve_oracle(const ProblemInstance& inst, const RunConfig& cfg, CommandResult& res) {
  try {
    auto o = minimum_linkage(inst, OracleOptions{cfg.max_states});
    if (!o.feasible) {
      put_verdict(res, ExitCode::certified_no);
      return;
    }
    put_verdict(res, ExitCode::yes);
    put_linkage(res.report, inst, *o.witness);
  } catch (const BudgetExceeded&) {
    res.report.set("note", "oracle node budget exhausted");
    put_verdict(res, ExitCode::inconclusive);
  }
}

inline void solve_h(const ProblemInstance& inst, const RunConfig& cfg, const Parameters& params, SearchMode mode,
                    CommandResult& res) {
  SearchBudget budget;
  budget.max_states = cfg.max_states;
  budget.timeout_s = cfg.timeout_s;
  auto h = minimum_linkage_size_via_h(inst, params, mode, budget);
  const auto& s = h.search;
  res.report.set("search", to_string(s.status));
  res.report.set("states", s.states);
  if (mode == SearchMode::explicit_sets) {
    res.report.set("restricted-sets", s.restricted_sets);
    res.report.set("enumeration-complete", s.enumeration_complete ? "true" : "false");
  }
  if (!s.note.empty()) res.report.set("note", s.note);
  if (s.status == HStatus::found) {
    Linkage l;
    try {
      l = extract_linkage(*s.path, inst);
    } catch (const MalformedUnion& e) {
      res.report.set("note", std::string("malformed union: ") + e.what());
      res.report.section("hpath", dump_hpath(*s.path));
      put_verdict(res, ExitCode::counterexample);
      return;
    }
    put_verdict(res, ExitCode::yes);
    res.report.set("h-path-length", s.path->length());
    res.report.set("size-from-h-path", *h.size);
    res.report.section("hpath", dump_hpath(*s.path));
    put_linkage(res.report, inst, l);
    return;
  }
  put_verdict(res, s.status == HStatus::no_path && s.certified ? ExitCode::certified_no : ExitCode::inconclusive);
}

inline void solve_trace(const ProblemInstance& inst, const RunConfig& cfg, const Parameters& params, CommandResult& res) {
  OracleResult o;
  try {
    o = minimum_linkage(inst, OracleOptions{cfg.max_states});
  } catch (const BudgetExceeded&) {
    res.report.set("note", "oracle node budget exhausted");
    put_verdict(res, ExitCode::inconclusive);
    return;
  }
  if (!o.feasible) {
    put_verdict(res, ExitCode::certified_no);
    return;
  }
  const Linkage& l = *o.witness;
  auto order = vertex_order(inst, l, params);
  if (!order.ok) {
    res.report.set("failure", order.failure);
    put_verdict(res, ExitCode::counterexample);
    put_linkage(res.report, inst, l, {{"B", order.failing_set}}, {order.failure});
    return;
  }
  std::ostringstream ord;
  for (std::size_t i = 0; i < order.enumeration.order.size(); ++i) ord << (i ? " " : "") << order.enumeration.order[i];
  res.report.set("enumeration", ord.str());
  auto rep = trace_linkage(inst, l, order.enumeration.order, params);
  std::ostringstream stages;
  for (const auto& st : rep.separation.stages) {
    stages << "stage " << st.h << " a=" << (st.a_ok ? "pass" : "FAIL") << " b=" << (st.b_ok ? "pass" : "FAIL")
           << " c=" << (st.c.ok() ? "pass" : "FAIL") << " overlap=" << st.c.overlap << '\n';
  }
  for (const auto& f : rep.failures) stages << "failure stage " << f.stage << ": " << f.clause << '\n';
  res.report.section("verification", stages.str());
  res.report.section("hpath", dump_hpath(rep.path));
  if (!rep.ok()) {
    res.report.set("failure", "stage " + std::to_string(rep.failures.front().stage) + ": " + rep.failures.front().clause);
    put_verdict(res, ExitCode::counterexample);
    put_linkage(res.report, inst, l, {}, {res.report.get("failure").value_or("")});
    return;
  }
  std::string round_trip = "pass";
  try {
    if (extract_linkage(rep.path, inst) != l) round_trip = "extraction differs from the traced linkage";
  } catch (const MalformedUnion& e) {
    round_trip = e.what();
  }
  res.report.set("round-trip", round_trip);
  if (round_trip != "pass") {
    put_verdict(res, ExitCode::counterexample);
    put_linkage(res.report, inst, l, {}, {round_trip});
    return;
  }
  put_verdict(res, ExitCode::yes);
  put_linkage(res.report, inst, l);
}

}  // namespace detail

inline CommandResult cmd_solve(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("--input is required");
  const auto inst = parse_instance(read_file(cfg.input));
  const auto params = compute_parameters(inst.k(), inst.partition.c, cfg.overrides);
  CommandResult res;
  auto& r = res.report;
  r.set("command", "solve");
  r.set("mode", cfg.mode);
  r.set("input", cfg.input);
  r.set("n", inst.n());
  r.set("k", inst.k());
  r.set("c", inst.partition.c);
  r.set("overridden", params.overridden ? "true" : "false");
  r.set("verdict", "pending");
  if (cfg.mode == "oracle") detail::solve_oracle(inst, cfg, res);
  else if (cfg.mode == "powerset") detail::solve_h(inst, cfg, params, SearchMode::powerset, res);
  else if (cfg.mode == "explicit") detail::solve_h(inst, cfg, params, SearchMode::explicit_sets, res);
  else if (cfg.mode == "trace") detail::solve_trace(inst, cfg, params, res);
  else throw UsageError("unknown mode '" + cfg.mode + "'");
  return res;
}

inline CommandResult cmd_verify(const RunConfig& cfg) {
  auto mutation = suites::parse_mutation(cfg.mutation);
  if (!mutation) throw UsageError("unknown mutation '" + cfg.mutation + "'");
  for (int id : cfg.suites)
    if (id < 1 || id > 10) throw UsageError("suite ids lie in 1..10");
  suites::Config sc;
  sc.seed = cfg.seed;
  sc.count = cfg.count;
  sc.mutation = *mutation;
  sc.selection = cfg.suites;
  suites::Runner runner(sc);
  CommandResult res;
  auto& r = res.report;
  r.set("command", "verify");
  r.set("seed", cfg.seed);
  r.set("mutation", cfg.mutation);
  std::uint64_t failed = 0;
  std::ostringstream details;
  std::vector<std::string> dumps;
  for (const auto& t : runner.run_all()) {
    const std::string key = "suite-" + std::to_string(t.id);
    r.set(key, std::to_string(t.passed) + "/" + std::to_string(t.total) + (t.ok() ? " pass" : " FAIL"));
    if (cfg.timings) r.set(key + "-seconds", t.seconds);
    details << "suite " << t.id << " (" << t.name << "): " << t.passed << '/' << t.total;
    if (!t.note.empty()) details << "  " << t.note;
    details << '\n';
    for (const auto& f : t.failures) details << "  failure: " << f << '\n';
    failed += t.ok() ? 0 : 1;
    for (std::size_t i = 0; i < t.dumps.size(); ++i)
      dumps.push_back(key + "-" + std::to_string(i) + ".txt\n" + t.dumps[i]);
  }
  r.set("suites-failed", failed);
  r.section("tallies", details.str());
  if (!dumps.empty()) {
    std::filesystem::create_directories(cfg.artifacts);
    std::ostringstream names;
    for (const auto& d : dumps) {
      auto nl = d.find('\n');
      auto path = std::filesystem::path(cfg.artifacts) / d.substr(0, nl);
      std::ofstream(path) << d.substr(nl + 1);
      names << path.string() << '\n';
    }
    r.section("counterexamples", names.str());
  }
  res.exit_code = failed ? ExitCode::counterexample : ExitCode::yes;
  return res;
}

// Writes the report (and the .kv mirror next to it) or prints it.
inline void emit(const CommandResult& res, const std::string& out, std::ostream& console) {
  if (res.raw) {
    if (out.empty()) console << *res.raw;
    else std::ofstream(out, std::ios::binary) << *res.raw;
    return;
  }
  if (out.empty()) {
    console << res.report.text();
    return;
  }
  std::ofstream(out, std::ios::binary) << res.report.text();
  std::ofstream(out + ".kv", std::ios::binary) << res.report.kv();
}

}  // namespace kdp::cli
