#include <iostream>

#include "CLI11.hpp"
#include "cli_commands.hpp"

namespace {

using kdp::cli::RunConfig;

void add_budget(CLI::App* app, RunConfig& cfg, std::string& overrides) {
  app->add_option("--override", overrides, "replace constants, e.g. z=3,w=2");
  app->add_option("--max-states", cfg.max_states, "state / node budget (0 = unlimited)")->check(CLI::NonNegativeNumber);
  app->add_option("--timeout-s", cfg.timeout_s, "wall-clock budget in seconds (0 = unlimited)")->check(CLI::NonNegativeNumber);
  app->add_option("--out", cfg.out, "write the report here (plus a .kv mirror)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k disjoint paths in digraphs with a bounded clique partition"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string overrides;

  auto* params = app.add_subcommand("params", "print the constants for k and c");
  params->add_option("-k", cfg.k, "number of terminal pairs")->required();
  params->add_option("-c", cfg.c, "number of cliques")->required();
  params->add_option("--override", overrides, "replace constants, e.g. z=3,w=2");

  auto* gen = app.add_subcommand("gen", "generate a seeded instance");
  gen->add_option("--seed", cfg.seed);
  gen->add_option("-n", cfg.n)->required();
  gen->add_option("-k", cfg.k)->required();
  gen->add_option("-c", cfg.c)->required();
  gen->add_option("--density", cfg.density, "probability of each cross-clique edge")->check(CLI::Range(0.0, 1.0));
  gen->add_flag("--plant", cfg.plant, "lay down a linkage first");
  gen->add_option("--out", cfg.out);

  auto* solve = app.add_subcommand("solve", "decide an instance");
  solve->add_option("--input", cfg.input)->required();
  solve->add_option("--mode", cfg.mode)->check(CLI::IsMember({"oracle", "powerset", "explicit", "trace"}));
  solve->add_flag("--timings", cfg.timings, "include wall-clock time in the report");
  add_budget(solve, cfg, overrides);

  auto* trace = app.add_subcommand("trace", "same as solve --mode trace");
  trace->add_option("--input", cfg.input)->required();
  trace->add_flag("--timings", cfg.timings);
  add_budget(trace, cfg, overrides);

  auto* verify = app.add_subcommand("verify", "run the property suites");
  std::string suite_list = "all";
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--count", cfg.count, "instances per seeded suite");
  verify->add_option("--suite", suite_list, "comma-separated suite ids, 'all' or 'none'");
  verify->add_option("--mutate", cfg.mutation)->check(CLI::IsMember({"none", "drop-matching", "drop-prefix"}));
  verify->add_option("--artifacts", cfg.artifacts, "directory for counterexample dumps");
  verify->add_flag("--timings", cfg.timings);
  verify->add_option("--out", cfg.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kdp::cli::ExitCode::usage_error;
  }

  try {
    cfg.overrides = kdp::cli::parse_overrides(overrides);
    kdp::cli::CommandResult res;
    auto start = std::chrono::steady_clock::now();
    if (*params) {
      res = kdp::cli::cmd_params(cfg);
    } else if (*gen) {
      res = kdp::cli::cmd_gen(cfg);
    } else if (*solve || *trace) {
      if (*trace) cfg.mode = "trace";
      res = kdp::cli::cmd_solve(cfg);
    } else {
      if (suite_list == "none") {
        cfg.suites.clear();
      } else if (suite_list != "all") {
        cfg.suites.clear();
        std::stringstream in(suite_list);
        std::string item;
        while (std::getline(in, item, ',')) cfg.suites.push_back(std::stoi(item));
      }
      res = kdp::cli::cmd_verify(cfg);
    }
    if (cfg.timings && (*solve || *trace))
      res.report.set("seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    kdp::cli::emit(res, cfg.out, std::cout);
    return res.exit_code;
  } catch (const kdp::ParseError& e) {
    std::cerr << "kdp: " << e.what() << '\n';
  } catch (const kdp::InfeasibleParameters& e) {
    std::cerr << "kdp: infeasible parameters: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    std::cerr << "kdp: " << e.what() << '\n';
  } catch (const std::out_of_range& e) {
    std::cerr << "kdp: " << e.what() << '\n';
  }
  return kdp::cli::ExitCode::usage_error;
}
