#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "distval/parallel.hpp"
#include "distval/reproduce.hpp"
#include "distval/scenario.hpp"

namespace {

struct Flags {
  std::string scenario;
  std::string out = ".";
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_max;
  std::optional<unsigned> threads;
  std::optional<std::size_t> budget;
  std::optional<int> grid_depth;
  std::optional<int> max_depth;
  bool oracle = false;
};

void numeric_flags(CLI::App* app, Flags& f) {
  app->add_option("--out", f.out, "Directory for <name>.json, <name>.csv and <name>.timing.json")
      ->capture_default_str();
  app->add_option("--tol", f.tol, "Tail tolerance of limit verdicts (overrides the scenario)")
      ->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "Seed of every sampler (overrides the scenario)");
  app->add_option("--n-max", f.n_max, "Cap on sequence lengths")->check(CLI::Range(16, 1 << 24));
  app->add_option("--threads", f.threads, "Worker cap (falls back to DISTVAL_THREADS)")->check(CLI::Range(1, 1024));
  app->add_option("--budget", f.budget, "Pairing budget of the probe ladder")->check(CLI::PositiveNumber);
  app->add_option("--grid-depth", f.grid_depth, "Refinement levels of the probe ladder")->check(CLI::Range(0, 60));
  app->add_option("--max-depth", f.max_depth, "Bisection depth of adaptive quadrature")->check(CLI::Range(4, 200));
  app->add_flag("--oracle", f.oracle, "Tighter quadrature for every pairing");
}

distval::RunOptions run_options(const Flags& f) {
  distval::RunOptions o;
  o.tol = f.tol;
  o.seed = f.seed;
  o.n_max = f.n_max;
  o.budget = f.budget;
  o.grid_depth = f.grid_depth;
  o.max_depth = f.max_depth;
  o.oracle = f.oracle;
  if (f.threads) {
    distval::set_default_threads(*f.threads);
    o.threads = *f.threads;
  }
  return o;
}

int fail(const std::string& message) {
  std::cerr << "distval: error: " << message << '\n';
  return distval::kExitError;
}

int emit(const distval::Report& r, const Flags& f, double secs) {
  distval::write_report(r, f.out, secs, distval::default_threads());
  std::cout << r.name << ": " << r.body["verdict"].get<std::string>() << " (exit " << r.exit_code << ") -> "
            << (std::filesystem::path(f.out) / (r.name + ".json")).string() << '\n';
  if (r.body.contains("checks")) {
    for (const auto& c : r.body["checks"])
      std::cout << "  " << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << ": "
                << c["detail"].get<std::string>() << '\n';
  }
  return r.exit_code;
}

// `task` is empty for `run`; a task subcommand fills in or checks the field.
int run(const Flags& f, const std::string& task) {
  std::ifstream in(f.scenario, std::ios::binary);
  if (!in) return fail("cannot read scenario '" + f.scenario + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::string text = buf.str();
    if (!task.empty()) {
      // validate the document shape first so a byte offset still refers to the file
      distval::Json raw;
      try {
        raw = distval::Json::parse(text);
      } catch (const distval::Json::parse_error&) {
        distval::parse_scenario(text);  // rethrows with the offset
      }
      if (raw.is_object() && !raw.contains("task")) {
        raw["task"] = task;
        text = raw.dump();
      } else if (raw.is_object() && raw["task"] != task) {
        return fail("/task: scenario task does not match the '" + task + "' subcommand");
      }
    }
    const distval::Json sc = distval::parse_scenario(text);
    const std::string name = std::filesystem::path(f.scenario).stem().string();
    const distval::Report r = distval::run_scenario(sc, sc.value("name", name), run_options(f));
    return emit(r, f, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  } catch (const distval::ScenarioError& e) {
    return fail(e.what());
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical point values of distributions"};
  app.set_version_flag("--version", std::string(distval::tool_version()));
  app.require_subcommand(1);

  Flags flags;
  std::string run_task;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("--scenario", flags.scenario, "Scenario JSON (see docs/scenario.schema.json)")
      ->required()
      ->check(CLI::ExistingFile);
  numeric_flags(run_cmd, flags);

  static const char* tasks[] = {"point-value",     "family-probe", "sym-value",    "radial-value", "jump-fit",
                                "angular-profile", "limit-probe",  "measure-stat", "linf",         "moments"};
  for (const char* t : tasks) {
    auto* sub = app.add_subcommand(t, std::string("Run a scenario with task '") + t + "'");
    sub->add_option("--scenario", flags.scenario, "Scenario JSON; the task field may be omitted")
        ->required()
        ->check(CLI::ExistingFile);
    numeric_flags(sub, flags);
    sub->callback([&run_task, t] { run_task = t; });
  }

  std::string target;
  auto* rep = app.add_subcommand("reproduce", "Run a canned construction and check it");
  rep->add_option("name", target, "Target name")->required()->check(CLI::IsMember(distval::reproduce_targets()));
  numeric_flags(rep, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : distval::kExitError;
  }

  if (rep->parsed()) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const distval::Report r = distval::reproduce(target, run_options(flags));
      return emit(r, flags, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    } catch (const std::exception& e) {
      return fail(e.what());
    }
  }
  return run(flags, run_cmd->parsed() ? std::string() : run_task);
}
