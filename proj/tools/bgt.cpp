// bgt: evaluate, check and sweep budget files; run the law suite.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "budget/axioms.hpp"
#include "budget/dsl.hpp"
#include "budget/report.hpp"

namespace {

using namespace budget;
using namespace budget::cli;

struct Common {
  std::string file;
  std::string budget;
  std::vector<std::string> sets;
  std::string bindings_file;
  std::string format = "text";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("file", c.file, "budget file (.bgt)")->required();
  cmd->add_option("--budget", c.budget, "budget to evaluate")->required();
  cmd->add_option("--set", c.sets, "VAR=RATIONAL binding; repeatable, overrides --bindings, last wins");
  cmd->add_option("--bindings", c.bindings_file, "file of VAR = RATIONAL lines");
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));
}

Valuation load_bindings(const Common& c) {
  Valuation v;
  if (!c.bindings_file.empty()) v = parse_bindings(read_file(c.bindings_file), c.bindings_file);
  for (const auto& s : c.sets) apply_assignment(v, s);
  return v;
}

dsl::BudgetProgram load_program(const Common& c) { return dsl::parse(read_file(c.file), c.file); }

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void print_violations(const EvalReport& r) {
  for (const auto& v : r.violations) {
    std::cerr << (v.span.empty() ? "<unknown>" : v.span) << ": violated: " << v.text << " evaluates to " << v.value
              << '\n';
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Exact evaluation of budgets written in the tuplix calculus"};
  app.require_subcommand(1);

  Common eval_opts;
  bool substitute = false;
  auto* eval_cmd = app.add_subcommand("eval", "normalize a budget under bindings");
  add_common(eval_cmd, eval_opts);
  eval_cmd->add_flag("--substitute", substitute, "use residual tests of the form x - r to eliminate x");

  Common check_opts;
  auto* check_cmd = app.add_subcommand("check", "exit 0 iff the fully bound budget is consistent");
  add_common(check_cmd, check_opts);

  Common sweep_opts;
  std::string var, from, to, step;
  bool sweep_serial_flag = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a budget over a range of one variable");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--var", var, "param to sweep")->required();
  sweep_cmd->add_option("--from", from, "first value")->required();
  sweep_cmd->add_option("--to", to, "last value (inclusive)")->required();
  sweep_cmd->add_option("--step", step, "positive increment")->required();
  sweep_cmd->add_flag("--serial", sweep_serial_flag, "evaluate rows one at a time");

  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  bool axioms_serial = false;
  auto* axioms_cmd = app.add_subcommand("axioms", "run the randomized law suite");
  axioms_cmd->add_option("--trials", trials, "instantiations per law")->check(CLI::PositiveNumber);
  axioms_cmd->add_option("--seed", seed, "root seed");
  axioms_cmd->add_flag("--serial", axioms_serial, "run trials on one thread");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*axioms_cmd) {
    SuiteOptions options;
    options.trials = trials;
    options.seed = seed;
    auto results = axioms_serial ? run_axiom_suite_serial(options) : run_axiom_suite(options);
    std::cout << render_summary(results);
    return all_passed(results) ? kExitOk : kExitNull;
  }

  if (*eval_cmd) {
    auto program = load_program(eval_opts);
    auto report = cmd_eval(program, eval_opts.budget, load_bindings(eval_opts), substitute);
    std::cout << (eval_opts.format == "json" ? render_json(report) : render_text(report));
    return exit_code(report);
  }

  if (*check_cmd) {
    auto program = load_program(check_opts);
    auto result = cmd_check(program, check_opts.budget, load_bindings(check_opts));
    if (result.exit_code == kExitUsage) {
      std::cerr << "error: unbound params: " << join(result.missing) << '\n';
      return kExitUsage;
    }
    std::cout << (check_opts.format == "json" ? render_json(result.report) : render_text(result.report));
    print_violations(result.report);
    if (result.report.status == Status::Ok && !result.report.residual_tests.empty()) {
      std::cerr << "error: budget still has residual tests\n";
    }
    return result.exit_code;
  }

  auto program = load_program(sweep_opts);
  auto bindings = load_bindings(sweep_opts);
  Rational lo, hi, dx;
  try {
    lo = Rational::parse(from);
    hi = Rational::parse(to);
    dx = Rational::parse(step);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad sweep range: ") + e.what());
  }
  std::vector<SweepRow> rows;
  if (sweep_serial_flag) {
    // Same validation as cmd_sweep, then the single-threaded kernel.
    cmd_sweep(program, sweep_opts.budget, var, lo, lo, dx, bindings);
    rows = budget::cli::sweep_serial(dsl::elaborate(program, sweep_opts.budget), bindings, var, sweep_values(lo, hi, dx));
  } else {
    rows = cmd_sweep(program, sweep_opts.budget, var, lo, hi, dx, bindings);
  }
  std::cout << (sweep_opts.format == "json" ? render_sweep_json(var, rows) : render_sweep_text(var, rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const budget::dsl::ParseError& e) {
    std::cerr << e.what() << '\n';
  } catch (const budget::cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return budget::cli::kExitUsage;
}
