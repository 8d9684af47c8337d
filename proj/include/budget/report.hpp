#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "budget/dsl.hpp"
#include "budget/expr.hpp"
#include "budget/tuplix.hpp"

namespace budget::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNull = 1;
inline constexpr int kExitUsage = 2;

/// Bad invocation: unknown or missing variables, malformed bindings, bad
/// sweep ranges. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Status { Ok, Null };

struct EvalReport {
  Status status = Status::Ok;
  /// Channel amounts; filled only when the result is ok and fully closed.
  std::map<std::string, Rational> entries;
  /// Pretty-printed amounts when some amount is still symbolic.
  std::map<std::string, std::string> open_entries;
  std::vector<std::string> residual_tests;
  std::vector<Violation> violations;
  Valuation bindings_used;

  bool closed() const { return status == Status::Null || (open_entries.empty() && residual_tests.empty()); }
};

int exit_code(const EvalReport& r);

/// Parses "VAR = RATIONAL" lines; '#' starts a comment.
Valuation parse_bindings(std::string_view text, const std::string& source = "bindings");
/// Applies one "VAR=RATIONAL" assignment; later assignments win.
void apply_assignment(Valuation& v, std::string_view assignment);

/// Rejects bindings for names that are not declared params.
void check_bindings_known(const dsl::BudgetProgram& p, const Valuation& v);
/// Free variables of `term` without a binding, sorted.
std::vector<std::string> missing_bindings(const Tuplix& term, const Valuation& v);

EvalReport make_report(const CanonicalTuplix& c, const Valuation& v);

EvalReport cmd_eval(const dsl::BudgetProgram& p, std::string_view budget, const Valuation& bindings,
                    bool substitute_tests = false);

struct CheckResult {
  int exit_code = kExitOk;
  EvalReport report;
  std::vector<std::string> missing;
};

/// Exit 0 iff the budget is not null and has no residual tests; 2 when some
/// param of the budget is unbound.
CheckResult cmd_check(const dsl::BudgetProgram& p, std::string_view budget, const Valuation& bindings);

struct SweepRow {
  Rational value;
  EvalReport report;
};

/// from, from + step, ... while <= to. Requires step > 0 and from <= to.
std::vector<Rational> sweep_values(const Rational& from, const Rational& to, const Rational& step);

/// Evaluates `term` once per value of `var`, rows in value order.
/// Rows are independent and evaluated in parallel.
std::vector<SweepRow> sweep(const Tuplix& term, const Valuation& base, const std::string& var,
                            const std::vector<Rational>& values);
/// Reference implementation of sweep, one row after another.
std::vector<SweepRow> sweep_serial(const Tuplix& term, const Valuation& base, const std::string& var,
                                   const std::vector<Rational>& values);

/// Validates bindings and range, then runs sweep.
std::vector<SweepRow> cmd_sweep(const dsl::BudgetProgram& p, std::string_view budget, const std::string& var,
                                const Rational& from, const Rational& to, const Rational& step,
                                const Valuation& bindings);

/// Stable JSON: sorted keys, rationals as "n/d" strings.
std::string render_json(const EvalReport& r);
std::string render_text(const EvalReport& r);
std::string render_sweep_json(const std::string& var, const std::vector<SweepRow>& rows);
std::string render_sweep_text(const std::string& var, const std::vector<SweepRow>& rows);

std::string read_file(const std::string& path);

}  // namespace budget::cli
