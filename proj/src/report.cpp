#include "budget/report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace budget::cli {

int exit_code(const EvalReport& r) { return r.status == Status::Ok ? kExitOk : kExitNull; }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void bind(Valuation& v, std::string_view name, std::string_view value, const std::string& where) {
  name = trim(name);
  if (name.empty()) throw UsageError(where + ": missing variable name");
  try {
    v.insert_or_assign(std::string(name), Rational::parse(value));
  } catch (const std::exception& e) {
    throw UsageError(where + ": " + e.what());
  }
}

}  // namespace

Valuation parse_bindings(std::string_view text, const std::string& source) {
  Valuation v;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view() : text.substr(eol + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw UsageError(where + ": expected VAR = RATIONAL");
    bind(v, line.substr(0, eq), line.substr(eq + 1), where);
  }
  return v;
}

void apply_assignment(Valuation& v, std::string_view assignment) {
  auto eq = assignment.find('=');
  const std::string where = "--set " + std::string(assignment);
  if (eq == std::string_view::npos) throw UsageError(where + ": expected VAR=RATIONAL");
  bind(v, assignment.substr(0, eq), assignment.substr(eq + 1), where);
}

void check_bindings_known(const dsl::BudgetProgram& p, const Valuation& v) {
  std::set<std::string, std::less<>> params;
  for (const auto& param : p.params) params.insert(param.name);
  for (const auto& [name, value] : v) {
    if (!params.count(name)) throw UsageError("unknown variable '" + name + "' in bindings");
  }
}

std::vector<std::string> missing_bindings(const Tuplix& term, const Valuation& v) {
  std::vector<std::string> out;
  for (const auto& name : free_vars(term)) {
    if (!v.count(name)) out.push_back(name);
  }
  return out;
}

EvalReport make_report(const CanonicalTuplix& c, const Valuation& v) {
  EvalReport r;
  r.bindings_used = v;
  if (c.null) {
    r.status = Status::Null;
    r.violations = c.violations;
    return r;
  }
  for (const auto& t : c.tests) r.residual_tests.push_back(to_string(t));
  if (c.closed()) {
    for (const auto& [channel, amount] : c.entries) r.entries.emplace(channel, amount.value());
  } else {
    for (const auto& [channel, amount] : c.entries) r.open_entries.emplace(channel, to_string(amount));
  }
  return r;
}

EvalReport cmd_eval(const dsl::BudgetProgram& p, std::string_view budget, const Valuation& bindings,
                    bool substitute_tests) {
  check_bindings_known(p, bindings);
  Tuplix term = dsl::elaborate(p, budget);
  CanonicalTuplix c = normalize(term, bindings);
  if (substitute_tests) c = apply_test_substitution(c);
  return make_report(c, bindings);
}

CheckResult cmd_check(const dsl::BudgetProgram& p, std::string_view budget, const Valuation& bindings) {
  check_bindings_known(p, bindings);
  Tuplix term = dsl::elaborate(p, budget);
  CheckResult out;
  out.missing = missing_bindings(term, bindings);
  if (!out.missing.empty()) {
    out.exit_code = kExitUsage;
    return out;
  }
  out.report = make_report(normalize(term, bindings), bindings);
  const bool clean = out.report.status == Status::Ok && out.report.residual_tests.empty();
  out.exit_code = clean ? kExitOk : kExitNull;
  return out;
}

std::vector<Rational> sweep_values(const Rational& from, const Rational& to, const Rational& step) {
  if (step.sign() <= 0) throw UsageError("sweep step must be positive");
  if (to < from) throw UsageError("sweep range is empty: from > to");
  std::vector<Rational> values;
  for (Rational x = from; x <= to; x += step) values.push_back(x);
  return values;
}

namespace {

EvalReport sweep_row(const Tuplix& term, Valuation v, const std::string& var, const Rational& value) {
  v.insert_or_assign(var, value);
  return make_report(normalize(term, v), v);
}

}  // namespace

std::vector<SweepRow> sweep(const Tuplix& term, const Valuation& base, const std::string& var,
                            const std::vector<Rational>& values) {
  std::vector<SweepRow> rows(values.size());
  const long n = static_cast<long>(values.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    rows[i].value = values[i];
    rows[i].report = sweep_row(term, base, var, values[i]);
  }
  return rows;
}

std::vector<SweepRow> sweep_serial(const Tuplix& term, const Valuation& base, const std::string& var,
                                   const std::vector<Rational>& values) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (const auto& value : values) rows.push_back({value, sweep_row(term, base, var, value)});
  return rows;
}

std::vector<SweepRow> cmd_sweep(const dsl::BudgetProgram& p, std::string_view budget, const std::string& var,
                                const Rational& from, const Rational& to, const Rational& step,
                                const Valuation& bindings) {
  check_bindings_known(p, bindings);
  if (std::none_of(p.params.begin(), p.params.end(), [&](const auto& param) { return param.name == var; })) {
    throw UsageError("sweep variable '" + var + "' is not a declared param");
  }
  Tuplix term = dsl::elaborate(p, budget);
  Valuation probe = bindings;
  probe.insert_or_assign(var, Rational());
  auto missing = missing_bindings(term, probe);
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    throw UsageError("unbound params: " + names);
  }
  return sweep(term, bindings, var, sweep_values(from, to, step));
}

namespace {

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json j;
  j["status"] = r.status == Status::Ok ? "ok" : "null";
  j["entries"] = nlohmann::json::object();
  for (const auto& [channel, amount] : r.entries) j["entries"][channel] = amount.to_string();
  j["residual_tests"] = r.residual_tests;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations) {
    j["violations"].push_back({{"span", v.span}, {"test", v.text}, {"value", v.value.to_string()}});
  }
  return j;
}

}  // namespace

std::string render_json(const EvalReport& r) { return to_json(r).dump(2) + "\n"; }

std::string render_text(const EvalReport& r) {
  std::ostringstream os;
  os << "status: " << (r.status == Status::Ok ? "ok" : "null") << '\n';
  if (!r.entries.empty() || !r.open_entries.empty()) {
    os << "entries:\n";
    for (const auto& [channel, amount] : r.entries) os << "  " << channel << "(" << amount << ")\n";
    for (const auto& [channel, amount] : r.open_entries) os << "  " << channel << "(" << amount << ")\n";
  }
  if (!r.residual_tests.empty()) {
    os << "residual tests:\n";
    for (const auto& t : r.residual_tests) os << "  test(" << t << ")\n";
  }
  if (!r.violations.empty()) {
    os << "violations:\n";
    for (const auto& v : r.violations) {
      os << "  " << (v.span.empty() ? "<unknown>" : v.span) << ": " << v.text << " evaluates to " << v.value << '\n';
    }
  }
  return os.str();
}

std::string render_sweep_json(const std::string& var, const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json j = to_json(row.report);
    j["variable"] = var;
    j["value"] = row.value.to_string();
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string render_sweep_text(const std::string& var, const std::vector<SweepRow>& rows) {
  std::set<std::string> channels;
  for (const auto& row : rows) {
    for (const auto& [channel, amount] : row.report.entries) channels.insert(channel);
    for (const auto& [channel, amount] : row.report.open_entries) channels.insert(channel);
  }
  std::vector<std::string> header{var, "status"};
  header.insert(header.end(), channels.begin(), channels.end());
  std::vector<std::vector<std::string>> table{header};
  for (const auto& row : rows) {
    std::vector<std::string> line{row.value.to_string(), row.report.status == Status::Ok ? "ok" : "NULL"};
    for (const auto& channel : channels) {
      if (row.report.status == Status::Null) {
        line.push_back("NULL");
      } else if (auto it = row.report.entries.find(channel); it != row.report.entries.end()) {
        line.push_back(it->second.to_string());
      } else if (auto open = row.report.open_entries.find(channel); open != row.report.open_entries.end()) {
        line.push_back(open->second);
      } else {
        line.push_back("-");
      }
    }
    table.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream os;
  for (const auto& line : table) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << std::left << std::setw(static_cast<int>(width[i])) << line[i] << (i + 1 < line.size() ? "  " : "");
    }
    os << '\n';
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace budget::cli
