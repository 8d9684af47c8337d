#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "budget/tuplix.hpp"

namespace budget {

/// Randomized law checks for the budget algebra, the meadow and the
/// constraint encodings. Every trial draws its own seed from the root seed,
/// so the parallel and serial runners produce identical summaries.
struct AxiomCheck {
  std::string group;
  std::string name;
};

struct AxiomResult {
  std::string group;
  std::string name;
  std::size_t trials = 0;
  std::size_t passed = 0;
  /// Lowest trial index that failed.
  std::optional<std::size_t> first_failure;

  bool ok() const { return passed == trials; }
  friend bool operator==(const AxiomResult&, const AxiomResult&) = default;
};

using DenoteFn = std::function<GroundForm(const Tuplix&, const Valuation&)>;
using NormalizeFn = std::function<CanonicalTuplix(const Tuplix&, const Valuation&)>;

struct SuiteOptions {
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  /// Semantics under test. Swapping these lets tests confirm that a broken
  /// rule is caught and attributed to the right law.
  DenoteFn denote = [](const Tuplix& t, const Valuation& v) { return denote_ground(t, v); };
  NormalizeFn normalizer = [](const Tuplix& t, const Valuation& v) { return normalize(t, v); };
};

const std::vector<AxiomCheck>& axiom_checks();

std::vector<AxiomResult> run_axiom_suite(const SuiteOptions& options);
std::vector<AxiomResult> run_axiom_suite_serial(const SuiteOptions& options);

/// Runs one named check only.
AxiomResult run_axiom(const std::string& name, const SuiteOptions& options, bool parallel = true);

bool all_passed(const std::vector<AxiomResult>& results);
std::string render_summary(const std::vector<AxiomResult>& results);

}  // namespace budget
