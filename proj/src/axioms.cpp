#include "budget/axioms.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <sstream>

#include "budget/constraints.hpp"
#include "budget/sampling.hpp"

namespace budget {

namespace {

const std::vector<std::string> kChannels{"a", "b", "c"};
const std::vector<std::string> kVars{"u", "v", "w"};

/// One random ground instantiation: terms, amounts and channel sets over a
/// small alphabet, plus a valuation of every variable.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {
    RationalSampler sampler(rng_());
    for (const auto& name : kVars) valuation.emplace(name, sampler.next());
  }

  Tuplix term(std::size_t max_size = 6) {
    std::uniform_int_distribution<std::size_t> size(1, max_size);
    const std::size_t n = size(rng_);
    return random_tuplix(n, kChannels, kVars, rng_());
  }

  Expr amount() { return random_expr(rng_, kVars, 2); }

  std::string channel() {
    std::uniform_int_distribution<std::size_t> pick(0, kChannels.size() - 1);
    return kChannels[pick(rng_)];
  }

  Tuplix::ChannelSet channels() {
    Tuplix::ChannelSet out;
    std::bernoulli_distribution in(0.5);
    for (const auto& c : kChannels) {
      if (in(rng_)) out.insert(c);
    }
    return out;
  }

  bool coin() { return std::bernoulli_distribution(0.5)(rng_); }

  Rational value() { return RationalSampler(rng_(), SamplingPolicy{1000, 1000, 0.15, 0.3}).next(); }

  std::mt19937_64& rng() { return rng_; }

  Valuation valuation;

 private:
  std::mt19937_64 rng_;
};

using CheckFn = bool (*)(std::uint64_t, const SuiteOptions&);

struct Check {
  AxiomCheck id;
  CheckFn fn;
};

bool same(const SuiteOptions& o, const Tuplix& lhs, const Tuplix& rhs, const Valuation& v) {
  return o.denote(lhs, v) == o.denote(rhs, v);
}

Expr indicator_of(const Expr& e) { return Expr::div(e, e); }

// Budget algebra ----------------------------------------------------------

bool comm(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix x = d.term(), y = d.term();
  return same(o, x | y, y | x, d.valuation);
}

bool assoc(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix x = d.term(), y = d.term(), z = d.term();
  return same(o, (x | y) | z, Tuplix::comp(x, y | z), d.valuation);
}

bool eps_unit(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix x = d.term();
  return same(o, x | Tuplix::eps(), x, d.valuation);
}

bool delta_absorb(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix x = d.term();
  return same(o, x | Tuplix::delta(), Tuplix::delta(), d.valuation);
}

bool entry_accumulation(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  const std::string a = d.channel();
  Expr u = d.amount(), v = d.amount();
  return same(o, Tuplix::entry(a, u) | Tuplix::entry(a, v), Tuplix::entry(a, u + v), d.valuation);
}

bool test_indicator(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Expr u = d.amount();
  return same(o, Tuplix::test(u), Tuplix::test(indicator_of(u)), d.valuation);
}

bool test_zero(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix x = d.term();
  Tuplix zero = Tuplix::test(Expr::constant(0));
  return same(o, zero, Tuplix::eps(), d.valuation) && same(o, x | zero, x | Tuplix::eps(), d.valuation);
}

bool test_one(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix x = d.term();
  Tuplix one = Tuplix::test(Expr::constant(1));
  return same(o, one, Tuplix::delta(), d.valuation) && same(o, x | one, x | Tuplix::delta(), d.valuation);
}

bool test_conjunction(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Expr u = d.amount(), v = d.amount();
  return same(o, Tuplix::test(u) | Tuplix::test(v), Tuplix::test(indicator_of(u) + indicator_of(v)), d.valuation);
}

bool test_substitution(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  const std::string a = d.channel();
  Expr u = d.amount();
  // Half the time make the test pass with a syntactically different v.
  Expr v = d.coin() ? Expr::constant(eval(u, d.valuation)) : d.amount();
  Tuplix guard = Tuplix::test(u - v);
  return same(o, guard | Tuplix::entry(a, u), guard | Tuplix::entry(a, v), d.valuation);
}

bool encap_eps(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  return same(o, Tuplix::encap(d.channels(), Tuplix::eps()), Tuplix::eps(), d.valuation);
}

bool encap_delta(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  return same(o, Tuplix::encap(d.channels(), Tuplix::delta()), Tuplix::delta(), d.valuation);
}

bool encap_test(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Expr u = d.amount();
  return same(o, Tuplix::encap(d.channels(), Tuplix::test(u)), Tuplix::test(u), d.valuation);
}

bool encap_entry(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  const auto hidden = d.channels();
  const std::string a = d.channel();
  Expr u = d.amount();
  Tuplix expected = hidden.count(a) ? Tuplix::test(u) : Tuplix::entry(a, u);
  return same(o, Tuplix::encap(hidden, Tuplix::entry(a, u)), expected, d.valuation);
}

bool encap_distribution(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  const auto h = d.channels();
  Tuplix x = d.term(), y = d.term();
  Tuplix lhs = Tuplix::encap(h, x | Tuplix::encap(h, y));
  Tuplix rhs = Tuplix::encap(h, x) | Tuplix::encap(h, y);
  return same(o, lhs, rhs, d.valuation);
}

bool encap_union(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  const auto h1 = d.channels();
  const auto h2 = d.channels();
  Tuplix x = d.term();
  Tuplix::ChannelSet both = h1;
  both.insert(h2.begin(), h2.end());
  return same(o, Tuplix::encap(both, x), Tuplix::encap(h1, Tuplix::encap(h2, x)), d.valuation);
}

bool encap_empty(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix x = d.term();
  return same(o, Tuplix::encap({}, x), x, d.valuation);
}

// Normalizer against the reference semantics -------------------------------

bool normalize_oracle(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix t = d.term(12);
  auto ground = o.normalizer(t, d.valuation).ground();
  return ground && *ground == o.denote(t, d.valuation);
}

bool normalize_open_sound(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix t = d.term(12);
  Tuplix normal = reconstruct(o.normalizer(t, {}));
  return same(o, normal, t, d.valuation);
}

bool normalize_idempotent(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix t = d.term(12);
  CanonicalTuplix c = o.normalizer(t, {});
  return o.normalizer(reconstruct(c), {}) == c;
}

bool normalize_commutative(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Tuplix x = d.term(), y = d.term();
  CanonicalTuplix l = o.normalizer(x | y, {});
  CanonicalTuplix r = o.normalizer(y | x, {});
  if (l.null != r.null) return false;
  if (l.null) return true;
  if (l.entries != r.entries || l.tests.size() != r.tests.size()) return false;
  // Tests keep first-occurrence order, so compare them as multisets.
  auto sorted = [](std::vector<Expr> tests) {
    std::sort(tests.begin(), tests.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    return tests;
  };
  return sorted(l.tests) == sorted(r.tests);
}

bool test_substitution_sound(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  const std::string& x = kVars[std::uniform_int_distribution<std::size_t>(0, kVars.size() - 1)(d.rng())];
  std::vector<std::string> others;
  for (const auto& name : kVars) {
    if (name != x) others.push_back(name);
  }
  Expr r = random_expr(d.rng(), others, 2);
  Tuplix t = Tuplix::test(Expr::var(x) - r) | d.term(8);
  if (d.coin()) d.valuation.insert_or_assign(x, eval(r, d.valuation));
  CanonicalTuplix c = o.normalizer(t, {});
  CanonicalTuplix s = apply_test_substitution(c);
  return same(o, reconstruct(c), reconstruct(s), d.valuation) && same(o, reconstruct(s), t, d.valuation);
}

// Meadow ------------------------------------------------------------------

bool add_comm(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value(), y = d.value();
  return add(x, y) == add(y, x);
}

bool mul_comm(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value(), y = d.value();
  return mul(x, y) == mul(y, x);
}

bool add_assoc(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value(), y = d.value(), z = d.value();
  return add(add(x, y), z) == add(x, add(y, z));
}

bool mul_assoc(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value(), y = d.value(), z = d.value();
  return mul(mul(x, y), z) == mul(x, mul(y, z));
}

bool distributive(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value(), y = d.value(), z = d.value();
  return mul(x, add(y, z)) == add(mul(x, y), mul(x, z));
}

bool identities(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value();
  return add(x, 0) == x && mul(x, 1) == x && add(x, neg(x)).is_zero() && sub(x, x).is_zero();
}

bool minv_involution(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value();
  return minv(minv(x)) == x;
}

bool restricted_inverse(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value();
  return mul(x, mul(x, minv(x))) == x;
}

bool minv_zero(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value();
  return minv(Rational()).is_zero() && div(x, Rational()).is_zero();
}

bool indicator_range(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational x = d.value();
  Rational i = indicator(x);
  return (i == Rational(0) || i == Rational(1)) && (i.is_zero() == x.is_zero());
}

bool leq_encode_sign(std::uint64_t seed, const SuiteOptions&) {
  Draw d(seed);
  Rational p = d.value();
  Rational q = d.coin() ? p : d.value();
  Rational e = leq_encode(p, q);
  return e.sign() >= 0 && (e.is_zero() == (p <= q));
}

// Constraint encodings ----------------------------------------------------

bool constraint_leq(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Expr p = d.amount();
  Expr q = d.coin() ? d.amount() : p + Expr::constant(d.value());
  const bool holds = eval(p, d.valuation) <= eval(q, d.valuation);
  return o.denote(test_leq(p, q), d.valuation) == (holds ? GroundForm{} : GroundForm::null_form());
}

bool constraint_eq(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  Expr p = d.amount();
  Expr q = d.coin() ? Expr::constant(eval(p, d.valuation)) : d.amount();
  const bool holds = eval(p, d.valuation) == eval(q, d.valuation);
  return o.denote(test_eq(p, q), d.valuation) == (holds ? GroundForm{} : GroundForm::null_form());
}

bool constraint_and(std::uint64_t seed, const SuiteOptions& o) {
  Draw d(seed);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(d.rng());
  std::vector<Expr> args;
  std::vector<Tuplix> tests;
  for (std::size_t i = 0; i < n; ++i) {
    // Zero-valued arguments are common enough that all-pass cases occur.
    Expr e = d.coin() ? Expr::mul(Expr::constant(0), d.amount()) : d.amount();
    args.push_back(e);
    tests.push_back(Tuplix::test(e));
  }
  return same(o, test_and(args), compose(tests), d.valuation);
}

const std::vector<Check>& registry() {
  static const std::vector<Check> checks{
      {{"algebra", "composition commutes"}, comm},
      {{"algebra", "composition associates"}, assoc},
      {{"algebra", "eps is a unit"}, eps_unit},
      {{"algebra", "delta absorbs"}, delta_absorb},
      {{"algebra", "entries accumulate"}, entry_accumulation},
      {{"algebra", "test(u) = test(u/u)"}, test_indicator},
      {{"algebra", "test(0) = eps"}, test_zero},
      {{"algebra", "test(1) = delta"}, test_one},
      {{"algebra", "test conjunction"}, test_conjunction},
      {{"algebra", "test substitution"}, test_substitution},
      {{"algebra", "enc of eps"}, encap_eps},
      {{"algebra", "enc of delta"}, encap_delta},
      {{"algebra", "enc of test"}, encap_test},
      {{"algebra", "enc of entry"}, encap_entry},
      {{"algebra", "enc distributes"}, encap_distribution},
      {{"algebra", "enc of union"}, encap_union},
      {{"algebra", "enc of empty set"}, encap_empty},
      {{"normalizer", "agrees with denotation"}, normalize_oracle},
      {{"normalizer", "open normal form is sound"}, normalize_open_sound},
      {{"normalizer", "idempotent"}, normalize_idempotent},
      {{"normalizer", "stable under commutation"}, normalize_commutative},
      {{"normalizer", "test substitution is sound"}, test_substitution_sound},
      {{"meadow", "addition commutes"}, add_comm},
      {{"meadow", "multiplication commutes"}, mul_comm},
      {{"meadow", "addition associates"}, add_assoc},
      {{"meadow", "multiplication associates"}, mul_assoc},
      {{"meadow", "distributivity"}, distributive},
      {{"meadow", "identities and inverse"}, identities},
      {{"meadow", "minv(minv(x)) = x"}, minv_involution},
      {{"meadow", "x*(x*minv(x)) = x"}, restricted_inverse},
      {{"meadow", "minv(0) = 0"}, minv_zero},
      {{"meadow", "indicator in {0,1}"}, indicator_range},
      {{"meadow", "leq encoding"}, leq_encode_sign},
      {{"constraints", "test_leq iff p <= q"}, constraint_leq},
      {{"constraints", "test_eq iff p = q"}, constraint_eq},
      {{"constraints", "test_and = composed tests"}, constraint_and},
  };
  return checks;
}

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

bool run_trial(const Check& check, std::uint64_t seed, const SuiteOptions& o) {
  try {
    return check.fn(seed, o);
  } catch (...) {
    return false;
  }
}

AxiomResult run_check(const Check& check, const SuiteOptions& o, bool parallel) {
  const std::uint64_t root = derive_seed(o.seed, name_hash(check.id.group + "/" + check.id.name));
  const long n = static_cast<long>(o.trials);
  std::size_t passed = 0;
  std::size_t first = std::numeric_limits<std::size_t>::max();
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : passed) reduction(min : first)
    for (long t = 0; t < n; ++t) {
      if (run_trial(check, derive_seed(root, static_cast<std::uint64_t>(t)), o)) {
        ++passed;
      } else {
        first = std::min(first, static_cast<std::size_t>(t));
      }
    }
  } else {
    for (long t = 0; t < n; ++t) {
      if (run_trial(check, derive_seed(root, static_cast<std::uint64_t>(t)), o)) {
        ++passed;
      } else {
        first = std::min(first, static_cast<std::size_t>(t));
      }
    }
  }
  AxiomResult r{check.id.group, check.id.name, o.trials, passed, std::nullopt};
  if (first != std::numeric_limits<std::size_t>::max()) r.first_failure = first;
  return r;
}

std::vector<AxiomResult> run_all(const SuiteOptions& o, bool parallel) {
  if (o.trials == 0) throw std::invalid_argument("axiom suite needs at least one trial");
  std::vector<AxiomResult> out;
  for (const auto& check : registry()) out.push_back(run_check(check, o, parallel));
  return out;
}

}  // namespace

const std::vector<AxiomCheck>& axiom_checks() {
  static const std::vector<AxiomCheck> ids = [] {
    std::vector<AxiomCheck> v;
    for (const auto& c : registry()) v.push_back(c.id);
    return v;
  }();
  return ids;
}

std::vector<AxiomResult> run_axiom_suite(const SuiteOptions& options) { return run_all(options, true); }

std::vector<AxiomResult> run_axiom_suite_serial(const SuiteOptions& options) { return run_all(options, false); }

AxiomResult run_axiom(const std::string& name, const SuiteOptions& options, bool parallel) {
  for (const auto& check : registry()) {
    if (check.id.name == name) return run_check(check, options, parallel);
  }
  throw std::invalid_argument("unknown axiom check '" + name + "'");
}

bool all_passed(const std::vector<AxiomResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.ok(); });
}

std::string render_summary(const std::vector<AxiomResult>& results) {
  std::size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.group.size() + r.name.size() + 2);
  std::ostringstream os;
  for (const auto& r : results) {
    os << std::left << std::setw(static_cast<int>(width)) << (r.group + ": " + r.name) << "  " << r.passed << "/"
       << r.trials;
    if (r.ok()) {
      os << "  ok";
    } else {
      os << "  FAIL (first failing trial " << *r.first_failure << ")";
    }
    os << '\n';
  }
  const auto failed = std::count_if(results.begin(), results.end(), [](const AxiomResult& r) { return !r.ok(); });
  os << (failed == 0 ? "all " + std::to_string(results.size()) + " checks passed"
                     : std::to_string(failed) + " of " + std::to_string(results.size()) + " checks failed")
     << '\n';
  return os.str();
}

}  // namespace budget
