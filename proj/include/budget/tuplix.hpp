#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "budget/expr.hpp"
#include "budget/meadow.hpp"

namespace budget {

/// Where a test (or a nullifying construct) came from, for diagnostics.
/// `parts` lists the named conjuncts of a conjunction so that a failing
/// conjunction can be reported by the conjunct that actually fails.
struct Origin {
  struct Part {
    std::string span;
    std::string text;
    Expr expr;
  };
  std::string span;
  std::string text;
  std::vector<Part> parts;
};

using OriginPtr = std::shared_ptr<const Origin>;

/// Immutable budget term: eps, delta, entries a(p), zero tests, composition
/// and encapsulation. Equality is structural and ignores origins.
class Tuplix {
 public:
  enum class Kind { Eps, Delta, Entry, Test, Comp, Encap };
  using ChannelSet = std::set<std::string>;

  static Tuplix eps(OriginPtr origin = nullptr);
  static Tuplix delta(OriginPtr origin = nullptr);
  static Tuplix entry(std::string channel, Expr amount, OriginPtr origin = nullptr);
  static Tuplix test(Expr arg, OriginPtr origin = nullptr);
  static Tuplix comp(Tuplix lhs, Tuplix rhs, OriginPtr origin = nullptr);
  static Tuplix encap(ChannelSet channels, Tuplix body, OriginPtr origin = nullptr);

  Kind kind() const;
  /// Entry only.
  const std::string& channel() const;
  /// Entry: the amount; Test: the tested expression.
  const Expr& expr() const;
  /// Comp only.
  const Tuplix& lhs() const;
  const Tuplix& rhs() const;
  /// Encap only.
  const ChannelSet& channels() const;
  const Tuplix& body() const;
  const OriginPtr& origin() const;

  friend bool operator==(const Tuplix& a, const Tuplix& b);

 private:
  struct Node;
  explicit Tuplix(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

inline Tuplix operator|(Tuplix a, Tuplix b) { return Tuplix::comp(std::move(a), std::move(b)); }

/// Composition of a list, left-associated; eps for an empty list.
Tuplix compose(const std::vector<Tuplix>& parts);

std::set<std::string> free_vars(const Tuplix& t);

/// Human-readable rendering in the budget language's surface syntax.
std::string to_string(const Tuplix& t);

/// Meaning of a closed budget: null, or channel -> accumulated amount.
/// Channels whose amounts cancel to 0 are kept: a(0) is not eps.
struct GroundForm {
  bool null = false;
  std::map<std::string, Rational> entries;

  static GroundForm null_form() { return {true, {}}; }
  friend bool operator==(const GroundForm& a, const GroundForm& b) = default;
};

std::string to_string(const GroundForm& g);

/// Reference semantics by structural recursion, with no rewriting.
GroundForm denote_ground(const Tuplix& t, const Valuation& v);

/// A failing closed test recorded during normalization.
struct Violation {
  std::string span;
  std::string text;
  Rational value;
};

/// Normal form of a possibly open budget: null, or residual tests plus one
/// constant-folded amount per channel.
///
/// Tests are kept in first-occurrence order and never fold to a constant.
/// `origins` runs parallel to `tests`. `violations` explains a null result
/// and is empty otherwise. Equality ignores origins and violations.
struct CanonicalTuplix {
  bool null = false;
  std::vector<Expr> tests;
  std::vector<OriginPtr> origins;
  std::map<std::string, Expr> entries;
  std::vector<Violation> violations;

  /// True when there are no residual tests and all amounts are constants.
  bool closed() const;
  /// The ground form when closed().
  std::optional<GroundForm> ground() const;

  friend bool operator==(const CanonicalTuplix& a, const CanonicalTuplix& b);
};

/// Normalizes under a partial valuation; unbound variables stay symbolic.
///
/// Implements composition (flattened, entries accumulated per channel), the
/// unit and absorption laws for eps and delta, closed zero tests (0 drops,
/// anything else nullifies), and encapsulation innermost-first: the balance
/// of each encapsulated channel becomes a test and its entries disappear.
CanonicalTuplix normalize(const Tuplix& t, const Valuation& v = {});

/// Term whose normal form is `c`: delta, or the composition of its tests
/// followed by its entries.
Tuplix reconstruct(const CanonicalTuplix& c);

/// Rewrites with gamma(u - v) | a(u) = gamma(u - v) | a(v): every residual test
/// of the shape x - r (or r - x, or x + c) with x not free in r substitutes r
/// for x in all entries and in the other tests. Iterates to a fixed point,
/// giving up after kMaxTestSubstitutionRounds rounds.
CanonicalTuplix apply_test_substitution(const CanonicalTuplix& c);
inline constexpr int kMaxTestSubstitutionRounds = 100;

bool equiv_ground(const Tuplix& a, const Tuplix& b, const Valuation& v);

/// equiv_ground on `trials` random valuations of the joint free variables,
/// using the same zero-inclusive sampling as equiv_prob.
bool equiv_prob_tuplix(const Tuplix& a, const Tuplix& b, std::size_t trials, std::uint64_t seed);

/// Random term with `size` constructor nodes over the given alphabets.
/// Leaves are eps, delta, entries and tests; inner nodes are compositions
/// and encapsulations. Deterministic in `seed`.
Tuplix random_tuplix(std::size_t size, const std::vector<std::string>& channels,
                     const std::vector<std::string>& vars, std::uint64_t seed);

/// Small random amount expression over `vars` (constants only when empty).
Expr random_expr(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth);

}  // namespace budget
