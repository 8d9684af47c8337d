#include "budget/tuplix.hpp"

#include <algorithm>
#include <sstream>

#include "budget/sampling.hpp"

namespace budget {

struct Tuplix::Node {
  Kind kind;
  std::string channel;
  Expr expr;
  Tuplix lhs;
  Tuplix rhs;
  ChannelSet channels;
  OriginPtr origin;

  Node(Kind k, OriginPtr o) : kind(k), lhs(nullptr), rhs(nullptr), origin(std::move(o)) {}
};

Tuplix Tuplix::eps(OriginPtr origin) {
  return Tuplix(std::make_shared<const Node>(Kind::Eps, std::move(origin)));
}

Tuplix Tuplix::delta(OriginPtr origin) {
  return Tuplix(std::make_shared<const Node>(Kind::Delta, std::move(origin)));
}

Tuplix Tuplix::entry(std::string channel, Expr amount, OriginPtr origin) {
  if (channel.empty()) throw std::invalid_argument("empty channel name");
  auto n = std::make_shared<Node>(Kind::Entry, std::move(origin));
  n->channel = std::move(channel);
  n->expr = std::move(amount);
  return Tuplix(std::shared_ptr<const Node>(std::move(n)));
}

Tuplix Tuplix::test(Expr arg, OriginPtr origin) {
  auto n = std::make_shared<Node>(Kind::Test, std::move(origin));
  n->expr = std::move(arg);
  return Tuplix(std::shared_ptr<const Node>(std::move(n)));
}

Tuplix Tuplix::comp(Tuplix lhs, Tuplix rhs, OriginPtr origin) {
  auto n = std::make_shared<Node>(Kind::Comp, std::move(origin));
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Tuplix(std::shared_ptr<const Node>(std::move(n)));
}

Tuplix Tuplix::encap(ChannelSet channels, Tuplix body, OriginPtr origin) {
  for (const auto& c : channels) {
    if (c.empty()) throw std::invalid_argument("empty channel name");
  }
  auto n = std::make_shared<Node>(Kind::Encap, std::move(origin));
  n->channels = std::move(channels);
  n->lhs = std::move(body);
  return Tuplix(std::shared_ptr<const Node>(std::move(n)));
}

Tuplix::Kind Tuplix::kind() const { return node_->kind; }
const std::string& Tuplix::channel() const { return node_->channel; }
const Expr& Tuplix::expr() const { return node_->expr; }
const Tuplix& Tuplix::lhs() const { return node_->lhs; }
const Tuplix& Tuplix::rhs() const { return node_->rhs; }
const Tuplix::ChannelSet& Tuplix::channels() const { return node_->channels; }
const Tuplix& Tuplix::body() const { return node_->lhs; }
const OriginPtr& Tuplix::origin() const { return node_->origin; }

bool operator==(const Tuplix& a, const Tuplix& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Tuplix::Kind::Eps:
    case Tuplix::Kind::Delta:
      return true;
    case Tuplix::Kind::Entry:
      return a.channel() == b.channel() && a.expr() == b.expr();
    case Tuplix::Kind::Test:
      return a.expr() == b.expr();
    case Tuplix::Kind::Comp:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Tuplix::Kind::Encap:
      return a.channels() == b.channels() && a.body() == b.body();
  }
  return false;
}

Tuplix compose(const std::vector<Tuplix>& parts) {
  if (parts.empty()) return Tuplix::eps();
  Tuplix acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = Tuplix::comp(acc, parts[i]);
  return acc;
}

namespace {

void collect_free_vars(const Tuplix& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Tuplix::Kind::Eps:
    case Tuplix::Kind::Delta:
      return;
    case Tuplix::Kind::Entry:
    case Tuplix::Kind::Test:
      budget::collect_free_vars(t.expr(), out);
      return;
    case Tuplix::Kind::Comp:
      collect_free_vars(t.lhs(), out);
      collect_free_vars(t.rhs(), out);
      return;
    case Tuplix::Kind::Encap:
      collect_free_vars(t.body(), out);
      return;
  }
}

void print(std::ostream& os, const Tuplix& t, bool nested) {
  switch (t.kind()) {
    case Tuplix::Kind::Eps:
      os << "eps";
      return;
    case Tuplix::Kind::Delta:
      os << "delta";
      return;
    case Tuplix::Kind::Entry:
      os << t.channel() << '(' << to_string(t.expr()) << ')';
      return;
    case Tuplix::Kind::Test:
      os << "test(" << to_string(t.expr()) << ')';
      return;
    case Tuplix::Kind::Comp:
      if (nested) os << '(';
      print(os, t.lhs(), false);
      os << " | ";
      print(os, t.rhs(), true);
      if (nested) os << ')';
      return;
    case Tuplix::Kind::Encap: {
      os << "enc{";
      bool first = true;
      for (const auto& c : t.channels()) {
        if (!first) os << ", ";
        os << c;
        first = false;
      }
      os << "}(";
      print(os, t.body(), false);
      os << ')';
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_vars(const Tuplix& t) {
  std::set<std::string> out;
  collect_free_vars(t, out);
  return out;
}

std::string to_string(const Tuplix& t) {
  std::ostringstream os;
  print(os, t, false);
  return os.str();
}

std::string to_string(const GroundForm& g) {
  if (g.null) return "delta";
  if (g.entries.empty()) return "eps";
  std::string out;
  for (const auto& [channel, amount] : g.entries) {
    if (!out.empty()) out += " | ";
    out += channel + "(" + amount.to_string() + ")";
  }
  return out;
}

GroundForm denote_ground(const Tuplix& t, const Valuation& v) {
  switch (t.kind()) {
    case Tuplix::Kind::Eps:
      return {};
    case Tuplix::Kind::Delta:
      return GroundForm::null_form();
    case Tuplix::Kind::Entry:
      return {false, {{t.channel(), eval(t.expr(), v)}}};
    case Tuplix::Kind::Test:
      return eval(t.expr(), v).is_zero() ? GroundForm{} : GroundForm::null_form();
    case Tuplix::Kind::Comp: {
      GroundForm l = denote_ground(t.lhs(), v);
      GroundForm r = denote_ground(t.rhs(), v);
      if (l.null || r.null) return GroundForm::null_form();
      for (auto& [channel, amount] : r.entries) {
        auto [it, inserted] = l.entries.emplace(channel, amount);
        if (!inserted) it->second += amount;
      }
      return l;
    }
    case Tuplix::Kind::Encap: {
      GroundForm b = denote_ground(t.body(), v);
      if (b.null) return b;
      for (const auto& channel : t.channels()) {
        auto it = b.entries.find(channel);
        if (it == b.entries.end()) continue;
        if (!it->second.is_zero()) return GroundForm::null_form();
        b.entries.erase(it);
      }
      return b;
    }
  }
  return {};
}

bool CanonicalTuplix::closed() const {
  if (null) return true;
  if (!tests.empty()) return false;
  return std::all_of(entries.begin(), entries.end(), [](const auto& kv) { return kv.second.is_const(); });
}

std::optional<GroundForm> CanonicalTuplix::ground() const {
  if (!closed()) return std::nullopt;
  if (null) return GroundForm::null_form();
  GroundForm g;
  for (const auto& [channel, amount] : entries) g.entries.emplace(channel, amount.value());
  return g;
}

bool operator==(const CanonicalTuplix& a, const CanonicalTuplix& b) {
  if (a.null != b.null) return false;
  if (a.null) return true;
  return a.tests == b.tests && a.entries == b.entries;
}

namespace {

/// Sum of accumulated amounts in a canonical order: constants are merged,
/// the remaining summands sorted structurally, so that the result does not
/// depend on the order in which entries were composed.
Expr canonical_sum(const std::vector<Expr>& summands) {
  Rational constant;
  std::vector<Expr> symbolic;
  for (const auto& s : summands) {
    if (s.is_const()) {
      constant += s.value();
    } else {
      symbolic.push_back(s);
    }
  }
  if (symbolic.empty()) return Expr::constant(constant);
  std::stable_sort(symbolic.begin(), symbolic.end(),
                   [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
  Expr acc = symbolic.front();
  for (std::size_t i = 1; i < symbolic.size(); ++i) acc = Expr::add(acc, symbolic[i]);
  if (!constant.is_zero()) acc = Expr::add(acc, Expr::constant(constant));
  return fold_constants(acc);
}

struct TestItem {
  Expr expr;
  OriginPtr origin;
};

struct State {
  bool null = false;
  std::vector<Violation> violations;
  std::vector<TestItem> tests;
  std::map<std::string, std::vector<Expr>> summands;
};

State null_state(std::vector<Violation> violations) {
  State s;
  s.null = true;
  s.violations = std::move(violations);
  return s;
}

class Normalizer {
 public:
  explicit Normalizer(const Valuation& v) : valuation_(v) {}

  State run(const Tuplix& t) {
    switch (t.kind()) {
      case Tuplix::Kind::Eps:
        return {};
      case Tuplix::Kind::Delta: {
        const auto& o = t.origin();
        return null_state({{o ? o->span : std::string(), "delta", Rational(1)}});
      }
      case Tuplix::Kind::Entry: {
        State s;
        s.summands[t.channel()].push_back(close(t.expr()));
        return s;
      }
      case Tuplix::Kind::Test: {
        Expr e = close(t.expr());
        if (!e.is_const()) {
          State s;
          s.tests.push_back({e, t.origin()});
          return s;
        }
        if (e.value().is_zero()) return {};
        return null_state(explain(t.expr(), e.value(), t.origin()));
      }
      case Tuplix::Kind::Comp: {
        // A null side still contributes its entries, so that an enclosing
        // encapsulation can report unbalanced channels as well.
        State l = run(t.lhs());
        State r = run(t.rhs());
        l.null = l.null || r.null;
        l.violations.insert(l.violations.end(), r.violations.begin(), r.violations.end());
        l.tests.insert(l.tests.end(), r.tests.begin(), r.tests.end());
        for (auto& [channel, parts] : r.summands) {
          auto& dst = l.summands[channel];
          dst.insert(dst.end(), parts.begin(), parts.end());
        }
        return l;
      }
      case Tuplix::Kind::Encap:
        return encapsulate(t);
    }
    return {};
  }

 private:
  Expr close(const Expr& e) const { return fold_constants(substitute(e, valuation_)); }

  State encapsulate(const Tuplix& t) {
    State s = run(t.body());
    const std::string span = t.origin() ? t.origin()->span : std::string();
    std::vector<Violation> failures;
    for (const auto& channel : t.channels()) {
      auto it = s.summands.find(channel);
      if (it == s.summands.end()) continue;
      Expr balance = canonical_sum(it->second);
      s.summands.erase(it);
      const std::string text = "balance of channel " + channel;
      if (balance.is_const()) {
        if (!balance.value().is_zero()) failures.push_back({span, text, balance.value()});
        continue;
      }
      s.tests.push_back({balance, std::make_shared<const Origin>(Origin{span, text, {}})});
    }
    if (!failures.empty()) {
      s.null = true;
      s.violations.insert(s.violations.end(), failures.begin(), failures.end());
    }
    return s;
  }

  std::vector<Violation> explain(const Expr& source, const Rational& value, const OriginPtr& origin) const {
    std::vector<Violation> out;
    if (!origin) {
      out.push_back({"", to_string(source), value});
      return out;
    }
    for (const auto& part : origin->parts) {
      Expr p = close(part.expr);
      if (p.is_const() && !p.value().is_zero()) out.push_back({part.span, part.text, p.value()});
    }
    if (out.empty()) out.push_back({origin->span, origin->text, value});
    return out;
  }

  const Valuation& valuation_;
};

void dedupe_tests(CanonicalTuplix& c) {
  std::vector<Expr> tests;
  std::vector<OriginPtr> origins;
  for (std::size_t i = 0; i < c.tests.size(); ++i) {
    if (std::find(tests.begin(), tests.end(), c.tests[i]) != tests.end()) continue;
    tests.push_back(c.tests[i]);
    origins.push_back(c.origins[i]);
  }
  c.tests = std::move(tests);
  c.origins = std::move(origins);
}

}  // namespace

CanonicalTuplix normalize(const Tuplix& t, const Valuation& v) {
  Normalizer n(v);
  State s = n.run(t);
  CanonicalTuplix out;
  if (s.null) {
    out.null = true;
    out.violations = std::move(s.violations);
    return out;
  }
  for (auto& item : s.tests) {
    out.tests.push_back(std::move(item.expr));
    out.origins.push_back(std::move(item.origin));
  }
  dedupe_tests(out);
  for (const auto& [channel, parts] : s.summands) out.entries.emplace(channel, canonical_sum(parts));
  return out;
}

Tuplix reconstruct(const CanonicalTuplix& c) {
  if (c.null) return Tuplix::delta();
  std::vector<Tuplix> parts;
  for (std::size_t i = 0; i < c.tests.size(); ++i) {
    parts.push_back(Tuplix::test(c.tests[i], i < c.origins.size() ? c.origins[i] : nullptr));
  }
  for (const auto& [channel, amount] : c.entries) parts.push_back(Tuplix::entry(channel, amount));
  return compose(parts);
}

namespace {

struct Binding {
  std::string var;
  Expr replacement;
};

bool occurs(const std::string& name, const Expr& e) { return free_vars(e).count(name) != 0; }

/// Recognizes tests that pin a variable: x - r, r - x and the folded x + c.
std::optional<Binding> match_binding(const Expr& test) {
  if (test.kind() != Expr::Kind::Add) return std::nullopt;
  const Expr& l = test.lhs();
  const Expr& r = test.rhs();
  if (l.is_var() && r.kind() == Expr::Kind::Neg && !occurs(l.name(), r.arg())) return Binding{l.name(), r.arg()};
  if (r.kind() == Expr::Kind::Neg && r.arg().is_var() && !occurs(r.arg().name(), l)) {
    return Binding{r.arg().name(), l};
  }
  if (l.is_var() && r.is_const()) return Binding{l.name(), Expr::constant(-r.value())};
  if (r.is_var() && l.is_const()) return Binding{r.name(), Expr::constant(-l.value())};
  return std::nullopt;
}

}  // namespace

CanonicalTuplix apply_test_substitution(const CanonicalTuplix& c) {
  if (c.null) return c;
  CanonicalTuplix out = c;
  out.origins.resize(out.tests.size());
  for (int round = 0; round < kMaxTestSubstitutionRounds; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < out.tests.size(); ++i) {
      auto binding = match_binding(out.tests[i]);
      if (!binding) continue;
      auto rewrite = [&](Expr& e) {
        Expr next = fold_constants(substitute(e, binding->var, binding->replacement));
        if (!(next == e)) {
          e = std::move(next);
          changed = true;
        }
      };
      for (auto& [channel, amount] : out.entries) rewrite(amount);
      for (std::size_t j = 0; j < out.tests.size(); ++j) {
        if (j != i) rewrite(out.tests[j]);
      }
    }

    std::vector<Expr> tests;
    std::vector<OriginPtr> origins;
    for (std::size_t i = 0; i < out.tests.size(); ++i) {
      const Expr& t = out.tests[i];
      if (!t.is_const()) {
        tests.push_back(t);
        origins.push_back(out.origins[i]);
      } else if (!t.value().is_zero()) {
        const auto& o = out.origins[i];
        out.violations.push_back({o ? o->span : std::string(), o ? o->text : to_string(t), t.value()});
      }
    }
    if (!out.violations.empty()) {
      CanonicalTuplix null_out;
      null_out.null = true;
      null_out.violations = std::move(out.violations);
      return null_out;
    }
    out.tests = std::move(tests);
    out.origins = std::move(origins);
    dedupe_tests(out);
    if (!changed) break;
  }
  return out;
}

bool equiv_ground(const Tuplix& a, const Tuplix& b, const Valuation& v) {
  return denote_ground(a, v) == denote_ground(b, v);
}

bool equiv_prob_tuplix(const Tuplix& a, const Tuplix& b, std::size_t trials, std::uint64_t seed) {
  std::set<std::string> vars = free_vars(a);
  for (const auto& name : free_vars(b)) vars.insert(name);
  for (std::size_t t = 0; t < trials; ++t) {
    RationalSampler sampler(derive_seed(seed, t));
    Valuation v;
    for (const auto& name : vars) v.emplace(name, sampler.next());
    if (!equiv_ground(a, b, v)) return false;
  }
  return true;
}

Expr random_expr(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (depth <= 0 || coin(rng) < 0.45) {
    if (!vars.empty() && coin(rng) < 0.5) {
      std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
      return Expr::var(vars[pick(rng)]);
    }
    RationalSampler sampler(rng(), SamplingPolicy{4, 3, 0.3, 0.7});
    return Expr::constant(sampler.next());
  }
  std::uniform_int_distribution<int> op(0, 6);
  switch (op(rng)) {
    case 0:
      return Expr::add(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    case 1:
      return Expr::sub(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    case 2:
      return Expr::mul(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    case 3:
      return Expr::div(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    case 4:
      return Expr::neg(random_expr(rng, vars, depth - 1));
    case 5:
      return Expr::inv(random_expr(rng, vars, depth - 1));
    default:
      return Expr::abs(random_expr(rng, vars, depth - 1));
  }
}

namespace {

class TermGenerator {
 public:
  TermGenerator(const std::vector<std::string>& channels, const std::vector<std::string>& vars, std::uint64_t seed)
      : channels_(channels), vars_(vars), rng_(seed) {}

  Tuplix generate(std::size_t size) {
    if (size <= 1) return leaf();
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (size >= 3 && coin(rng_) < 0.75) {
      std::uniform_int_distribution<std::size_t> split(1, size - 2);
      const std::size_t left = split(rng_);
      Tuplix l = generate(left);
      Tuplix r = generate(size - 1 - left);
      return Tuplix::comp(l, r);
    }
    Tuplix::ChannelSet hidden;
    for (const auto& c : channels_) {
      if (coin(rng_) < 0.5) hidden.insert(c);
    }
    return Tuplix::encap(std::move(hidden), generate(size - 1));
  }

 private:
  Tuplix leaf() {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const double r = coin(rng_);
    if (r < 0.2) return Tuplix::eps();
    if (r < 0.27) return Tuplix::delta();
    if (r < 0.75 && !channels_.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, channels_.size() - 1);
      const std::string& channel = channels_[pick(rng_)];
      return Tuplix::entry(channel, random_expr(rng_, vars_, 1));
    }
    // Most random tests are nonzero; bias towards ones that pass.
    Expr arg = random_expr(rng_, vars_, 2);
    const double shape = coin(rng_);
    if (shape < 0.3) return Tuplix::test(Expr::sub(arg, arg));
    if (shape < 0.45) return Tuplix::test(Expr::mul(Expr::constant(Rational()), arg));
    return Tuplix::test(arg);
  }

  const std::vector<std::string>& channels_;
  const std::vector<std::string>& vars_;
  std::mt19937_64 rng_;
};

}  // namespace

Tuplix random_tuplix(std::size_t size, const std::vector<std::string>& channels,
                     const std::vector<std::string>& vars, std::uint64_t seed) {
  if (size == 0) throw std::invalid_argument("random_tuplix: size must be at least 1");
  TermGenerator gen(channels, vars, seed);
  return gen.generate(size);
}

}  // namespace budget
