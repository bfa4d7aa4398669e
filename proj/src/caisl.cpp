#include "ca/caisl.hpp"

#include <algorithm>
#include <map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ca::caisl {

int Universe::add_attr(const std::string& name) {
  int i = attr(name);
  if (i >= 0) return i;
  if (attrs.size() >= 64) throw PatternMismatch("at most 64 attributes supported");
  attrs.push_back(name);
  return int(attrs.size()) - 1;
}

int Universe::add_cond(const std::string& name) {
  int i = cond(name);
  if (i >= 0) return i;
  if (conds.size() >= 64) throw PatternMismatch("at most 64 conditions supported");
  conds.push_back(name);
  return int(conds.size()) - 1;
}

int Universe::attr(const std::string& name) const {
  for (std::size_t i = 0; i < attrs.size(); ++i)
    if (attrs[i] == name) return int(i);
  return -1;
}

int Universe::cond(const std::string& name) const {
  for (std::size_t i = 0; i < conds.size(); ++i)
    if (conds[i] == name) return int(i);
  return -1;
}

std::string set_text(uint64_t mask, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (mask >> i & 1) {
      if (!first) out += ',';
      out += names[i];
      first = false;
    }
  return out + "}";
}

std::string statement_text(const Statement& s, const Universe& u) {
  return set_text(s.x, u.attrs) + " -[" + set_text(s.c, u.conds) + "]-> " +
         set_text(s.y, u.attrs);
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::NonConstraint: return "non-constraint";
    case Rule::Reflexivity: return "reflexivity";
    case Rule::Decomposition: return "decomposition";
    case Rule::Composition: return "composition";
    case Rule::ConditionalComposition: return "conditional composition";
    case Rule::Simplification: return "simplification";
    case Rule::Given: return "given";
    case Rule::Hypothesis: return "hypothesis";
  }
  return "?";
}

// ------------------------------------------------------------- parsing

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;

  void ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  void expect(const std::string& tok) {
    ws();
    if (s.compare(i, tok.size(), tok) != 0)
      throw PatternMismatch("malformed statement, expected '" + tok + "' in: " + s);
    i += tok.size();
  }
  uint64_t set(const std::vector<std::string>& names, const char* kind) {
    expect("{");
    uint64_t mask = 0;
    ws();
    if (i < s.size() && s[i] == '}') {
      ++i;
      return mask;
    }
    for (;;) {
      ws();
      std::size_t j = i;
      while (j < s.size() && s[j] != ',' && s[j] != '}' && s[j] != ' ' && s[j] != '\t') ++j;
      std::string name = s.substr(i, j - i);
      auto it = std::find(names.begin(), names.end(), name);
      if (name.empty() || it == names.end())
        throw PatternMismatch("unknown " + std::string(kind) + " '" + name + "'");
      mask |= 1ULL << (it - names.begin());
      i = j;
      ws();
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      if (i < s.size() && s[i] == '}') {
        ++i;
        return mask;
      }
      throw PatternMismatch("malformed set in statement: " + s);
    }
  }
};

}  // namespace

Statement parse_statement(const std::string& text, const Universe& u) {
  Cursor c{text};
  Statement st;
  st.x = c.set(u.attrs, "attribute");
  c.expect("-[");
  st.c = c.set(u.conds, "condition");
  c.expect("]->");
  st.y = c.set(u.attrs, "attribute");
  c.ws();
  if (c.i != text.size())
    throw PatternMismatch("trailing text in statement: " + text);
  return st;
}

// ---------------------------------------------------------------- rules

namespace {

Statement conclusion_composition(const Statement& a, const Statement& b) {
  return {a.x | b.x, a.c & b.c, a.y | b.y};
}

Statement conclusion_condcomp(const Statement& a, const Statement& b, const Config& cfg) {
  return {a.x | b.x, cfg.condcomp_union ? (a.c | b.c) : (a.c & b.c), a.y & b.y};
}

// Premises X -[C1]-> Y and X|Z -[C2]-> W with X and Y disjoint.
Statement conclusion_simplification(const Statement& a, const Statement& b) {
  if (a.x & a.y) throw SideConditionViolated("simplification requires X and Y disjoint");
  if (a.x & ~b.x)
    throw PatternMismatch("simplification requires the first premise's X inside the second's");
  return {b.x & ~a.y, a.c & b.c, b.y & ~a.y};
}

}  // namespace

Statement apply_rule(Rule rule, std::span<const Statement> premises,
                     const std::optional<Statement>& instance, const Universe& u,
                     const Config& cfg) {
  auto need = [&](std::size_t n) {
    if (premises.size() != n)
      throw ArityMismatch(std::string(rule_name(rule)) + " takes " + std::to_string(n) +
                          " premises, got " + std::to_string(premises.size()));
  };
  switch (rule) {
    case Rule::NonConstraint: {
      need(0);
      if (!instance) throw PatternMismatch("non-constraint needs its instance statement");
      uint64_t rhs = cfg.nonconstraint_full ? u.all_attrs() : 0;
      if (instance->x != 0 || instance->y != rhs || (instance->c & ~u.all_conds()))
        throw PatternMismatch("not a non-constraint instance: " + statement_text(*instance, u));
      return *instance;
    }
    case Rule::Reflexivity: {
      need(0);
      if (!instance) throw PatternMismatch("reflexivity needs its instance statement");
      if (instance->x != instance->y || instance->c != u.all_conds() ||
          (instance->x & ~u.all_attrs()))
        throw PatternMismatch("not a reflexivity instance: " + statement_text(*instance, u));
      return *instance;
    }
    case Rule::Decomposition: {
      need(1);
      if (!instance) throw PatternMismatch("decomposition needs its instance statement");
      const Statement& p = premises[0];
      if (instance->x != p.x || (instance->c & ~p.c) || (instance->y & ~p.y))
        throw PatternMismatch("not a decomposition of the premise");
      return *instance;
    }
    case Rule::Composition: {
      need(2);
      Statement out = conclusion_composition(premises[0], premises[1]);
      if (instance && *instance != out) throw PatternMismatch("composition conclusion mismatch");
      return out;
    }
    case Rule::ConditionalComposition: {
      need(2);
      Statement out = conclusion_condcomp(premises[0], premises[1], cfg);
      if (instance && *instance != out)
        throw PatternMismatch("conditional composition conclusion mismatch");
      return out;
    }
    case Rule::Simplification: {
      need(2);
      Statement out = conclusion_simplification(premises[0], premises[1]);
      if (instance && *instance != out)
        throw PatternMismatch("simplification conclusion mismatch");
      return out;
    }
    case Rule::Given:
    case Rule::Hypothesis:
      throw ArityMismatch(std::string(rule_name(rule)) + " is not an inference rule");
  }
  throw ArityMismatch("unknown rule");
}

// ------------------------------------------------------------ saturation

namespace {

struct Engine {
  const Universe& u;
  const Config& cfg;
  std::vector<Statement> stmts;
  std::vector<Saturation::Prov> prov;

  // Dedup: direct-address table when the packed key is small, map otherwise.
  int na, nc;
  int width;
  std::vector<uint8_t> seen;
  std::map<Statement, int> seen_map;
  bool fast;

  Engine(const Universe& uu, const Config& cc) : u(uu), cfg(cc) {
    na = int(uu.attrs.size());
    nc = int(uu.conds.size());
    width = 2 * na + nc;
    fast = width <= 16;
    if (fast) seen.assign(std::size_t(1) << width, 0);
  }

  uint32_t pack(const Statement& s) const {
    return uint32_t(s.x) | uint32_t(s.y) << na | uint32_t(s.c) << (2 * na);
  }

  bool push(const Statement& s, Rule r, int p1 = -1, int p2 = -1) {
    if (fast) {
      uint32_t k = pack(s);
      if (seen[k]) return false;
      seen[k] = 1;
    } else {
      if (!seen_map.emplace(s, int(stmts.size())).second) return false;
    }
    stmts.push_back(s);
    prov.push_back({r, p1, p2});
    if (stmts.size() > cfg.bound)
      throw BoundExceeded("saturation bound exceeded", stmts.size());
    return true;
  }

  void seed_axioms() {
    uint64_t conds_all = u.all_conds();
    uint64_t attrs_all = u.all_attrs();
    if (nc > 20 || na > 20)
      throw BoundExceeded("axiom instantiation space too large", stmts.size());
    uint64_t rhs = cfg.nonconstraint_full ? attrs_all : 0;
    for (uint64_t c = 0;; c = c + 1) {
      if (c > conds_all) break;
      push({0, c, rhs}, Rule::NonConstraint);
    }
    for (uint64_t x = 0;; x = x + 1) {
      if (x > attrs_all) break;
      push({x, conds_all, x}, Rule::Reflexivity);
    }
  }

  void derive_from(std::size_t start) {
    for (std::size_t i = start; i < stmts.size(); ++i) {
      Statement s = stmts[i];
      // Decomposition: every sub-condition and sub-attribute set.
      if (__builtin_popcountll(s.c) + __builtin_popcountll(s.y) > 20)
        throw BoundExceeded("decomposition fan-out too large", stmts.size());
      for (uint64_t c1 = s.c;; c1 = (c1 - 1) & s.c) {
        for (uint64_t y1 = s.y;; y1 = (y1 - 1) & s.y) {
          if (c1 != s.c || y1 != s.y) push({s.x, c1, y1}, Rule::Decomposition, int(i));
          if (!y1) break;
        }
        if (!c1) break;
      }
      for (std::size_t j = 0; j <= i && j < stmts.size(); ++j) {
        Statement t = stmts[j];
        push(conclusion_composition(s, t), Rule::Composition, int(i), int(j));
        push(conclusion_condcomp(s, t, cfg), Rule::ConditionalComposition, int(i), int(j));
        if (!(s.x & s.y) && !(s.x & ~t.x))
          push(conclusion_simplification(s, t), Rule::Simplification, int(i), int(j));
        if (!(t.x & t.y) && !(t.x & ~s.x))
          push(conclusion_simplification(t, s), Rule::Simplification, int(j), int(i));
      }
    }
  }

  Saturation finish() && { return Saturation{std::move(stmts), std::move(prov)}; }
};

}  // namespace

bool Saturation::contains(const Statement& s) const {
  return std::find(statements.begin(), statements.end(), s) != statements.end();
}

std::vector<Statement> Saturation::sorted() const {
  std::vector<Statement> out = statements;
  std::sort(out.begin(), out.end());
  return out;
}

Derivation Saturation::derivation_of(const Statement& s) const {
  auto it = std::find(statements.begin(), statements.end(), s);
  if (it == statements.end()) return {};
  // Collect the needed step indices in dependency order.
  std::vector<int> order;
  std::vector<char> seen(statements.size(), 0);
  std::vector<int> stack{int(it - statements.begin())};
  while (!stack.empty()) {
    int i = stack.back();
    if (seen[i] == 2) {
      stack.pop_back();
      continue;
    }
    if (seen[i] == 0) {
      seen[i] = 1;
      const auto& p = prov[i];
      if (p.p1 >= 0 && seen[p.p1] != 2) stack.push_back(p.p1);
      if (p.p2 >= 0 && seen[p.p2] != 2) stack.push_back(p.p2);
      continue;
    }
    seen[i] = 2;
    order.push_back(i);
    stack.pop_back();
  }
  std::vector<int> step_of(statements.size(), 0);
  Derivation d;
  for (int i : order) {
    const auto& p = prov[i];
    Step step{p.rule, {}, statements[i]};
    if (p.p1 >= 0) step.premises.push_back(step_of[p.p1]);
    if (p.p2 >= 0) step.premises.push_back(step_of[p.p2]);
    d.steps.push_back(std::move(step));
    step_of[i] = int(d.steps.size());  // 1-based
  }
  return d;
}

Saturation saturate(std::span<const Statement> sigma, const Universe& u, const Config& cfg,
                    const std::optional<Statement>& hypothesis) {
  Engine e(u, cfg);
  for (const Statement& s : sigma) e.push(s, Rule::Given);
  if (hypothesis) e.push(*hypothesis, Rule::Hypothesis);
  e.seed_axioms();
  e.derive_from(0);
  return std::move(e).finish();
}

Saturation saturate_extend(const Saturation& base, const Statement& hypothesis,
                           const Universe& u, const Config& cfg) {
  Engine e(u, cfg);
  e.stmts = base.statements;
  e.prov = base.prov;
  if (e.fast) {
    for (const Statement& s : e.stmts) e.seen[e.pack(s)] = 1;
  } else {
    for (std::size_t i = 0; i < e.stmts.size(); ++i) e.seen_map.emplace(e.stmts[i], int(i));
  }
  std::size_t start = e.stmts.size();
  if (!e.push(hypothesis, Rule::Hypothesis)) return base;  // already derived
  e.derive_from(start);
  return std::move(e).finish();
}

std::vector<Statement> saturate_parallel(std::span<const Statement> sigma, const Universe& u,
                                         const Config& cfg) {
  Engine e(u, cfg);
  for (const Statement& s : sigma) e.push(s, Rule::Given);
  e.seed_axioms();
  std::size_t round_start = 0;
  while (round_start < e.stmts.size()) {
    std::size_t round_end = e.stmts.size();
    // Conclusions of this round, gathered per frontier item and merged in
    // deterministic (index) order.
    std::vector<std::vector<Statement>> local(round_end - round_start);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t i = round_start; i < round_end; ++i) {
      Statement s = e.stmts[i];
      auto& out = local[i - round_start];
      for (uint64_t c1 = s.c;; c1 = (c1 - 1) & s.c) {
        for (uint64_t y1 = s.y;; y1 = (y1 - 1) & s.y) {
          if (c1 != s.c || y1 != s.y) out.push_back({s.x, c1, y1});
          if (!y1) break;
        }
        if (!c1) break;
      }
      for (std::size_t j = 0; j <= i; ++j) {
        Statement t = e.stmts[j];
        out.push_back(conclusion_composition(s, t));
        out.push_back(conclusion_condcomp(s, t, cfg));
        if (!(s.x & s.y) && !(s.x & ~t.x)) out.push_back(conclusion_simplification(s, t));
        if (!(t.x & t.y) && !(t.x & ~s.x)) out.push_back(conclusion_simplification(t, s));
      }
    }
    for (auto& batch : local)
      for (const Statement& s : batch) e.push(s, Rule::Composition);
    round_start = round_end;
  }
  return std::move(e).finish().sorted();
}

// ------------------------------------------------------------ derivations

bool validate_derivation(const Derivation& d, std::span<const Statement> sigma,
                         const std::optional<Statement>& hypothesis, const Statement& goal,
                         const Universe& u, const Config& cfg) {
  std::vector<Statement> produced;
  for (const Step& step : d.steps) {
    std::vector<Statement> prems;
    for (int ix : step.premises) {
      if (ix < 1 || std::size_t(ix) > produced.size()) return false;
      prems.push_back(produced[ix - 1]);
    }
    switch (step.rule) {
      case Rule::Given:
        if (std::find(sigma.begin(), sigma.end(), step.produced) == sigma.end()) return false;
        break;
      case Rule::Hypothesis:
        if (!hypothesis || step.produced != *hypothesis) return false;
        break;
      default:
        try {
          if (apply_rule(step.rule, prems, step.produced, u, cfg) != step.produced) return false;
        } catch (const std::runtime_error&) {
          return false;
        }
    }
    produced.push_back(step.produced);
  }
  return !produced.empty() && produced.back() == goal;
}

// ---------------------------------------------------------------- prove

namespace {

ProveResult prove_from(const Saturation& sat, bool goal_is_given, const Statement& goal) {
  ProveResult res;
  res.closure_size = sat.statements.size();
  if (goal_is_given) {
    res.proved = true;
    res.derived = goal;
    res.derivation.steps.push_back({Rule::Given, {}, goal});
    return res;
  }
  Statement target{0, goal.c, goal.y};
  res.proved = sat.contains(target);
  if (res.proved) {
    res.derived = target;
    res.used_hypothesis = true;
    res.derivation = sat.derivation_of(target);
  }
  return res;
}

bool given_in(const Saturation& sat, const Statement& s) {
  auto it = std::find(sat.statements.begin(), sat.statements.end(), s);
  return it != sat.statements.end() &&
         sat.prov[it - sat.statements.begin()].rule == Rule::Given;
}

}  // namespace

ProveResult prove(std::span<const Statement> sigma, const Statement& goal, const Universe& u,
                  const Config& cfg) {
  Statement hyp{0, goal.c, goal.x};
  Saturation sat = saturate(sigma, u, cfg, hyp);
  bool given = std::find(sigma.begin(), sigma.end(), goal) != sigma.end();
  return prove_from(sat, given, goal);
}

ProveResult prove_with_base(const Saturation& sigma_closure, const Statement& goal,
                            const Universe& u, const Config& cfg) {
  Statement hyp{0, goal.c, goal.x};
  Saturation sat = saturate_extend(sigma_closure, hyp, u, cfg);
  return prove_from(sat, given_in(sigma_closure, goal), goal);
}

}  // namespace caisl
