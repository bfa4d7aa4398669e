#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ca::caisl {

struct ArityMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SideConditionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PatternMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BoundExceeded : std::runtime_error {
  std::size_t partial_size;
  BoundExceeded(const std::string& msg, std::size_t n)
      : std::runtime_error(msg), partial_size(n) {}
};

// Attribute names Omega and condition names Gamma, at most 64 each; sets are
// bit masks over the declaration order.
struct Universe {
  std::vector<std::string> attrs;
  std::vector<std::string> conds;

  int add_attr(const std::string& name);
  int add_cond(const std::string& name);
  int attr(const std::string& name) const;  // -1 when absent
  int cond(const std::string& name) const;

  uint64_t all_attrs() const { return attrs.size() == 64 ? ~0ULL : (1ULL << attrs.size()) - 1; }
  uint64_t all_conds() const { return conds.size() == 64 ? ~0ULL : (1ULL << conds.size()) - 1; }
};

// X -[C]-> Y.
struct Statement {
  uint64_t x = 0, c = 0, y = 0;
  auto operator<=>(const Statement&) const = default;
};

std::string set_text(uint64_t mask, const std::vector<std::string>& names);
std::string statement_text(const Statement& s, const Universe& u);

// Parses "{a,b} -[{c}]-> {d}". Throws PatternMismatch on malformed text or
// unknown names.
Statement parse_statement(const std::string& text, const Universe& u);

enum class Rule : uint8_t {
  NonConstraint,
  Reflexivity,
  Decomposition,
  Composition,
  ConditionalComposition,
  Simplification,
  Given,       // member of the premise set
  Hypothesis,  // the Theorem-3 side premise
};

const char* rule_name(Rule r);

struct Config {
  bool nonconstraint_full = false;  // read the axiom's right side as Omega
  bool condcomp_union = true;       // conditional composition condition: union vs intersection
  std::size_t bound = 10000;        // saturation size bound
};

// Applies one rule. Composition, conditional composition and simplification
// are determined by their premises; the axiom schemes and decomposition
// carry freedom, so the intended conclusion must be passed as `instance`.
Statement apply_rule(Rule rule, std::span<const Statement> premises,
                     const std::optional<Statement>& instance, const Universe& u,
                     const Config& cfg = {});

struct Step {
  Rule rule;
  std::vector<int> premises;  // 1-based indices of earlier steps
  Statement produced;
};

struct Derivation {
  std::vector<Step> steps;
};

// Replays a derivation: every step must validate through apply_rule (or be a
// member of sigma / the hypothesis) and the last step must equal goal.
bool validate_derivation(const Derivation& d, std::span<const Statement> sigma,
                         const std::optional<Statement>& hypothesis, const Statement& goal,
                         const Universe& u, const Config& cfg = {});

// Forward closure of sigma under the two axiom schemes and four rules.
struct Saturation {
  std::vector<Statement> statements;  // insertion order
  struct Prov {
    Rule rule;
    int p1 = -1, p2 = -1;
  };
  std::vector<Prov> prov;

  bool contains(const Statement& s) const;
  std::vector<Statement> sorted() const;
  Derivation derivation_of(const Statement& s) const;  // backward chain
};

Saturation saturate(std::span<const Statement> sigma, const Universe& u, const Config& cfg = {},
                    const std::optional<Statement>& hypothesis = {});

// Extends an existing closure with the Theorem-3 hypothesis; the result is
// saturate(sigma + hypothesis) computed incrementally.
Saturation saturate_extend(const Saturation& base, const Statement& hypothesis,
                           const Universe& u, const Config& cfg = {});

// Round-based saturation whose rule applications run in parallel and are
// merged deterministically; same statement set as saturate().
std::vector<Statement> saturate_parallel(std::span<const Statement> sigma, const Universe& u,
                                         const Config& cfg = {});

struct ProveResult {
  bool proved = false;
  Derivation derivation;
  // What the derivation derives: the goal itself when it is a given,
  // otherwise the Theorem-3 translation {} -[C]-> Y from sigma + hypothesis.
  Statement derived;
  bool used_hypothesis = false;
  std::size_t closure_size = 0;
};

// Theorem 3: sigma |- X -[C]-> Y iff sigma + {{} -[C]-> X} |- {} -[C]-> Y.
ProveResult prove(std::span<const Statement> sigma, const Statement& goal, const Universe& u,
                  const Config& cfg = {});

// Same decision, reusing a precomputed closure of sigma.
ProveResult prove_with_base(const Saturation& sigma_closure, const Statement& goal,
                            const Universe& u, const Config& cfg = {});

}  // namespace ca::caisl
