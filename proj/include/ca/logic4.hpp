#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ca/expr.hpp"

namespace ca::logic4 {

struct UnsupportedOperator : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooManyAtoms : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownAtom : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------- statuses

// Per-object provability status of a formula: provable, disprovable,
// neither, or both.
enum class Status : uint8_t { Plus, Minus, Neither, Both };

const char* status_name(Status s);

// Evidence pair (pos, neg): independently provable / disprovable.
struct PairVal {
  bool pos = false, neg = false;
};

inline Status status_of(PairVal v) {
  if (v.pos) return v.neg ? Status::Both : Status::Plus;
  return v.neg ? Status::Minus : Status::Neither;
}

// One of the 16 disjunctions of statuses, ordered by subset inclusion.
struct LogicValue {
  uint8_t mask = 0;  // bit per Status value

  static LogicValue of(Status s) { return {uint8_t(1u << unsigned(s))}; }
  bool contains(Status s) const { return mask >> unsigned(s) & 1; }
  bool operator==(const LogicValue&) const = default;
};

inline LogicValue value_join(LogicValue a, LogicValue b) { return {uint8_t(a.mask | b.mask)}; }
inline LogicValue value_meet(LogicValue a, LogicValue b) { return {uint8_t(a.mask & b.mask)}; }
inline bool value_leq(LogicValue a, LogicValue b) { return (a.mask & ~b.mask) == 0; }

// ---------------------------------------------------------------- atoms

// Dense atom indices for one problem. Atom order is the canonical literal
// order, so build tables with `sorted_from` unless appending hidden atoms.
struct AtomTable {
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;

  int add(const std::string& name);
  int find(const std::string& name) const;           // -1 when absent
  int require(const std::string& name) const;        // throws UnknownAtom
  int size() const { return int(names.size()); }

  static AtomTable sorted_from(const std::vector<std::string>& names);
};

// Collects the bare atom names of a logical formula (leaves must already be
// NameRef; see atomize). Throws UnsupportedOperator on relational operators.
std::vector<std::string> atom_names(const expr::Formula& f);

// Maps a class-sorted formula onto the logical fragment: @C becomes the atom
// C, and subset-atom / selector subtrees become opaque atoms named by their
// canonical print. Throws UnsupportedOperator for relational operators at
// the logical level.
expr::FormulaPtr atomize(const expr::Formula& f);

// ------------------------------------------------------------- literals

// Four literal forms per atom: p, -p, ~p, ~-p.
struct Literal {
  int atom = 0;
  bool pseudo = false;  // negative-evidence axis selected
  bool comp = false;    // Boolean complement applied

  int id() const { return atom * 4 + int(pseudo) * 2 + int(comp); }
  static Literal from_id(int id) { return {id / 4, bool(id / 2 % 2), bool(id % 2)}; }
  auto operator<=>(const Literal&) const = default;
};

std::string literal_text(Literal l, const AtomTable& atoms);

// A conjunct is a set of literals encoded one bit per literal id; this caps
// one problem at 16 atoms, plenty for desk scale.
using Conjunct = uint64_t;

inline Conjunct conjunct_bit(Literal l) { return 1ULL << l.id(); }
// Contains some literal together with its complement on the same axis.
inline bool conjunct_tautological(Conjunct c) {
  return (c & (c >> 1) & 0x5555555555555555ULL) != 0;
}
std::vector<Literal> conjunct_literals(Conjunct c);

// Sorted antichain of conjuncts. {} is bottom, {empty conjunct} is top.
struct Dnf {
  std::vector<Conjunct> conjuncts;

  bool is_bottom() const { return conjuncts.empty(); }
  bool is_top() const { return conjuncts.size() == 1 && conjuncts[0] == 0; }
  bool operator==(const Dnf&) const = default;

  static Dnf bottom() { return {}; }
  static Dnf top() { return {{0}}; }
};

// Lexicographic order on the sorted literal-id sequences of two conjuncts.
bool conjunct_less(Conjunct a, Conjunct b);

std::string print_dnf(const Dnf& d, const AtomTable& atoms);

// Distributes a logical formula into sorted, tautology-free, absorbed DNF.
Dnf dnf_of(const expr::Formula& f, const AtomTable& atoms);

// Closure under consensus and absorption: the complete set of prime
// implicants in canonical order (Blake canonical form). The seeded overload
// shuffles the rule-application order; the result is identical.
Dnf blake_normal_form(const Dnf& d);
Dnf blake_normal_form(const Dnf& d, uint64_t shuffle_seed);

// --------------------------------------------------------- entailment

enum class Relation : uint8_t { Equivalent, Implies, ImpliedBy, Unrelated };

const char* relation_name(Relation r);

// Containment of satisfying evidence-bit assignments, decided on Blake
// normal forms. Both arguments must share the atom table.
Relation decide_relation(const Dnf& a, const Dnf& b);
// Convenience: atomizes both formulas over a shared sorted table.
Relation decide_relation(const expr::Formula& a, const expr::Formula& b);

// ------------------------------------------------------------- semantics

// Recursive evidence-pair evaluator. `leaf` is called on every
// non-connective node (NameRef, ClassRef, SubsetAtom, Selector, ...) and
// returns its evidence pair; connectives are classical per axis.
template <class F>
PairVal eval_pair(const expr::Formula& f, F&& leaf) {
  using expr::Kind;
  switch (f.kind) {
    case Kind::Univ: return {true, false};
    case Kind::Empty: return {false, true};
    case Kind::Union: {
      PairVal a = eval_pair(*f.left, leaf), b = eval_pair(*f.right, leaf);
      return {a.pos || b.pos, a.neg && b.neg};
    }
    case Kind::Inter: {
      PairVal a = eval_pair(*f.left, leaf), b = eval_pair(*f.right, leaf);
      return {a.pos && b.pos, a.neg || b.neg};
    }
    case Kind::BoolComp: {
      PairVal a = eval_pair(*f.left, leaf);
      return {!a.pos, !a.neg};
    }
    case Kind::PseudoComp: {
      PairVal a = eval_pair(*f.left, leaf);
      return {a.neg, a.pos};
    }
    default: return leaf(f);
  }
}

// Packed evidence bits, two per atom: bit 2i = pos(atom i), 2i+1 = neg.
using Assignment = uint32_t;

inline PairVal assignment_pair(Assignment a, int atom) {
  return {bool(a >> (2 * atom) & 1), bool(a >> (2 * atom + 1) & 1)};
}

// Exhaustive enumeration of the satisfying (positive-denotation)
// assignments of a formula; the independent oracle for the normalizer.
// Requires at most 12 atoms.
std::vector<Assignment> truth_oracle(const expr::Formula& f, const AtomTable& atoms);

// ---------------------------------------------------------------- tseytin

// CNF clause: disjunction of literals.
using Clause = std::vector<Literal>;

struct HiddenDef {
  int atom;                  // index in `atoms`
  expr::FormulaPtr def;      // the named subexpression over original atoms
  bool is_union;             // disjunction (true) or named conjunction
};

struct TseytinResult {
  std::vector<Clause> clauses;
  AtomTable atoms;  // original atoms first, hidden atoms appended
  std::vector<HiddenDef> hidden;
  int original_atoms = 0;
};

using NameGen = std::function<std::string()>;

// Linear-size CNF with hidden atoms bi-implied with their subexpressions.
// Clause count is at most 4*ops+2. Hidden names default to _h1, _h2, ...
TseytinResult tseytin(const expr::Formula& f, const AtomTable& atoms, NameGen fresh = nullptr);

}  // namespace ca::logic4
