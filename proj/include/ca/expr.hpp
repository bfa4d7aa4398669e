#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace ca::expr {

enum class Kind : uint8_t {
  ClassRef,    // @Name
  NameRef,     // bare name: relation or propositional atom, fixed by sort analysis
  Univ,        // U
  Empty,       // 0
  Ident,       // I
  Union,       // l | r
  Inter,       // l & r
  Compose,     // l . r
  BoolComp,    // ~x
  PseudoComp,  // -x
  Inverse,     // x'
  Star,        // x*
  Selector,    // base{expr}
  SubsetAtom,  // path <= class
};

enum class Sort : uint8_t { Class, Relation };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Kind kind;
  std::string name;        // ClassRef / NameRef only
  FormulaPtr left, right;  // right unused for unary nodes
  std::size_t pos = 0;     // byte offset in source text, 0 for synthetic nodes
};

// Errors carry the byte offset of the offending token or character.
struct Error : std::runtime_error {
  std::size_t pos;
  Error(const std::string& msg, std::size_t p) : std::runtime_error(msg), pos(p) {}
};
struct LexError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct SortError : Error {
  using Error::Error;
};

// Constructors for synthetic trees (tests, derived formulas).
FormulaPtr class_ref(std::string name);
FormulaPtr name_ref(std::string name);
FormulaPtr univ();
FormulaPtr empty();
FormulaPtr ident();
FormulaPtr union_of(FormulaPtr l, FormulaPtr r);
FormulaPtr inter_of(FormulaPtr l, FormulaPtr r);
FormulaPtr compose(FormulaPtr l, FormulaPtr r);
FormulaPtr bool_comp(FormulaPtr x);
FormulaPtr pseudo_comp(FormulaPtr x);
FormulaPtr inverse(FormulaPtr x);
FormulaPtr star(FormulaPtr x);
FormulaPtr selector(FormulaPtr base, FormulaPtr sel);
FormulaPtr subset_atom(FormulaPtr path, FormulaPtr cls);

// The conditional x -> y, defined as ~x | (x & y).
FormulaPtr conditional(FormulaPtr x, FormulaPtr y);

bool equals(const Formula& a, const Formula& b);
inline bool equals(const FormulaPtr& a, const FormulaPtr& b) { return equals(*a, *b); }

// Sorts inferred for the bare names of a formula. Names not mentioned are absent.
using NameSorts = std::unordered_map<std::string, Sort>;

// Infers a consistent sort for every bare name and checks operator/operand
// compatibility bottom-up. Names left unconstrained default to Class.
NameSorts infer_sorts(const Formula& f);

// Sort of a node given resolved name sorts.
Sort sort_of(const Formula& f, const NameSorts& sorts);

// Parses and sort-checks one expression. Throws LexError/ParseError/SortError.
FormulaPtr parse(const std::string& text);

// Minimal-parenthesization canonical text; parse(print(f)) == f structurally.
std::string print(const Formula& f);
inline std::string print(const FormulaPtr& f) { return print(*f); }

// Constructor-style rendering, e.g. Union(@A, Inter(@B, @C)).
std::string to_sexpr(const Formula& f);

}  // namespace ca::expr
