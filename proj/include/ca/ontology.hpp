#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ca/bits.hpp"
#include "ca/expr.hpp"
#include "ca/logic4.hpp"
#include "ca/rough.hpp"

namespace ca::onto {

struct UnknownReference : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DuplicateName : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CyclicDefinition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Which bound of the rough extent queries read.
enum class ExtentMode : uint8_t { Lower, Upper };

struct ClassNode {
  std::string name;
  expr::FormulaPtr raw_intent;                // null for primitive classes
  std::vector<std::string> declared_supers;   // isa directives
  expr::FormulaPtr logical_intent;            // expanded, atom-level formula
  logic4::Dnf normal_intent;                  // Blake normal form of it
  logic4::AtomTable intent_atoms;             // atom table of normal_intent
  Bits lb, ub;                                // extents
  std::set<std::string> parents, children;    // transitive, canonical names
  std::vector<std::string> aliases;
  bool hidden = false;
  bool builtin = false;  // U and 0

  bool primitive() const { return raw_intent == nullptr && !builtin; }
};

// IS-A hierarchy over an evidence world. Single writer; queries are
// read-only on a classified snapshot, and the type copies as a value.
class Ontology {
 public:
  static constexpr const char* kTop = "U";
  static constexpr const char* kBottom = "0";

  void add_object(const std::string& name);
  void declare_class(const std::string& name);
  void declare_relation(const std::string& name);
  void add_edge(const std::string& rel, const std::string& from, const std::string& to);
  void add_isa(const std::string& sub, const std::string& super);
  // add_class semantics: the intent is set once; hidden classes for its
  // union subexpressions are minted during classify().
  void set_intent(const std::string& cls, expr::FormulaPtr raw);
  // Evidence lands on the named class's own bit row; a defined class keeps
  // its derived extent regardless (the intent wins under the closed world).
  void assert_evidence(const std::string& object, const std::string& cls, bool negative);

  // Recomputes intents, extents, the entailment edges and the equivalence
  // merges from the declarations. Idempotent.
  void classify();

  // --- queries (after classify) ---

  // Objects satisfying a class-sorted formula under the designated-value
  // semantics (Upper: the not-disproved objects). Class references expand
  // to their intents; subset atoms and selectors evaluate through the
  // world's relations.
  Bits eval_intent(const expr::Formula& f, ExtentMode mode = ExtentMode::Lower) const;

  // Selector evaluation; the argument must be Selector(base, condition).
  Bits select(const expr::Formula& sel, ExtentMode mode = ExtentMode::Lower) const;

  // All |,&-formulas over visible class names with minimal operator count
  // whose evaluation equals `target`; empty when none within budget (<= 8).
  std::vector<expr::FormulaPtr> describe_extent(const Bits& target, int budget,
                                                ExtentMode mode = ExtentMode::Lower) const;

  const rough::EvidenceWorld& world() const { return world_; }
  const std::map<std::string, ClassNode>& classes() const { return classes_; }
  const ClassNode& node(const std::string& name) const;
  std::string canonical(const std::string& name) const;  // resolves aliases
  bool has_class(const std::string& name) const;         // declared or alias
  bool has_relation(const std::string& name) const;

  std::vector<std::string> object_names(const Bits& set) const;  // sorted

 private:
  struct Decl {
    expr::FormulaPtr raw;  // null for primitive classes
    std::vector<std::string> supers;
    bool hidden = false;
  };

  expr::FormulaPtr expand(const expr::Formula& raw, std::set<std::string>& stack);
  expr::FormulaPtr expand_query(const expr::Formula& f) const;  // after classify
  expr::FormulaPtr effective_intent(const std::string& name, std::set<std::string>& stack);
  void mint_hidden_classes();
  void recompute_extents();
  logic4::PairVal intent_pair(const expr::Formula& f, int object) const;
  const std::pair<Bits, Bits>& atom_sets(const std::string& key) const;

  rough::EvidenceWorld world_;
  std::map<std::string, Decl> decls_;              // source of truth
  std::vector<std::string> order_;                 // declaration order
  std::map<std::string, ClassNode> classes_;       // classified canonical view
  std::map<std::string, std::string> alias_of_;    // merged name -> canonical
  std::map<std::string, expr::FormulaPtr> effs_;   // per-classify cache
  std::set<std::string> minted_;                   // classes whose hiddens exist
  int hidden_counter_ = 0;
  bool classified_ = false;

  // evaluation caches, rebuilt per extent recomputation
  mutable std::map<std::string, expr::FormulaPtr> atom_defs_;  // opaque atom key -> subtree
  mutable std::map<std::string, relalg::RelationMatrix> path_cache_;
  mutable std::map<std::string, std::pair<Bits, Bits>> atom_sets_;  // key -> (lb, ub)
  mutable std::set<std::string> atom_inflight_;
};

}  // namespace ca::onto
