#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ca/bits.hpp"
#include "ca/expr.hpp"
#include "ca/logic4.hpp"
#include "ca/relalg.hpp"

namespace ca::rough {

struct UnknownObject : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UniverseMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyUniverse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite object universe with per-(object, atom) positive/negative evidence
// bits and named relations. Immutable after load; queries are read-only.
struct EvidenceWorld {
  std::vector<std::string> objects;
  std::map<std::string, int> object_index;
  logic4::AtomTable atoms;
  std::vector<Bits> pos, neg;  // one row per atom, over objects
  std::map<std::string, relalg::RelationMatrix> relations;

  int add_object(const std::string& name);
  int add_atom(const std::string& name);
  void add_relation(const std::string& name);

  int object(const std::string& name) const;   // throws UnknownObject
  std::size_t size() const { return objects.size(); }

  void set_evidence(int object, int atom, bool negative_axis, bool value = true);

  logic4::PairVal atom_value(int atom, int object) const {
    return {pos[atom].get(object), neg[atom].get(object)};
  }
};

// Evidence pair of a logical formula at one object. Leaves must be atoms
// (bare names or @Name, resolved against the world's atom table).
logic4::PairVal eval_at(const EvidenceWorld& w, const expr::Formula& f, int object);

logic4::Status eval_status(const EvidenceWorld& w, const expr::Formula& f,
                           const std::string& object);

// Evaluates a relation-sorted expression to a matrix over the world.
relalg::RelationMatrix eval_relation(const EvidenceWorld& w, const expr::Formula& f);

// [lb, ub]: definite members and non-excluded members. ub may fail to
// contain lb when evidence is contradictory.
struct RoughInterval {
  Bits lb, ub;
  bool operator==(const RoughInterval&) const = default;
};

// lb = {o : pos(f,o)}, ub = {o : !neg(f,o)}; an optional base class extent
// restricts both bounds.
RoughInterval rough_of_formula(const EvidenceWorld& w, const expr::Formula& f,
                               const std::optional<Bits>& base = {});

// The interval operations as defined for rough sets here: meet intersects
// lower bounds but unions upper bounds, join is the dual.
RoughInterval rough_meet(const RoughInterval& a, const RoughInterval& b);
RoughInterval rough_join(const RoughInterval& a, const RoughInterval& b);

struct StatusPartition {
  Bits true_set, false_set, both_set, neither_set;
};

StatusPartition status_partition(const EvidenceWorld& w, int atom);

// Exact relative frequencies with denominator |objects|; hi may be below lo.
struct FuzzyInterval {
  long long lo_num = 0, hi_num = 0, den = 0;
  bool operator==(const FuzzyInterval&) const = default;
};

FuzzyInterval fuzzy_interval(const EvidenceWorld& w, const expr::Formula& f,
                             const std::optional<Bits>& base = {});

struct Fraction {
  long long num = 0, den = 1;
  bool operator==(const Fraction& o) const { return num * o.den == o.num * den; }
};

// Pr(f) = |lb(f)| / n.
Fraction prob_of(const EvidenceWorld& w, const expr::Formula& f,
                 const std::optional<Bits>& base = {});

}  // namespace ca::rough
