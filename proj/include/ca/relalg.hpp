#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ca/bits.hpp"

namespace ca::relalg {

struct UniverseMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownProperty : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense Boolean matrix over one object universe; row index = source.
struct RelationMatrix {
  int n = 0;
  std::vector<Bits> rows;

  RelationMatrix() = default;
  explicit RelationMatrix(int size) : n(size), rows(size, Bits(size)) {}

  static RelationMatrix zero(int n) { return RelationMatrix(n); }
  static RelationMatrix full(int n);
  static RelationMatrix identity(int n);

  bool get(int i, int j) const { return rows[i].get(j); }
  void set(int i, int j, bool v = true) { rows[i].set(j, v); }

  bool operator==(const RelationMatrix&) const = default;
};

void check_same_universe(const RelationMatrix& a, const RelationMatrix& b);

RelationMatrix union_of(const RelationMatrix& r, const RelationMatrix& s);
RelationMatrix inter_of(const RelationMatrix& r, const RelationMatrix& s);
RelationMatrix complement(const RelationMatrix& r);
bool leq(const RelationMatrix& r, const RelationMatrix& s);  // pointwise
bool is_zero(const RelationMatrix& r);

// Boolean matrix product (exists-composition).
RelationMatrix compose(const RelationMatrix& r, const RelationMatrix& s);
// Transpose.
RelationMatrix inverse(const RelationMatrix& r);

// x(R\S)y  iff  for all z: zRx implies zSy.
RelationMatrix right_residual(const RelationMatrix& r, const RelationMatrix& s);
// y(S/R)x  iff  for all z: xRz implies ySz.
RelationMatrix left_residual(const RelationMatrix& s, const RelationMatrix& r);

// x > z = ~(x \ ~z) and z < y = ~(~z / y), the De Morgan duals.
RelationMatrix triangle_right(const RelationMatrix& x, const RelationMatrix& z);
RelationMatrix triangle_left(const RelationMatrix& z, const RelationMatrix& y);

// Reflexive-transitive closure, least fixpoint of I | R.X.
RelationMatrix kleene_star(const RelationMatrix& r);

enum class Property : uint8_t {
  Functional,
  LeftTotal,
  Function,
  Injective,
  Surjective,
  Bijection,
  Transitive,
  Reflexive,
  Coreflexive,
  Irreflexive,
  Symmetric,
  Antisymmetric,
  Asymmetric,
  Total,
  Connex,
  Idempotent,
  Preorder,
  Equivalence,
  PartialOrder,
  TotalOrder,
  StrictPartialOrder,
  StrictTotalOrder,
  Dense,
};

inline constexpr int kPropertyCount = 23;

const char* property_name(Property p);
Property property_from_name(const std::string& name);  // throws UnknownProperty

// Evaluates the property's algebraic (in)equality on the matrix level.
bool check_property(const RelationMatrix& r, Property p);

// Maximal complete bipartite sub-relation, both sides nonempty.
struct Biclique {
  Bits dom, rng;
  bool operator==(const Biclique&) const = default;
};

// All maximal bicliques (the formal concepts with nonempty sides), sorted
// by (|dom| descending, dom lexicographic, rng lexicographic). Their union
// reconstructs the relation exactly.
std::vector<Biclique> max_bicliques(const RelationMatrix& r);

void sort_bicliques(std::vector<Biclique>& bs);

// Plain serial implementations kept as references for tests and the
// benchmark; the main kernels above parallelize rows with OpenMP.
namespace reference {
RelationMatrix compose(const RelationMatrix& r, const RelationMatrix& s);
RelationMatrix right_residual(const RelationMatrix& r, const RelationMatrix& s);
RelationMatrix left_residual(const RelationMatrix& s, const RelationMatrix& r);
RelationMatrix kleene_star(const RelationMatrix& r);
std::vector<Biclique> max_bicliques(const RelationMatrix& r);
}  // namespace reference

}  // namespace ca::relalg
