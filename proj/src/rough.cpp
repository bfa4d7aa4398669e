#include "ca/rough.hpp"

namespace ca::rough {

using expr::Formula;
using expr::Kind;
using logic4::PairVal;

int EvidenceWorld::add_object(const std::string& name) {
  auto it = object_index.find(name);
  if (it != object_index.end()) return it->second;
  int i = int(objects.size());
  objects.push_back(name);
  object_index.emplace(name, i);
  // Evidence rows and relation matrices are sized over the current universe;
  // widen them when an object arrives later.
  for (std::size_t a = 0; a < pos.size(); ++a) {
    Bits p(objects.size()), n(objects.size());
    pos[a].for_each([&](std::size_t o) { p.set(o); });
    neg[a].for_each([&](std::size_t o) { n.set(o); });
    pos[a] = std::move(p);
    neg[a] = std::move(n);
  }
  for (auto& [_, m] : relations) {
    relalg::RelationMatrix wide(int(objects.size()));
    for (int r = 0; r < m.n; ++r)
      m.rows[r].for_each([&](std::size_t c) { wide.set(r, int(c)); });
    m = std::move(wide);
  }
  return i;
}

int EvidenceWorld::add_atom(const std::string& name) {
  int i = atoms.find(name);
  if (i >= 0) return i;
  i = atoms.add(name);
  pos.emplace_back(objects.size());
  neg.emplace_back(objects.size());
  return i;
}

void EvidenceWorld::add_relation(const std::string& name) {
  relations.emplace(name, relalg::RelationMatrix(int(objects.size())));
}

int EvidenceWorld::object(const std::string& name) const {
  auto it = object_index.find(name);
  if (it == object_index.end()) throw UnknownObject("unknown object '" + name + "'");
  return it->second;
}

void EvidenceWorld::set_evidence(int object, int atom, bool negative_axis, bool value) {
  (negative_axis ? neg : pos)[atom].set(object, value);
}

PairVal eval_at(const EvidenceWorld& w, const expr::Formula& f, int object) {
  return logic4::eval_pair(f, [&](const Formula& leaf) -> PairVal {
    if (leaf.kind == Kind::NameRef || leaf.kind == Kind::ClassRef)
      return w.atom_value(w.atoms.require(leaf.name), object);
    throw logic4::UnsupportedOperator("operator not supported in a world formula: " +
                                      expr::to_sexpr(leaf));
  });
}

logic4::Status eval_status(const EvidenceWorld& w, const expr::Formula& f,
                           const std::string& object) {
  return logic4::status_of(eval_at(w, f, w.object(object)));
}

relalg::RelationMatrix eval_relation(const EvidenceWorld& w, const expr::Formula& f) {
  const int n = int(w.size());
  switch (f.kind) {
    case Kind::NameRef: {
      auto it = w.relations.find(f.name);
      if (it == w.relations.end())
        throw UnknownObject("unknown relation '" + f.name + "'");
      return it->second;
    }
    case Kind::Ident: return relalg::RelationMatrix::identity(n);
    case Kind::Univ: return relalg::RelationMatrix::full(n);
    case Kind::Empty: return relalg::RelationMatrix::zero(n);
    case Kind::Union: return relalg::union_of(eval_relation(w, *f.left), eval_relation(w, *f.right));
    case Kind::Inter: return relalg::inter_of(eval_relation(w, *f.left), eval_relation(w, *f.right));
    case Kind::Compose: return relalg::compose(eval_relation(w, *f.left), eval_relation(w, *f.right));
    case Kind::BoolComp: return relalg::complement(eval_relation(w, *f.left));
    case Kind::Inverse: return relalg::inverse(eval_relation(w, *f.left));
    case Kind::Star: return relalg::kleene_star(eval_relation(w, *f.left));
    default:
      throw expr::SortError("class-sorted operator in a relation expression", f.pos);
  }
}

RoughInterval rough_of_formula(const EvidenceWorld& w, const expr::Formula& f,
                               const std::optional<Bits>& base) {
  const std::size_t n = w.size();
  RoughInterval out{Bits(n), Bits(n)};
  for (std::size_t o = 0; o < n; ++o) {
    PairVal v = eval_at(w, f, int(o));
    if (v.pos) out.lb.set(o);
    if (!v.neg) out.ub.set(o);
  }
  if (base) {
    out.lb &= *base;
    out.ub &= *base;
  }
  return out;
}

RoughInterval rough_meet(const RoughInterval& a, const RoughInterval& b) {
  if (a.lb.size() != b.lb.size()) throw UniverseMismatch("intervals over different universes");
  return {a.lb & b.lb, a.ub | b.ub};
}

RoughInterval rough_join(const RoughInterval& a, const RoughInterval& b) {
  if (a.lb.size() != b.lb.size()) throw UniverseMismatch("intervals over different universes");
  return {a.lb | b.lb, a.ub & b.ub};
}

StatusPartition status_partition(const EvidenceWorld& w, int atom) {
  const std::size_t n = w.size();
  StatusPartition p{Bits(n), Bits(n), Bits(n), Bits(n)};
  for (std::size_t o = 0; o < n; ++o) {
    switch (logic4::status_of(w.atom_value(atom, int(o)))) {
      case logic4::Status::Plus: p.true_set.set(o); break;
      case logic4::Status::Minus: p.false_set.set(o); break;
      case logic4::Status::Both: p.both_set.set(o); break;
      case logic4::Status::Neither: p.neither_set.set(o); break;
    }
  }
  return p;
}

FuzzyInterval fuzzy_interval(const EvidenceWorld& w, const expr::Formula& f,
                             const std::optional<Bits>& base) {
  const long long n = (long long)w.size();
  if (n == 0) throw EmptyUniverse("fuzzy interval over an empty universe");
  RoughInterval iv = rough_of_formula(w, f, base);
  // hi = (n - |lb(-f)|)/n; pos(-f) and neg(f) are the same bits, so this is
  // exactly |ub(f)|/n.
  return {(long long)iv.lb.count(), (long long)iv.ub.count(), n};
}

Fraction prob_of(const EvidenceWorld& w, const expr::Formula& f,
                 const std::optional<Bits>& base) {
  const long long n = (long long)w.size();
  if (n == 0) throw EmptyUniverse("probability over an empty universe");
  return {(long long)rough_of_formula(w, f, base).lb.count(), n};
}

}  // namespace ca::rough
