#include "ca/logic4.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <set>

namespace ca::logic4 {

using expr::Formula;
using expr::FormulaPtr;
using expr::Kind;

const char* status_name(Status s) {
  switch (s) {
    case Status::Plus: return "true";
    case Status::Minus: return "false";
    case Status::Neither: return "neither";
    case Status::Both: return "both";
  }
  return "?";
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Equivalent: return "equivalent";
    case Relation::Implies: return "implies";
    case Relation::ImpliedBy: return "implied_by";
    case Relation::Unrelated: return "unrelated";
  }
  return "?";
}

// ---------------------------------------------------------------- atoms

int AtomTable::add(const std::string& name) {
  auto it = index.find(name);
  if (it != index.end()) return it->second;
  int i = int(names.size());
  names.push_back(name);
  index.emplace(name, i);
  return i;
}

int AtomTable::find(const std::string& name) const {
  auto it = index.find(name);
  return it == index.end() ? -1 : it->second;
}

int AtomTable::require(const std::string& name) const {
  int i = find(name);
  if (i < 0) throw UnknownAtom("unknown atom '" + name + "'");
  return i;
}

AtomTable AtomTable::sorted_from(const std::vector<std::string>& names) {
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  AtomTable t;
  for (auto& n : sorted) t.add(n);
  return t;
}

namespace {

void collect_atom_names(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind) {
    case Kind::NameRef: out.push_back(f.name); return;
    case Kind::Univ:
    case Kind::Empty: return;
    case Kind::Union:
    case Kind::Inter:
      collect_atom_names(*f.left, out);
      collect_atom_names(*f.right, out);
      return;
    case Kind::BoolComp:
    case Kind::PseudoComp: collect_atom_names(*f.left, out); return;
    default:
      throw UnsupportedOperator("operator not supported in a logical formula: " +
                                expr::to_sexpr(f));
  }
}

}  // namespace

std::vector<std::string> atom_names(const expr::Formula& f) {
  std::vector<std::string> out;
  collect_atom_names(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

expr::FormulaPtr atomize(const expr::Formula& f) {
  switch (f.kind) {
    case Kind::NameRef: return expr::name_ref(f.name);
    case Kind::ClassRef: return expr::name_ref(f.name);
    case Kind::SubsetAtom:
    case Kind::Selector: return expr::name_ref(expr::print(f));
    case Kind::Univ: return expr::univ();
    case Kind::Empty: return expr::empty();
    case Kind::Union: return expr::union_of(atomize(*f.left), atomize(*f.right));
    case Kind::Inter: return expr::inter_of(atomize(*f.left), atomize(*f.right));
    case Kind::BoolComp: return expr::bool_comp(atomize(*f.left));
    case Kind::PseudoComp: return expr::pseudo_comp(atomize(*f.left));
    default:
      throw UnsupportedOperator("relational operator in a logical intent: " + expr::print(f));
  }
}

// ------------------------------------------------------------- conjuncts

std::vector<Literal> conjunct_literals(Conjunct c) {
  std::vector<Literal> out;
  while (c) {
    int id = __builtin_ctzll(c);
    out.push_back(Literal::from_id(id));
    c &= c - 1;
  }
  return out;
}

bool conjunct_less(Conjunct a, Conjunct b) {
  while (a && b) {
    int la = __builtin_ctzll(a), lb = __builtin_ctzll(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return !a && b;  // shorter prefix first
}

std::string literal_text(Literal l, const AtomTable& atoms) {
  std::string s;
  if (l.comp) s += '~';
  if (l.pseudo) s += '-';
  s += atoms.names.at(l.atom);
  return s;
}

std::string print_dnf(const Dnf& d, const AtomTable& atoms) {
  if (d.is_bottom()) return "0";
  if (d.is_top()) return "U";
  std::string out;
  for (std::size_t i = 0; i < d.conjuncts.size(); ++i) {
    if (i) out += " | ";
    auto lits = conjunct_literals(d.conjuncts[i]);
    for (std::size_t j = 0; j < lits.size(); ++j) {
      if (j) out += '&';
      out += literal_text(lits[j], atoms);
    }
  }
  return out;
}

namespace {

// Removes duplicates and any conjunct that contains another (absorption).
void absorb(std::vector<Conjunct>& cs) {
  std::sort(cs.begin(), cs.end(), [](Conjunct a, Conjunct b) {
    int ca = __builtin_popcountll(a), cb = __builtin_popcountll(b);
    return ca != cb ? ca < cb : a < b;
  });
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::vector<Conjunct> keep;
  for (Conjunct c : cs) {
    bool absorbed = false;
    for (Conjunct k : keep)
      if ((k & ~c) == 0) {  // k subset of c
        absorbed = true;
        break;
      }
    if (!absorbed) keep.push_back(c);
  }
  cs = std::move(keep);
}

void sort_canonical(std::vector<Conjunct>& cs) {
  std::sort(cs.begin(), cs.end(), conjunct_less);
}

constexpr uint64_t kCompMask = 0x5555555555555555ULL;  // comp=0 literal bits

// Swap each (plain, complemented) literal-bit pair.
inline Conjunct complement_bits(Conjunct c) {
  return ((c & kCompMask) << 1) | ((c >> 1) & kCompMask);
}

}  // namespace

Dnf dnf_of(const expr::Formula& f, const AtomTable& atoms) {
  // (comp, pseudo) carry pending complements down to the leaves.
  std::function<std::vector<Conjunct>(const Formula&, bool, bool)> rec =
      [&](const Formula& g, bool comp, bool pseudo) -> std::vector<Conjunct> {
    switch (g.kind) {
      case Kind::NameRef: {
        int a = atoms.require(g.name);
        if (a >= 16) throw TooManyAtoms("more than 16 atoms in one problem");
        return {conjunct_bit(Literal{a, pseudo, comp})};
      }
      case Kind::Univ:
      case Kind::Empty: {
        bool top = (g.kind == Kind::Univ) == !(comp ^ pseudo);
        if (top) return {0};
        return {};
      }
      case Kind::BoolComp: return rec(*g.left, !comp, pseudo);
      case Kind::PseudoComp: return rec(*g.left, comp, !pseudo);
      case Kind::Union:
      case Kind::Inter: {
        bool is_or = (g.kind == Kind::Union) == !(comp ^ pseudo);
        auto l = rec(*g.left, comp, pseudo);
        auto r = rec(*g.right, comp, pseudo);
        std::vector<Conjunct> out;
        if (is_or) {
          out = std::move(l);
          out.insert(out.end(), r.begin(), r.end());
        } else {
          for (Conjunct a : l)
            for (Conjunct b : r) {
              Conjunct m = a | b;
              if (!conjunct_tautological(m)) out.push_back(m);
            }
        }
        absorb(out);
        return out;
      }
      default:
        throw UnsupportedOperator("operator not supported in a logical formula: " +
                                  expr::to_sexpr(g));
    }
  };
  auto cs = rec(f, false, false);
  absorb(cs);
  sort_canonical(cs);
  return Dnf{std::move(cs)};
}

namespace {

Dnf blake_closure(const Dnf& d, std::mt19937_64* rng) {
  std::vector<Conjunct> cur = d.conjuncts;
  absorb(cur);
  for (;;) {
    // All consensus resolvents of the current set.
    std::vector<Conjunct> candidates;
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        Conjunct a = cur[i], b = cur[j];
        Conjunct clash = a & complement_bits(b);
        while (clash) {
          int id = __builtin_ctzll(clash);
          clash &= clash - 1;
          Conjunct bit = 1ULL << id;
          Conjunct cons = (a & ~bit) | (b & ~complement_bits(bit));
          if (!conjunct_tautological(cons)) candidates.push_back(cons);
        }
      }
    if (rng) std::shuffle(candidates.begin(), candidates.end(), *rng);
    bool grew = false;
    for (Conjunct c : candidates) {
      bool absorbed = false;
      for (Conjunct k : cur)
        if ((k & ~c) == 0) {
          absorbed = true;
          break;
        }
      if (!absorbed) {
        cur.push_back(c);
        grew = true;
      }
    }
    if (!grew) break;
    absorb(cur);
    if (rng) std::shuffle(cur.begin(), cur.end(), *rng);
  }
  sort_canonical(cur);
  return Dnf{std::move(cur)};
}

}  // namespace

Dnf blake_normal_form(const Dnf& d) { return blake_closure(d, nullptr); }

Dnf blake_normal_form(const Dnf& d, uint64_t shuffle_seed) {
  std::mt19937_64 rng(shuffle_seed);
  return blake_closure(d, &rng);
}

// --------------------------------------------------------- entailment

namespace {

// a entails b iff every conjunct of a extends some prime implicant of b.
bool implies_dnf(const Dnf& a, const Dnf& b) {
  for (Conjunct c : a.conjuncts) {
    bool covered = false;
    for (Conjunct q : b.conjuncts)
      if ((q & ~c) == 0) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

}  // namespace

Relation decide_relation(const Dnf& a, const Dnf& b) {
  bool ab = implies_dnf(a, b);
  bool ba = implies_dnf(b, a);
  if (ab && ba) return Relation::Equivalent;
  if (ab) return Relation::Implies;
  if (ba) return Relation::ImpliedBy;
  return Relation::Unrelated;
}

Relation decide_relation(const expr::Formula& a, const expr::Formula& b) {
  auto fa = atomize(a);
  auto fb = atomize(b);
  auto names = atom_names(*fa);
  auto nb = atom_names(*fb);
  names.insert(names.end(), nb.begin(), nb.end());
  AtomTable table = AtomTable::sorted_from(names);
  return decide_relation(blake_normal_form(dnf_of(*fa, table)),
                         blake_normal_form(dnf_of(*fb, table)));
}

// ------------------------------------------------------------- oracle

std::vector<Assignment> truth_oracle(const expr::Formula& f, const AtomTable& atoms) {
  int k = atoms.size();
  if (k > 12) throw TooManyAtoms("truth_oracle limited to 12 atoms");
  std::vector<Assignment> sat;
  for (Assignment a = 0; a < (1u << (2 * k)); ++a) {
    PairVal v = eval_pair(f, [&](const Formula& leaf) -> PairVal {
      if (leaf.kind != Kind::NameRef)
        throw UnsupportedOperator("non-atom leaf in oracle formula");
      return assignment_pair(a, atoms.require(leaf.name));
    });
    if (v.pos) sat.push_back(a);
  }
  return sat;
}

// ------------------------------------------------------------- tseytin

namespace {

struct Nnf {
  enum K { Lit, And, Or, True, False } k;
  Literal lit{};
  std::unique_ptr<Nnf> l, r;
};

std::unique_ptr<Nnf> mk(Nnf::K k) {
  auto n = std::make_unique<Nnf>();
  n->k = k;
  return n;
}

std::unique_ptr<Nnf> to_nnf(const Formula& f, bool comp, bool pseudo, const AtomTable& atoms) {
  switch (f.kind) {
    case Kind::NameRef: {
      auto n = mk(Nnf::Lit);
      int a = atoms.require(f.name);
      if (a >= 16) throw TooManyAtoms("more than 16 atoms in one problem");
      n->lit = Literal{a, pseudo, comp};
      return n;
    }
    case Kind::Univ:
    case Kind::Empty: {
      bool top = (f.kind == Kind::Univ) == !(comp ^ pseudo);
      return mk(top ? Nnf::True : Nnf::False);
    }
    case Kind::BoolComp: return to_nnf(*f.left, !comp, pseudo, atoms);
    case Kind::PseudoComp: return to_nnf(*f.left, comp, !pseudo, atoms);
    case Kind::Union:
    case Kind::Inter: {
      bool is_or = (f.kind == Kind::Union) == !(comp ^ pseudo);
      auto l = to_nnf(*f.left, comp, pseudo, atoms);
      auto r = to_nnf(*f.right, comp, pseudo, atoms);
      // Constant folding keeps gates free of True/False children.
      if (is_or) {
        if (l->k == Nnf::True || r->k == Nnf::True) return mk(Nnf::True);
        if (l->k == Nnf::False) return r;
        if (r->k == Nnf::False) return l;
      } else {
        if (l->k == Nnf::False || r->k == Nnf::False) return mk(Nnf::False);
        if (l->k == Nnf::True) return r;
        if (r->k == Nnf::True) return l;
      }
      auto n = mk(is_or ? Nnf::Or : Nnf::And);
      n->l = std::move(l);
      n->r = std::move(r);
      return n;
    }
    default:
      throw UnsupportedOperator("relational operator in a logical intent: " + expr::print(f));
  }
}

FormulaPtr nnf_to_formula(const Nnf& n, const AtomTable& atoms) {
  switch (n.k) {
    case Nnf::True: return expr::univ();
    case Nnf::False: return expr::empty();
    case Nnf::Lit: {
      FormulaPtr f = expr::name_ref(atoms.names.at(n.lit.atom));
      if (n.lit.pseudo) f = expr::pseudo_comp(f);
      if (n.lit.comp) f = expr::bool_comp(f);
      return f;
    }
    case Nnf::And: return expr::inter_of(nnf_to_formula(*n.l, atoms), nnf_to_formula(*n.r, atoms));
    case Nnf::Or: return expr::union_of(nnf_to_formula(*n.l, atoms), nnf_to_formula(*n.r, atoms));
  }
  return nullptr;
}

struct TseytinBuilder {
  TseytinResult& res;
  NameGen fresh;
  int counter = 0;

  Literal negate(Literal l) const { return {l.atom, l.pseudo, !l.comp}; }

  Literal new_hidden(const Nnf& def, bool is_union) {
    std::string name = fresh ? fresh() : "_h" + std::to_string(++counter);
    int a = res.atoms.add(name);
    if (a >= 16) throw TooManyAtoms("more than 16 atoms in one problem");
    res.hidden.push_back({a, nnf_to_formula(def, res.atoms), is_union});
    return Literal{a, false, false};
  }

  // Returns a single literal standing for the subtree, emitting definition
  // clauses for named gates.
  Literal name_of(const Nnf& n) {
    if (n.k == Nnf::Lit) return n.lit;
    Literal a = name_of(*n.l);
    Literal b = name_of(*n.r);
    Literal h = new_hidden(n, n.k == Nnf::Or);
    if (n.k == Nnf::Or) {
      res.clauses.push_back({negate(h), a, b});
      res.clauses.push_back({h, negate(a)});
      res.clauses.push_back({h, negate(b)});
    } else {
      res.clauses.push_back({negate(h), a});
      res.clauses.push_back({negate(h), b});
      res.clauses.push_back({h, negate(a), negate(b)});
    }
    return h;
  }

  // The top-level conjunction spine becomes unit or definition clauses.
  void emit_top(const Nnf& n) {
    switch (n.k) {
      case Nnf::True: return;
      case Nnf::False: res.clauses.push_back({}); return;
      case Nnf::And:
        emit_top(*n.l);
        emit_top(*n.r);
        return;
      case Nnf::Lit: res.clauses.push_back({n.lit}); return;
      case Nnf::Or: res.clauses.push_back({name_of(n)}); return;
    }
  }
};

}  // namespace

TseytinResult tseytin(const expr::Formula& f, const AtomTable& atoms, NameGen fresh) {
  TseytinResult res;
  res.atoms = atoms;
  res.original_atoms = atoms.size();
  auto nnf = to_nnf(f, false, false, atoms);
  TseytinBuilder b{res, std::move(fresh)};
  b.emit_top(*nnf);
  return res;
}

}  // namespace ca::logic4
