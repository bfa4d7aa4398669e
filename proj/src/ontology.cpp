#include "ca/ontology.hpp"

#include <algorithm>
#include <functional>

namespace ca::onto {

using expr::Formula;
using expr::FormulaPtr;
using expr::Kind;
using logic4::PairVal;

namespace {

bool reserved_name(const std::string& n) { return n == "U" || n == "0" || n == "I"; }

}  // namespace

const ClassNode& Ontology::node(const std::string& name) const {
  return classes_.at(canonical(name));
}

std::string Ontology::canonical(const std::string& name) const {
  if (classes_.count(name)) return name;
  auto it = alias_of_.find(name);
  if (it != alias_of_.end()) return it->second;
  if (decls_.count(name)) return name;  // before the first classify()
  throw UnknownReference("unknown class '" + name + "'");
}

bool Ontology::has_class(const std::string& name) const { return decls_.count(name) != 0; }

bool Ontology::has_relation(const std::string& name) const {
  return world_.relations.count(name) != 0;
}

void Ontology::add_object(const std::string& name) { world_.add_object(name); }

void Ontology::declare_class(const std::string& name) {
  if (reserved_name(name)) throw DuplicateName("'" + name + "' is reserved");
  if (decls_.count(name)) throw DuplicateName("class '" + name + "' already declared");
  if (has_relation(name)) throw DuplicateName("'" + name + "' already names a relation");
  decls_.emplace(name, Decl{});
  order_.push_back(name);
  world_.add_atom(name);
  classified_ = false;
}

void Ontology::declare_relation(const std::string& name) {
  if (reserved_name(name)) throw DuplicateName("'" + name + "' is reserved");
  if (has_relation(name)) throw DuplicateName("relation '" + name + "' already declared");
  if (decls_.count(name)) throw DuplicateName("'" + name + "' already names a class");
  world_.add_relation(name);
}

void Ontology::add_edge(const std::string& rel, const std::string& from, const std::string& to) {
  auto it = world_.relations.find(rel);
  if (it == world_.relations.end()) throw UnknownReference("unknown relation '" + rel + "'");
  it->second.set(world_.object(from), world_.object(to));
  classified_ = false;
}

void Ontology::add_isa(const std::string& sub, const std::string& super) {
  auto s = decls_.find(sub);
  if (s == decls_.end()) throw UnknownReference("unknown class '" + sub + "'");
  if (!decls_.count(super)) throw UnknownReference("unknown class '" + super + "'");
  auto& sup = s->second.supers;
  if (std::find(sup.begin(), sup.end(), super) == sup.end()) sup.push_back(super);
  classified_ = false;
}

void Ontology::set_intent(const std::string& cls, expr::FormulaPtr raw) {
  auto it = decls_.find(cls);
  if (it == decls_.end()) throw UnknownReference("unknown class '" + cls + "'");
  if (it->second.raw) throw DuplicateName("intent of '" + cls + "' already set");
  // Every bare name must resolve in its inferred sort, and every class
  // reference must be declared.
  auto sorts = expr::infer_sorts(*raw);
  std::function<void(const Formula&)> check = [&](const Formula& f) {
    if (f.kind == Kind::ClassRef) {
      if (f.name != kTop && !decls_.count(f.name))
        throw UnknownReference("unknown class '" + f.name + "'");
    } else if (f.kind == Kind::NameRef) {
      if (expr::sort_of(f, sorts) == expr::Sort::Relation) {
        if (!has_relation(f.name)) throw UnknownReference("unknown relation '" + f.name + "'");
      } else if (!decls_.count(f.name)) {
        if (has_relation(f.name))
          throw expr::SortError("relation '" + f.name + "' used as a class", f.pos);
        throw UnknownReference("unknown class '" + f.name + "'");
      }
    }
    if (f.left) check(*f.left);
    if (f.right) check(*f.right);
  };
  check(*raw);
  it->second.raw = std::move(raw);
  classified_ = false;
}

void Ontology::assert_evidence(const std::string& object, const std::string& cls,
                               bool negative) {
  int o = world_.object(object);
  if (!decls_.count(cls)) throw UnknownReference("unknown class '" + cls + "'");
  world_.set_evidence(o, world_.atoms.require(cls), negative);
  if (classified_) recompute_extents();
}

// ------------------------------------------------------- intent expansion

FormulaPtr Ontology::expand(const Formula& raw, std::set<std::string>& stack) {
  switch (raw.kind) {
    case Kind::ClassRef:
      if (raw.name == kTop) return expr::univ();
      if (!decls_.count(raw.name)) throw UnknownReference("unknown class '" + raw.name + "'");
      return effective_intent(raw.name, stack);
    case Kind::NameRef: {
      if (atom_defs_.count(raw.name)) return expr::name_ref(raw.name);  // opaque atom
      if (decls_.count(raw.name)) return effective_intent(raw.name, stack);
      if (has_relation(raw.name))
        throw expr::SortError("relation '" + raw.name + "' used as a class", raw.pos);
      throw UnknownReference("unknown class '" + raw.name + "'");
    }
    case Kind::SubsetAtom:
    case Kind::Selector: {
      // Opaque atom keyed on the canonical print of the written form.
      std::string key = expr::print(raw);
      if (!atom_defs_.count(key)) atom_defs_.emplace(key, std::make_shared<Formula>(raw));
      return expr::name_ref(key);
    }
    case Kind::Univ: return expr::univ();
    case Kind::Empty: return expr::empty();
    case Kind::Union: return expr::union_of(expand(*raw.left, stack), expand(*raw.right, stack));
    case Kind::Inter: return expr::inter_of(expand(*raw.left, stack), expand(*raw.right, stack));
    case Kind::BoolComp: return expr::bool_comp(expand(*raw.left, stack));
    case Kind::PseudoComp: return expr::pseudo_comp(expand(*raw.left, stack));
    default:
      throw expr::SortError("relational operator at the logical level of an intent", raw.pos);
  }
}

// Same expansion against the finished intent table; usable from queries.
FormulaPtr Ontology::expand_query(const Formula& f) const {
  switch (f.kind) {
    case Kind::ClassRef:
      if (f.name == kTop) return expr::univ();
      if (f.name == std::string(kBottom)) return expr::empty();
      {
        auto it = effs_.find(canonical(f.name));
        if (it == effs_.end()) throw UnknownReference("unknown class '" + f.name + "'");
        return it->second;
      }
    case Kind::NameRef: {
      if (atom_defs_.count(f.name)) return expr::name_ref(f.name);
      if (decls_.count(f.name)) return effs_.at(canonical(f.name));
      if (has_relation(f.name))
        throw expr::SortError("relation '" + f.name + "' used as a class", f.pos);
      throw UnknownReference("unknown class '" + f.name + "'");
    }
    case Kind::SubsetAtom:
    case Kind::Selector: {
      std::string key = expr::print(f);
      if (!atom_defs_.count(key)) atom_defs_.emplace(key, std::make_shared<Formula>(f));
      return expr::name_ref(key);
    }
    case Kind::Univ: return expr::univ();
    case Kind::Empty: return expr::empty();
    case Kind::Union: return expr::union_of(expand_query(*f.left), expand_query(*f.right));
    case Kind::Inter: return expr::inter_of(expand_query(*f.left), expand_query(*f.right));
    case Kind::BoolComp: return expr::bool_comp(expand_query(*f.left));
    case Kind::PseudoComp: return expr::pseudo_comp(expand_query(*f.left));
    default:
      throw expr::SortError("relation expression used as a class", f.pos);
  }
}

FormulaPtr Ontology::effective_intent(const std::string& name, std::set<std::string>& stack) {
  auto it = effs_.find(name);
  if (it != effs_.end()) return it->second;
  if (stack.count(name)) throw CyclicDefinition("cyclic class definition through '" + name + "'");
  stack.insert(name);
  const Decl& d = decls_.at(name);
  FormulaPtr base = d.raw ? expand(*d.raw, stack) : expr::name_ref(name);
  for (const std::string& s : d.supers)
    base = expr::inter_of(base, effective_intent(s, stack));
  stack.erase(name);
  effs_[name] = base;
  return base;
}

void Ontology::mint_hidden_classes() {
  std::vector<std::string> snapshot = order_;
  for (const std::string& name : snapshot) {
    const Decl& d = decls_.at(name);
    if (!d.raw || minted_.count(name)) continue;
    minted_.insert(name);
    FormulaPtr eff = effs_.at(name);
    auto table = logic4::AtomTable::sorted_from(logic4::atom_names(*eff));
    auto gen = [this] { return "_h" + std::to_string(++hidden_counter_); };
    auto res = logic4::tseytin(*eff, table, gen);
    for (const auto& h : res.hidden) {
      if (!h.is_union) continue;
      const std::string& hname = res.atoms.names.at(h.atom);
      decls_.emplace(hname, Decl{h.def, {}, true});
      order_.push_back(hname);
      world_.add_atom(hname);
      effs_[hname] = h.def;  // definitions are already atom-level
      minted_.insert(hname);
    }
  }
}

// ------------------------------------------------------------ evaluation

// Lower/upper object sets of one opaque atom (subset atom or selector).
const std::pair<Bits, Bits>& Ontology::atom_sets(const std::string& key) const {
  auto it = atom_sets_.find(key);
  if (it != atom_sets_.end()) return it->second;
  if (atom_inflight_.count(key))
    throw CyclicDefinition("cyclic reference through '" + key + "'");
  atom_inflight_.insert(key);
  const Formula& def = *atom_defs_.at(key);
  const std::size_t n = world_.size();
  Bits lb(n), ub(n);
  if (def.kind == Kind::SubsetAtom) {
    std::string path_key = expr::print(*def.left);
    auto pm = path_cache_.find(path_key);
    if (pm == path_cache_.end())
      pm = path_cache_.emplace(path_key, rough::eval_relation(world_, *def.left)).first;
    FormulaPtr rhs = expand_query(*def.right);
    Bits rhs_lb(n), rhs_ub(n);
    for (std::size_t o = 0; o < n; ++o) {
      PairVal v = intent_pair(*rhs, int(o));
      if (v.pos) rhs_lb.set(o);
      if (!v.neg) rhs_ub.set(o);
    }
    for (std::size_t o = 0; o < n; ++o) {
      const Bits& img = pm->second.rows[o];
      // holds iff the image is nonempty and inside the class; disproved iff
      // the image is empty or reaches outside the upper bound
      if (img.any() && img.subset_of(rhs_lb)) lb.set(o);
      if (img.any() && img.subset_of(rhs_ub)) ub.set(o);
    }
  } else {  // Selector: base{cond} evaluates as base & cond
    FormulaPtr base = expand_query(*def.left);
    FormulaPtr cond = expand_query(*def.right);
    for (std::size_t o = 0; o < n; ++o) {
      PairVal a = intent_pair(*base, int(o));
      PairVal b = intent_pair(*cond, int(o));
      if (a.pos && b.pos) lb.set(o);
      if (!(a.neg || b.neg)) ub.set(o);
    }
  }
  atom_inflight_.erase(key);
  return atom_sets_.emplace(key, std::make_pair(std::move(lb), std::move(ub))).first->second;
}

PairVal Ontology::intent_pair(const Formula& f, int object) const {
  return logic4::eval_pair(f, [&](const Formula& leaf) -> PairVal {
    if (leaf.kind != Kind::NameRef)
      throw expr::SortError("relation expression used as a class", leaf.pos);
    if (atom_defs_.count(leaf.name)) {
      const auto& sets = atom_sets(leaf.name);
      return {sets.first.get(object), !sets.second.get(object)};
    }
    int a = world_.atoms.find(leaf.name);
    if (a < 0) throw UnknownReference("unknown class '" + leaf.name + "'");
    return world_.atom_value(a, object);
  });
}

void Ontology::recompute_extents() {
  path_cache_.clear();
  atom_sets_.clear();
  atom_inflight_.clear();
  const std::size_t n = world_.size();
  for (auto& [name, node] : classes_) {
    if (node.builtin) {
      node.lb = node.ub = (name == std::string(kTop) ? Bits::ones(n) : Bits(n));
      continue;
    }
    Bits lb(n), ub(n);
    const Formula& eff = *effs_.at(name);
    for (std::size_t o = 0; o < n; ++o) {
      PairVal v = intent_pair(eff, int(o));
      if (v.pos) lb.set(o);
      if (!v.neg) ub.set(o);
    }
    node.lb = std::move(lb);
    node.ub = std::move(ub);
  }
}

// ---------------------------------------------------------- classification

void Ontology::classify() {
  effs_.clear();
  std::set<std::string> stack;
  for (const std::string& name : order_) effective_intent(name, stack);
  mint_hidden_classes();

  // Entailment between all declared classes, on the expanded intents.
  const std::vector<std::string>& names = order_;
  const int k = int(names.size());
  std::vector<std::vector<logic4::Relation>> rel(k, std::vector<logic4::Relation>(k));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      rel[i][j] = logic4::decide_relation(*effs_.at(names[i]), *effs_.at(names[j]));
      rel[j][i] = rel[i][j] == logic4::Relation::Implies    ? logic4::Relation::ImpliedBy
                  : rel[i][j] == logic4::Relation::ImpliedBy ? logic4::Relation::Implies
                                                             : rel[i][j];
    }

  // Equivalence groups merge under the lexicographically smallest name.
  std::vector<int> group(k);
  for (int i = 0; i < k; ++i) group[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (group[x] != x) x = group[x] = group[group[x]];
    return x;
  };
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (rel[i][j] == logic4::Relation::Equivalent) group[find(i)] = find(j);
  std::vector<std::string> rep(k);
  for (int i = 0; i < k; ++i) {
    int r = find(i);
    if (rep[r].empty() || names[i] < rep[r]) rep[r] = names[i];
  }

  classes_.clear();
  alias_of_.clear();
  for (int i = 0; i < k; ++i) {
    const std::string& canon = rep[find(i)];
    if (names[i] != canon) {
      alias_of_[names[i]] = canon;
      continue;
    }
    const Decl& d = decls_.at(names[i]);
    ClassNode n;
    n.name = names[i];
    n.raw_intent = d.raw;
    n.declared_supers = d.supers;
    n.hidden = d.hidden;
    n.logical_intent = effs_.at(names[i]);
    classes_.emplace(names[i], std::move(n));
  }
  for (int i = 0; i < k; ++i) {
    const std::string& canon = rep[find(i)];
    if (names[i] != canon) classes_.at(canon).aliases.push_back(names[i]);
  }
  for (auto& [name, n] : classes_) std::sort(n.aliases.begin(), n.aliases.end());

  // IS-A edges between canonical classes; entailment is transitive, so the
  // pairwise relation is already closed.
  for (int i = 0; i < k; ++i) {
    if (rep[find(i)] != names[i]) continue;
    for (int j = 0; j < k; ++j) {
      if (rep[find(j)] != names[j] || i == j) continue;
      if (rel[i][j] == logic4::Relation::Implies) {
        classes_.at(names[i]).parents.insert(names[j]);
        classes_.at(names[j]).children.insert(names[i]);
      }
    }
  }

  // Builtins: top above everything, bottom below.
  for (const char* b : {kTop, kBottom}) {
    ClassNode n;
    n.name = b;
    n.builtin = true;
    classes_.emplace(b, std::move(n));
  }
  for (auto& [name, n] : classes_) {
    if (n.builtin) continue;
    n.parents.insert(kTop);
    n.children.insert(kBottom);
    classes_.at(kTop).children.insert(name);
    classes_.at(kBottom).parents.insert(name);
  }

  recompute_extents();

  // Canonical normal forms of the stored intents.
  for (auto& [name, n] : classes_) {
    if (n.builtin) continue;
    auto atoms = logic4::atom_names(*n.logical_intent);
    if (atoms.size() <= 16) {
      n.intent_atoms = logic4::AtomTable::sorted_from(atoms);
      n.normal_intent =
          logic4::blake_normal_form(logic4::dnf_of(*n.logical_intent, n.intent_atoms));
    }
  }
  classified_ = true;
}

// --------------------------------------------------------------- queries

Bits Ontology::eval_intent(const expr::Formula& f, ExtentMode mode) const {
  FormulaPtr eff = expand_query(f);
  const std::size_t n = world_.size();
  Bits out(n);
  for (std::size_t o = 0; o < n; ++o) {
    PairVal v = intent_pair(*eff, int(o));
    if (mode == ExtentMode::Lower ? v.pos : !v.neg) out.set(o);
  }
  return out;
}

Bits Ontology::select(const expr::Formula& sel, ExtentMode mode) const {
  if (sel.kind != Kind::Selector)
    throw expr::SortError("select expects a selector expression @Base{...}", sel.pos);
  return eval_intent(sel, mode);
}

std::vector<std::string> Ontology::object_names(const Bits& set) const {
  std::vector<std::string> out;
  set.for_each([&](std::size_t i) { out.push_back(world_.objects[i]); });
  std::sort(out.begin(), out.end());
  return out;
}

// ------------------------------------------------------------- describe

namespace {

struct Form {
  FormulaPtr f;
  std::string key;
  Bits ext;
  int ops;
  bool is_and;
};

void sort_forms(std::vector<Form>& v) {
  std::sort(v.begin(), v.end(), [](const Form& a, const Form& b) { return a.key < b.key; });
}

}  // namespace

std::vector<FormulaPtr> Ontology::describe_extent(const Bits& target, int budget,
                                                  ExtentMode mode) const {
  if (budget < 0 || budget > 8)
    throw std::invalid_argument("describe budget must be between 0 and 8");

  std::vector<Form> leaves;
  for (const auto& [name, n] : classes_) {
    if (n.hidden || n.builtin) continue;
    leaves.push_back(
        {expr::class_ref(name), "@" + name, mode == ExtentMode::Lower ? n.lb : n.ub, 0, false});
  }
  sort_forms(leaves);

  // and_pool: admissible children of AND nodes (leaves and OR nodes);
  // or_pool: dual. Strictly increasing picks canonicalize the forms modulo
  // commutativity and associativity.
  std::vector<Form> and_pool = leaves, or_pool = leaves;

  auto build = [&](bool make_and, const std::vector<Form>& pool, int ops,
                   std::vector<Form>& out) {
    std::vector<const Form*> chosen;
    // Each child costs child.ops + 1; the whole node costs ops + 1.
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int rem) {
      if (rem == 0 && chosen.size() >= 2) {
        FormulaPtr f = chosen.back()->f;
        Bits ext = chosen.back()->ext;
        for (int i = int(chosen.size()) - 2; i >= 0; --i) {
          f = make_and ? expr::inter_of(chosen[i]->f, f) : expr::union_of(chosen[i]->f, f);
          if (make_and)
            ext &= chosen[i]->ext;
          else
            ext |= chosen[i]->ext;
        }
        out.push_back({f, expr::print(*f), std::move(ext), ops, make_and});
        return;
      }
      for (std::size_t i = start; i < pool.size(); ++i) {
        int cost = pool[i].ops + 1;
        if (cost > rem) continue;
        chosen.push_back(&pool[i]);
        rec(i + 1, rem - cost);
        chosen.pop_back();
      }
    };
    rec(0, ops + 1);
  };

  for (int k = 0; k <= budget; ++k) {
    std::vector<Form> level;
    if (k == 0) {
      level = leaves;
    } else {
      build(true, and_pool, k, level);
      build(false, or_pool, k, level);
      for (const Form& f : level) (f.is_and ? or_pool : and_pool).push_back(f);
      sort_forms(or_pool);
      sort_forms(and_pool);
    }
    std::vector<Form> found;
    for (const Form& f : level)
      if (f.ext == target) found.push_back(f);
    if (!found.empty()) {
      sort_forms(found);
      std::vector<FormulaPtr> out;
      for (const Form& f : found) out.push_back(f.f);
      return out;
    }
  }
  return {};
}

}  // namespace ca::onto
