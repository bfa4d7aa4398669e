#include <algorithm>
#include <random>

#include "ca/logic4.hpp"
#include "doctest.h"

using namespace ca;
using namespace ca::logic4;
using expr::FormulaPtr;

namespace {

Dnf nf(const std::string& text) {
  auto f = atomize(*expr::parse(text));
  auto table = AtomTable::sorted_from(atom_names(*f));
  return blake_normal_form(dnf_of(*f, table));
}

std::string nf_text(const std::string& text) {
  auto f = atomize(*expr::parse(text));
  auto table = AtomTable::sorted_from(atom_names(*f));
  return print_dnf(blake_normal_form(dnf_of(*f, table)), table);
}

// Random logical formulas over k atoms named a0..a{k-1}.
FormulaPtr random_logical(std::mt19937_64& rng, int depth, int k) {
  auto pick = [&](int n) { return int(rng() % n); };
  if (depth == 0 || pick(4) == 0)
    return expr::name_ref("a" + std::to_string(pick(k)));
  switch (pick(5)) {
    case 0: return expr::union_of(random_logical(rng, depth - 1, k),
                                  random_logical(rng, depth - 1, k));
    case 1: return expr::inter_of(random_logical(rng, depth - 1, k),
                                  random_logical(rng, depth - 1, k));
    case 2: return expr::bool_comp(random_logical(rng, depth - 1, k));
    case 3: return expr::pseudo_comp(random_logical(rng, depth - 1, k));
    default: return expr::union_of(random_logical(rng, depth - 1, k),
                                   random_logical(rng, depth - 1, k));
  }
}

int operator_count(const expr::Formula& f) {
  int n = f.kind == expr::Kind::NameRef || f.kind == expr::Kind::Univ ||
                  f.kind == expr::Kind::Empty
              ? 0
              : 1;
  if (f.left) n += operator_count(*f.left);
  if (f.right) n += operator_count(*f.right);
  return n;
}

Relation oracle_relation(const expr::Formula& a, const expr::Formula& b,
                         const AtomTable& table) {
  auto sa = truth_oracle(a, table);
  auto sb = truth_oracle(b, table);
  bool ab = std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
  bool ba = std::includes(sa.begin(), sa.end(), sb.begin(), sb.end());
  if (ab && ba) return Relation::Equivalent;
  if (ab) return Relation::Implies;
  if (ba) return Relation::ImpliedBy;
  return Relation::Unrelated;
}

}  // namespace

TEST_CASE("blake normal form examples") {
  CHECK(nf_text("p&q | p") == "p");                       // absorption
  CHECK(nf_text("p&q | ~p&r") == "p&q | ~p&r | q&r");     // consensus adds qr
  CHECK(nf_text("p&q | p&r | q&r") == "p&q | p&r | q&r"); // already prime
}

TEST_CASE("excluded middle holds for ~ only") {
  CHECK(nf("x | ~x").is_top());
  CHECK(nf("x & ~x").is_bottom());
  CHECK(nf_text("x & -x") == "x&-x");
  CHECK(nf_text("x | -x") == "x | -x");
}

TEST_CASE("pseudo-complement pushes as an involutive De Morgan dual") {
  CHECK(nf_text("-(x | y)") == "-x&-y");
  CHECK(nf_text("-(x & y)") == "-x | -y");
  CHECK(nf_text("--x") == "x");
  CHECK(nf_text("-~x") == "~-x");
  CHECK(nf_text("~-x") == "~-x");
}

TEST_CASE("constants") {
  CHECK(nf("0").is_bottom());
  CHECK(nf("U").is_top());
  CHECK(nf("x & 0").is_bottom());
  CHECK(nf("x | U").is_top());
  CHECK(nf_text("-U | x") == "x");  // -U is empty
  CHECK(nf("-0").is_top());
}

TEST_CASE("decide_relation examples") {
  auto rel = [](const char* a, const char* b) {
    return decide_relation(*expr::parse(a), *expr::parse(b));
  };
  CHECK(rel("p&q | p&r | q&r", "p&(q|r) | q&r") == Relation::Equivalent);
  CHECK(rel("p", "p | q") == Relation::Implies);
  CHECK(rel("p | q", "p") == Relation::ImpliedBy);
  CHECK(rel("p", "-p") == Relation::Unrelated);
  CHECK(rel("p", "~p") == Relation::Unrelated);
  CHECK(rel("0", "p") == Relation::Implies);
  CHECK(rel("p", "U") == Relation::Implies);
}

TEST_CASE("truth oracle examples") {
  AtomTable t1 = AtomTable::sorted_from({"p"});
  CHECK(truth_oracle(*atomize(*expr::parse("p")), t1).size() == 2);
  CHECK(truth_oracle(*atomize(*expr::parse("p & -p")), t1) ==
        std::vector<Assignment>{3});  // pos and neg both set
  CHECK(truth_oracle(*atomize(*expr::parse("0")), t1).empty());
  CHECK(truth_oracle(*atomize(*expr::parse("p | ~p")), t1).size() == 4);
}

TEST_CASE("status encoding and the 16-value lattice") {
  CHECK(status_of({true, false}) == Status::Plus);
  CHECK(status_of({false, true}) == Status::Minus);
  CHECK(status_of({true, true}) == Status::Both);
  CHECK(status_of({false, false}) == Status::Neither);

  LogicValue plus = LogicValue::of(Status::Plus);
  LogicValue minus = LogicValue::of(Status::Minus);
  LogicValue both = LogicValue::of(Status::Both);
  LogicValue neither = LogicValue::of(Status::Neither);
  CHECK(value_join(plus, minus).mask == (plus.mask | minus.mask));
  CHECK(value_join(plus, plus) == plus);
  CHECK(value_meet(value_join(plus, both), value_join(both, neither)) == both);
  // bounded lattice of 16 elements
  CHECK(value_leq(LogicValue{0}, plus));
  CHECK(value_leq(plus, LogicValue{0xf}));
}

TEST_CASE("tseytin examples") {
  AtomTable t = AtomTable::sorted_from({"a", "b", "c", "d"});
  auto r = tseytin(*atomize(*expr::parse("(a|b) & (c|d)")), t);
  CHECK(r.hidden.size() == 2);
  CHECK(r.clauses.size() == 8);
  CHECK(r.atoms.size() == 6);
  for (const auto& h : r.hidden) CHECK(h.is_union);

  AtomTable t1 = AtomTable::sorted_from({"a"});
  auto r1 = tseytin(*atomize(*expr::parse("a")), t1);
  CHECK(r1.hidden.empty());
  REQUIRE(r1.clauses.size() == 1);
  CHECK(r1.clauses[0] == Clause{Literal{0, false, false}});
}

namespace {

bool clause_true(const Clause& c, Assignment orig, uint32_t hidden_bits, int k_orig) {
  for (const Literal& l : c) {
    bool v;
    if (l.atom < k_orig) {
      auto p = assignment_pair(orig, l.atom);
      v = l.pseudo ? p.neg : p.pos;
    } else {
      v = hidden_bits >> (l.atom - k_orig) & 1;
    }
    if (l.comp) v = !v;
    if (v) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("tseytin linear size and equisatisfiability on random formulas") {
  std::mt19937_64 rng(99);
  for (int iter = 0; iter < 150; ++iter) {
    int k = 1 + int(rng() % 4);
    auto f = random_logical(rng, 3, k);
    AtomTable table;
    for (int i = 0; i < k; ++i) table.add("a" + std::to_string(i));
    auto res = tseytin(*f, table);
    int ops = operator_count(*f);
    CHECK(res.clauses.size() <= std::size_t(4 * ops + 2));
    int h = res.atoms.size() - k;
    REQUIRE(h <= 12);

    auto sat = truth_oracle(*f, table);
    for (Assignment a = 0; a < (1u << (2 * k)); ++a) {
      bool formula_sat = std::binary_search(sat.begin(), sat.end(), a);
      bool cnf_sat = false;
      for (uint32_t hb = 0; hb < (1u << h) && !cnf_sat; ++hb) {
        bool all = true;
        for (const auto& c : res.clauses)
          if (!clause_true(c, a, hb, k)) {
            all = false;
            break;
          }
        cnf_sat = all;
      }
      REQUIRE(formula_sat == cnf_sat);
    }
  }
}

TEST_CASE("hidden atoms are bi-implied with their definitions") {
  AtomTable t = AtomTable::sorted_from({"a", "b", "c"});
  auto res = tseytin(*atomize(*expr::parse("a | (b & (a | c))")), t);
  // Under any total assignment extended with hidden = value(def), every
  // clause holds; flipping any hidden bit breaks some clause.
  for (Assignment a = 0; a < (1u << 6); ++a) {
    uint32_t hb = 0;
    for (std::size_t i = 0; i < res.hidden.size(); ++i) {
      PairVal v = eval_pair(*res.hidden[i].def, [&](const expr::Formula& leaf) {
        return assignment_pair(a, t.require(leaf.name));
      });
      if (v.pos) hb |= 1u << i;
    }
    int k = t.size();
    bool all = true;
    for (const auto& c : res.clauses) {
      // unit clauses of the top spine may fail; only definition clauses
      // (those mentioning a hidden atom in non-unit form) must hold
      bool mentions_hidden = false;
      for (const auto& l : c) mentions_hidden |= l.atom >= k;
      if (c.size() > 1 && mentions_hidden && !clause_true(c, a, hb, k)) all = false;
    }
    CHECK(all);
  }
}

TEST_CASE("normalizer agrees with the evidence-bit truth oracle") {
  std::mt19937_64 rng(4242);
  for (int iter = 0; iter < 300; ++iter) {
    int k = 1 + int(rng() % 3);
    auto a = random_logical(rng, 3, k);
    auto b = random_logical(rng, 3, k);
    AtomTable table;
    for (int i = 0; i < k; ++i) table.add("a" + std::to_string(i));
    Relation fast = decide_relation(blake_normal_form(dnf_of(*a, table)),
                                    blake_normal_form(dnf_of(*b, table)));
    Relation slow = oracle_relation(*a, *b, table);
    CAPTURE(expr::print(*a));
    CAPTURE(expr::print(*b));
    REQUIRE(fast == slow);
  }
}

TEST_CASE("blake closure is confluent under shuffled application orders") {
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 60; ++iter) {
    int k = 1 + int(rng() % 3);
    auto f = random_logical(rng, 3, k);
    AtomTable table;
    for (int i = 0; i < k; ++i) table.add("a" + std::to_string(i));
    Dnf base = blake_normal_form(dnf_of(*f, table));
    for (uint64_t seed = 1; seed <= 5; ++seed)
      REQUIRE(blake_normal_form(dnf_of(*f, table), seed) == base);
  }
}

TEST_CASE("normal forms are antichains without complementary pairs") {
  std::mt19937_64 rng(31337);
  for (int iter = 0; iter < 100; ++iter) {
    int k = 1 + int(rng() % 3);
    auto f = random_logical(rng, 3, k);
    AtomTable table;
    for (int i = 0; i < k; ++i) table.add("a" + std::to_string(i));
    Dnf d = blake_normal_form(dnf_of(*f, table));
    for (std::size_t i = 0; i < d.conjuncts.size(); ++i) {
      CHECK(!conjunct_tautological(d.conjuncts[i]));
      for (std::size_t j = 0; j < d.conjuncts.size(); ++j)
        if (i != j) CHECK((d.conjuncts[i] & ~d.conjuncts[j]) != 0);
    }
    // canonical: sorted by the literal-sequence order
    for (std::size_t i = 1; i < d.conjuncts.size(); ++i)
      CHECK(conjunct_less(d.conjuncts[i - 1], d.conjuncts[i]));
  }
}

TEST_CASE("atomize maps opaque leaves to named atoms") {
  auto f = atomize(*expr::parse("@A & (hasPart*.color <= @Red)"));
  auto names = atom_names(*f);
  REQUIRE(names.size() == 2);
  CHECK(names[0] == "A");
  CHECK(names[1] == "hasPart*.color <= @Red");
  CHECK_THROWS_AS(atomize(*expr::parse("a.b")), UnsupportedOperator);
}
