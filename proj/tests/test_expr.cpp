#include <random>

#include "ca/expr.hpp"
#include "doctest.h"

using namespace ca::expr;

TEST_CASE("precedence from the operator table") {
  auto f = parse("@A | @B & @C");
  CHECK(to_sexpr(*f) == "Union(@A, Inter(@B, @C))");
  CHECK(to_sexpr(*parse("@A")) == "@A");
  CHECK(to_sexpr(*parse("@X{hasPart*.color <= (@Red | @Green)}")) ==
        "Selector(@X, SubsetAtom(Compose(Star(hasPart), color), Union(@Red, @Green)))");
}

TEST_CASE("right associativity and parens") {
  CHECK(to_sexpr(*parse("a | b | c")) == "Union(a, Union(b, c))");
  CHECK(to_sexpr(*parse("(a | b) | c")) == "Union(Union(a, b), c)");
  CHECK(to_sexpr(*parse("a.b.c")) == "Compose(a, Compose(b, c))");
  CHECK(to_sexpr(*parse("~a & b")) == "Inter(BoolComp(a), b)");
  CHECK(to_sexpr(*parse("-~a")) == "PseudoComp(BoolComp(a))");
  CHECK(to_sexpr(*parse("hasPart'*")) == "Star(Inverse(hasPart))");
  CHECK(to_sexpr(*parse("hasPart*'")) == "Inverse(Star(hasPart))");
}

TEST_CASE("print minimizes parentheses") {
  CHECK(print(union_of(class_ref("A"), inter_of(class_ref("B"), class_ref("C")))) ==
        "@A | @B & @C");
  CHECK(print(inter_of(union_of(class_ref("A"), class_ref("B")), class_ref("C"))) ==
        "(@A | @B) & @C");
  CHECK(print(star(inverse(name_ref("hasPart")))) == "hasPart'*");
  CHECK(print(*parse("@X{hasPart*.color <= (@Red | @Green)}")) ==
        "@X{hasPart*.color <= @Red | @Green}");
}

TEST_CASE("comments and keywords") {
  CHECK(to_sexpr(*parse("U | 0 # trailing comment")) == "Union(U, 0)");
  CHECK(to_sexpr(*parse("I . I")) == "Compose(I, I)");
}

TEST_CASE("errors carry byte positions") {
  CHECK_THROWS_AS(parse("@A |"), ParseError);
  CHECK_THROWS_AS(parse("a $ b"), LexError);
  CHECK_THROWS_AS(parse("@A*"), SortError);   // star needs a relation
  CHECK_THROWS_AS(parse("-(a.b)"), SortError);  // pseudo-complement of a relation
  try {
    parse("@A | %");
  } catch (const Error& e) {
    CHECK(e.pos == 5);
  }
  try {
    parse("@A |");
  } catch (const Error& e) {
    CHECK(e.pos == 4);
  }
}

TEST_CASE("sorts are inferred across occurrences") {
  auto f = parse("p | q");  // both default to class atoms
  auto sorts = infer_sorts(*f);
  CHECK(sorts.at("p") == Sort::Class);
  auto g = parse("r* | r");  // star forces relation for both occurrences
  CHECK(infer_sorts(*g).at("r") == Sort::Relation);
  CHECK_THROWS_AS(parse("r* & (r <= @C)' | ~r{x}"), Error);
}

namespace {

// Random sort-valid ASTs for the round-trip property.
FormulaPtr random_formula(std::mt19937_64& rng, int depth, Sort want) {
  auto pick = [&](int n) { return int(rng() % n); };
  if (depth == 0) {
    if (want == Sort::Relation) return name_ref("r" + std::to_string(pick(3)));
    switch (pick(3)) {
      case 0: return class_ref("C" + std::to_string(pick(3)));
      case 1: return name_ref("p" + std::to_string(pick(3)));
      default: return pick(2) ? univ() : empty();
    }
  }
  if (want == Sort::Relation) {
    switch (pick(6)) {
      case 0: return union_of(random_formula(rng, depth - 1, want),
                              random_formula(rng, depth - 1, want));
      case 1: return inter_of(random_formula(rng, depth - 1, want),
                              random_formula(rng, depth - 1, want));
      case 2: return compose(random_formula(rng, depth - 1, want),
                             random_formula(rng, depth - 1, want));
      case 3: return bool_comp(random_formula(rng, depth - 1, want));
      case 4: return inverse(random_formula(rng, depth - 1, want));
      default: return star(random_formula(rng, depth - 1, want));
    }
  }
  switch (pick(7)) {
    case 0: return union_of(random_formula(rng, depth - 1, want),
                            random_formula(rng, depth - 1, want));
    case 1: return inter_of(random_formula(rng, depth - 1, want),
                            random_formula(rng, depth - 1, want));
    case 2: return bool_comp(random_formula(rng, depth - 1, want));
    case 3: return pseudo_comp(random_formula(rng, depth - 1, want));
    case 4: return selector(random_formula(rng, 0, Sort::Class),
                            random_formula(rng, depth - 1, Sort::Class));
    case 5: return subset_atom(random_formula(rng, depth - 1, Sort::Relation),
                               random_formula(rng, depth - 1, Sort::Class));
    default: return class_ref("C" + std::to_string(pick(3)));
  }
}

}  // namespace

TEST_CASE("round trip: parse(print(f)) == f on 1000 random ASTs") {
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 1000; ++i) {
    auto f = random_formula(rng, 1 + int(rng() % 6), Sort::Class);
    auto text = print(*f);
    CAPTURE(text);
    auto g = parse(text);
    REQUIRE(equals(*f, *g));
    CHECK(print(*g) == text);  // printing is a fixpoint
  }
}

TEST_CASE("parse is deterministic") {
  auto a = parse("@A{r*.s <= (@B | -@C)} & ~p");
  auto b = parse("@A{r*.s <= (@B | -@C)} & ~p");
  CHECK(equals(*a, *b));
  CHECK(to_sexpr(*a) == to_sexpr(*b));
}
