#include <random>

#include "ca/relalg.hpp"
#include "doctest.h"

using namespace ca;
using namespace ca::relalg;

namespace {

RelationMatrix from_bits(int n, unsigned bits) {
  RelationMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (bits >> (i * n + j) & 1) m.set(i, j);
  return m;
}

RelationMatrix random_relation(int n, double density, std::mt19937_64& rng) {
  RelationMatrix m(n);
  std::bernoulli_distribution bit(density);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (bit(rng)) m.set(i, j);
  return m;
}

// Independent quantifier-semantics oracle for the property table.
bool quant_property(const RelationMatrix& r, Property p) {
  const int n = r.n;
  auto functional = [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (r.get(x, y) && r.get(x, z) && y != z) return false;
    return true;
  };
  auto left_total = [&] {
    for (int x = 0; x < n; ++x) {
      bool some = false;
      for (int y = 0; y < n; ++y) some |= r.get(x, y);
      if (!some) return false;
    }
    return true;
  };
  auto injective = [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (r.get(x, z) && r.get(y, z) && x != y) return false;
    return true;
  };
  auto surjective = [&] {
    for (int y = 0; y < n; ++y) {
      bool some = false;
      for (int x = 0; x < n; ++x) some |= r.get(x, y);
      if (!some) return false;
    }
    return true;
  };
  auto transitive = [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (r.get(x, y) && r.get(y, z) && !r.get(x, z)) return false;
    return true;
  };
  auto reflexive = [&] {
    for (int x = 0; x < n; ++x)
      if (!r.get(x, x)) return false;
    return true;
  };
  auto irreflexive = [&] {
    for (int x = 0; x < n; ++x)
      if (r.get(x, x)) return false;
    return true;
  };
  auto symmetric = [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (r.get(x, y) != r.get(y, x)) return false;
    return true;
  };
  auto antisymmetric = [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y && r.get(x, y) && r.get(y, x)) return false;
    return true;
  };
  auto total = [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (!r.get(x, y) && !r.get(y, x)) return false;
    return true;
  };
  auto connex = [&] {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y && !r.get(x, y) && !r.get(y, x)) return false;
    return true;
  };
  switch (p) {
    case Property::Functional: return functional();
    case Property::LeftTotal: return left_total();
    case Property::Function: return functional() && left_total();
    case Property::Injective: return injective();
    case Property::Surjective: return surjective();
    case Property::Bijection:
      return functional() && left_total() && injective() && surjective();
    case Property::Transitive: return transitive();
    case Property::Reflexive: return reflexive();
    case Property::Coreflexive: {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (x != y && r.get(x, y)) return false;
      return true;
    }
    case Property::Irreflexive: return irreflexive();
    case Property::Symmetric: return symmetric();
    case Property::Antisymmetric: return antisymmetric();
    case Property::Asymmetric: {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (r.get(x, y) && r.get(y, x)) return false;
      return true;
    }
    case Property::Total: return total();
    case Property::Connex: return connex();
    case Property::Idempotent: {
      for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z) {
          bool via = false;
          for (int y = 0; y < n; ++y) via |= r.get(x, y) && r.get(y, z);
          if (via != r.get(x, z)) return false;
        }
      return true;
    }
    case Property::Preorder: return transitive() && reflexive();
    case Property::Equivalence: return symmetric() && transitive() && reflexive();
    case Property::PartialOrder: return antisymmetric() && transitive() && reflexive();
    case Property::TotalOrder:
      return total() && antisymmetric() && transitive() && reflexive();
    case Property::StrictPartialOrder: return transitive() && irreflexive();
    case Property::StrictTotalOrder: return connex() && transitive() && irreflexive();
    case Property::Dense: {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (x == y || !r.get(x, y)) continue;
          bool mid = false;
          for (int z = 0; z < n; ++z)
            mid |= z != x && z != y && r.get(x, z) && r.get(z, y);
          if (!mid) return false;
        }
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("boolean operations are pointwise") {
  std::mt19937_64 rng(1);
  auto r = random_relation(3, 0.5, rng);
  auto s = random_relation(3, 0.5, rng);
  CHECK(complement(complement(r)) == r);
  CHECK(union_of(r, complement(r)) == RelationMatrix::full(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(inter_of(r, s).get(i, j) == (r.get(i, j) && s.get(i, j)));
  CHECK_THROWS_AS(union_of(r, RelationMatrix(4)), UniverseMismatch);
}

TEST_CASE("composition, inverse, identity") {
  std::mt19937_64 rng(2);
  auto r = random_relation(4, 0.4, rng);
  auto s = random_relation(4, 0.4, rng);
  CHECK(compose(r, RelationMatrix::identity(4)) == r);
  CHECK(compose(RelationMatrix::identity(4), r) == r);
  CHECK(inverse(compose(r, s)) == compose(inverse(s), inverse(r)));
  CHECK(inverse(inverse(r)) == r);

  RelationMatrix chain(3);  // a->b, b->c
  chain.set(0, 1);
  RelationMatrix second(3);
  second.set(1, 2);
  auto prod = compose(chain, second);
  RelationMatrix expect(3);
  expect.set(0, 2);
  CHECK(prod == expect);
}

TEST_CASE("group laws exhaustively on the 2-object universe") {
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned b = 0; b < 16; ++b) {
      auto r = from_bits(2, a), s = from_bits(2, b);
      CHECK(inverse(compose(r, s)) == compose(inverse(s), inverse(r)));
      CHECK(inverse(inverse(r)) == r);
    }
}

TEST_CASE("residual basics") {
  std::mt19937_64 rng(3);
  auto r = random_relation(3, 0.5, rng);
  CHECK(leq(RelationMatrix::identity(3), right_residual(r, r)));
  CHECK(right_residual(RelationMatrix(3), r) == RelationMatrix::full(3));
}

TEST_CASE("residuation adjunction exhaustively at n=2") {
  for (unsigned a = 0; a < 16; ++a)
    for (unsigned x = 0; x < 16; ++x)
      for (unsigned b = 0; b < 16; ++b) {
        auto R = from_bits(2, a), X = from_bits(2, x), S = from_bits(2, b);
        bool lhs = leq(compose(R, X), S);
        bool mid = leq(X, right_residual(R, S));
        bool rhs = leq(R, left_residual(S, X));
        CHECK(lhs == mid);
        CHECK(lhs == rhs);
      }
}

TEST_CASE("triangle operators satisfy the three-way law") {
  std::mt19937_64 rng(4);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 2 + int(rng() % 4);
    auto x = random_relation(n, 0.4, rng);
    auto y = random_relation(n, 0.4, rng);
    auto z = random_relation(n, 0.4, rng);
    CHECK(triangle_right(x, y) == complement(right_residual(x, complement(y))));
    bool a = is_zero(inter_of(triangle_right(x, z), y));
    bool b = is_zero(inter_of(compose(x, y), z));
    bool c = is_zero(inter_of(triangle_left(z, y), x));
    CHECK(a == b);
    CHECK(b == c);
  }
}

TEST_CASE("property examples") {
  CHECK(check_property(RelationMatrix::identity(3), Property::Equivalence));
  CHECK(check_property(RelationMatrix::identity(3), Property::PartialOrder));

  RelationMatrix r(3);  // single pair (a,b)
  r.set(0, 1);
  CHECK(check_property(r, Property::Functional));
  CHECK(!check_property(r, Property::LeftTotal));
  CHECK(check_property(r, Property::Asymmetric));

  auto full = RelationMatrix::full(3);
  CHECK(check_property(full, Property::Total));
  CHECK(check_property(full, Property::Preorder));
  CHECK(!check_property(full, Property::Antisymmetric));
}

TEST_CASE("property names round-trip") {
  for (int i = 0; i < kPropertyCount; ++i) {
    auto p = Property(i);
    CHECK(property_from_name(property_name(p)) == p);
  }
  CHECK_THROWS_AS(property_from_name("sideways"), UnknownProperty);
}

TEST_CASE("algebraic properties match the quantifier oracle on samples") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 60; ++iter) {
    int n = 2 + int(rng() % 3);
    auto r = random_relation(n, 0.3 + 0.4 * (iter % 3), rng);
    for (int i = 0; i < kPropertyCount; ++i) {
      auto p = Property(i);
      CAPTURE(property_name(p));
      REQUIRE(check_property(r, p) == quant_property(r, p));
    }
  }
}

TEST_CASE("kleene star") {
  CHECK(kleene_star(RelationMatrix(3)) == RelationMatrix::identity(3));
  RelationMatrix chain(3);
  chain.set(0, 1);
  chain.set(1, 2);
  auto st = kleene_star(chain);
  CHECK(st.get(0, 2));
  for (int i = 0; i < 3; ++i) CHECK(st.get(i, i));
  CHECK(kleene_star(st) == st);
}

TEST_CASE("biclique examples") {
  auto full = RelationMatrix::full(3);
  auto bs = max_bicliques(full);
  REQUIRE(bs.size() == 1);
  CHECK(bs[0].dom == Bits::ones(3));
  CHECK(bs[0].rng == Bits::ones(3));

  // R = {(a,x),(a,y),(b,y)} over {a,b,x,y} as indices {0,1,2,3}
  RelationMatrix r(4);
  r.set(0, 2);
  r.set(0, 3);
  r.set(1, 3);
  auto got = max_bicliques(r);
  REQUIRE(got.size() == 2);
  CHECK(got[0].dom.indices() == std::vector<std::size_t>{0, 1});
  CHECK(got[0].rng.indices() == std::vector<std::size_t>{3});
  CHECK(got[1].dom.indices() == std::vector<std::size_t>{0});
  CHECK(got[1].rng.indices() == std::vector<std::size_t>{2, 3});

  CHECK(max_bicliques(RelationMatrix(3)).empty());
}

TEST_CASE("biclique cover is exact and maximal on random relations") {
  std::mt19937_64 rng(6);
  for (int iter = 0; iter < 80; ++iter) {
    int n = 2 + int(rng() % 4);
    auto r = random_relation(n, 0.4, rng);
    auto bs = max_bicliques(r);
    CHECK(bs == reference::max_bicliques(r));
    RelationMatrix cover(n);
    for (const auto& b : bs) {
      CHECK(b.dom.any());
      CHECK(b.rng.any());
      b.dom.for_each([&](std::size_t i) {
        CHECK(b.rng.subset_of(r.rows[i]));
        cover.rows[i] |= b.rng;
      });
      // maximality: no extra row or column fits
      for (int i = 0; i < n; ++i)
        if (!b.dom.get(i)) CHECK(!b.rng.subset_of(r.rows[i]));
    }
    CHECK(cover == r);
  }
}

TEST_CASE("single-biclique relations satisfy the domain law") {
  // R = D x E: R.R^-1 = D x D and R.R^-1.R = R
  Bits d = Bits(5), e = Bits(5);
  d.set(1);
  d.set(3);
  e.set(0);
  e.set(2);
  e.set(4);
  RelationMatrix r(5);
  d.for_each([&](std::size_t i) { e.for_each([&](std::size_t j) { r.set(int(i), int(j)); }); });
  auto rr = compose(r, inverse(r));
  RelationMatrix dd(5);
  d.for_each([&](std::size_t i) { d.for_each([&](std::size_t j) { dd.set(int(i), int(j)); }); });
  CHECK(rr == dd);
  CHECK(compose(rr, r) == r);
}

TEST_CASE("parallel kernels match the serial references") {
  std::mt19937_64 rng(7);
  for (int n : {5, 80, 130}) {
    auto r = random_relation(n, 0.1, rng);
    auto s = random_relation(n, 0.1, rng);
    CHECK(compose(r, s) == reference::compose(r, s));
    CHECK(kleene_star(r) == reference::kleene_star(r));
    CHECK(right_residual(r, s) == reference::right_residual(r, s));
    CHECK(left_residual(s, r) == reference::left_residual(s, r));
  }
}
