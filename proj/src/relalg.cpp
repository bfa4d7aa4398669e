#include "ca/relalg.hpp"

#include <algorithm>

namespace ca::relalg {

namespace {
// Below this size the OpenMP pragmas stay serial; desk-scale inputs do not
// pay the fork/join cost.
constexpr int kParallelCutoff = 64;
}  // namespace

RelationMatrix RelationMatrix::full(int n) {
  RelationMatrix m(n);
  for (auto& row : m.rows) row = Bits::ones(n);
  return m;
}

RelationMatrix RelationMatrix::identity(int n) {
  RelationMatrix m(n);
  for (int i = 0; i < n; ++i) m.rows[i].set(i);
  return m;
}

void check_same_universe(const RelationMatrix& a, const RelationMatrix& b) {
  if (a.n != b.n) throw UniverseMismatch("relations over different universes");
}

RelationMatrix union_of(const RelationMatrix& r, const RelationMatrix& s) {
  check_same_universe(r, s);
  RelationMatrix out = r;
  for (int i = 0; i < r.n; ++i) out.rows[i] |= s.rows[i];
  return out;
}

RelationMatrix inter_of(const RelationMatrix& r, const RelationMatrix& s) {
  check_same_universe(r, s);
  RelationMatrix out = r;
  for (int i = 0; i < r.n; ++i) out.rows[i] &= s.rows[i];
  return out;
}

RelationMatrix complement(const RelationMatrix& r) {
  RelationMatrix out(r.n);
  for (int i = 0; i < r.n; ++i) out.rows[i] = r.rows[i].complement();
  return out;
}

bool leq(const RelationMatrix& r, const RelationMatrix& s) {
  check_same_universe(r, s);
  for (int i = 0; i < r.n; ++i)
    if (!r.rows[i].subset_of(s.rows[i])) return false;
  return true;
}

bool is_zero(const RelationMatrix& r) {
  for (const auto& row : r.rows)
    if (row.any()) return false;
  return true;
}

RelationMatrix compose(const RelationMatrix& r, const RelationMatrix& s) {
  check_same_universe(r, s);
  RelationMatrix out(r.n);
#pragma omp parallel for schedule(static) if (r.n >= kParallelCutoff)
  for (int i = 0; i < r.n; ++i) {
    Bits acc(r.n);
    r.rows[i].for_each([&](std::size_t j) { acc |= s.rows[j]; });
    out.rows[i] = std::move(acc);
  }
  return out;
}

RelationMatrix inverse(const RelationMatrix& r) {
  RelationMatrix out(r.n);
  for (int i = 0; i < r.n; ++i)
    r.rows[i].for_each([&](std::size_t j) { out.rows[j].set(i); });
  return out;
}

RelationMatrix right_residual(const RelationMatrix& r, const RelationMatrix& s) {
  check_same_universe(r, s);
  RelationMatrix rt = inverse(r);  // rt.rows[x] = {z : zRx}
  RelationMatrix out(r.n);
#pragma omp parallel for schedule(static) if (r.n >= kParallelCutoff)
  for (int x = 0; x < r.n; ++x) {
    Bits acc = Bits::ones(r.n);
    rt.rows[x].for_each([&](std::size_t z) { acc &= s.rows[z]; });
    out.rows[x] = std::move(acc);
  }
  return out;
}

RelationMatrix left_residual(const RelationMatrix& s, const RelationMatrix& r) {
  check_same_universe(s, r);
  RelationMatrix out(s.n);
#pragma omp parallel for schedule(static) if (s.n >= kParallelCutoff)
  for (int y = 0; y < s.n; ++y) {
    for (int x = 0; x < s.n; ++x)
      if (r.rows[x].subset_of(s.rows[y])) out.rows[y].set(x);
  }
  return out;
}

RelationMatrix triangle_right(const RelationMatrix& x, const RelationMatrix& z) {
  return complement(right_residual(x, complement(z)));
}

RelationMatrix triangle_left(const RelationMatrix& z, const RelationMatrix& y) {
  return complement(left_residual(complement(z), y));
}

RelationMatrix kleene_star(const RelationMatrix& r) {
  RelationMatrix m = union_of(r, RelationMatrix::identity(r.n));
  // Warshall closure; for fixed k all rows i != k only read row k.
  for (int k = 0; k < m.n; ++k) {
#pragma omp parallel for schedule(static) if (m.n >= kParallelCutoff)
    for (int i = 0; i < m.n; ++i) {
      if (i != k && m.rows[i].get(k)) m.rows[i] |= m.rows[k];
    }
  }
  return m;
}

// ------------------------------------------------------------ properties

const char* property_name(Property p) {
  switch (p) {
    case Property::Functional: return "functional";
    case Property::LeftTotal: return "left-total";
    case Property::Function: return "function";
    case Property::Injective: return "injective";
    case Property::Surjective: return "surjective";
    case Property::Bijection: return "bijection";
    case Property::Transitive: return "transitive";
    case Property::Reflexive: return "reflexive";
    case Property::Coreflexive: return "coreflexive";
    case Property::Irreflexive: return "irreflexive";
    case Property::Symmetric: return "symmetric";
    case Property::Antisymmetric: return "antisymmetric";
    case Property::Asymmetric: return "asymmetric";
    case Property::Total: return "total";
    case Property::Connex: return "connex";
    case Property::Idempotent: return "idempotent";
    case Property::Preorder: return "preorder";
    case Property::Equivalence: return "equivalence";
    case Property::PartialOrder: return "partial order";
    case Property::TotalOrder: return "total order";
    case Property::StrictPartialOrder: return "strict partial order";
    case Property::StrictTotalOrder: return "strict total order";
    case Property::Dense: return "dense";
  }
  return "?";
}

Property property_from_name(const std::string& name) {
  for (int i = 0; i < kPropertyCount; ++i) {
    Property p = Property(i);
    if (name == property_name(p)) return p;
  }
  throw UnknownProperty("unknown property '" + name + "'");
}

bool check_property(const RelationMatrix& r, Property p) {
  const int n = r.n;
  auto ident = [&] { return RelationMatrix::identity(n); };
  switch (p) {
    case Property::Functional: return leq(compose(inverse(r), r), ident());
    case Property::LeftTotal: return leq(ident(), compose(r, inverse(r)));
    case Property::Function:
      return check_property(r, Property::Functional) && check_property(r, Property::LeftTotal);
    case Property::Injective: return leq(compose(r, inverse(r)), ident());
    case Property::Surjective: return leq(ident(), compose(inverse(r), r));
    case Property::Bijection:
      return compose(inverse(r), r) == ident() && compose(r, inverse(r)) == ident();
    case Property::Transitive: return leq(compose(r, r), r);
    case Property::Reflexive: return leq(ident(), r);
    case Property::Coreflexive: return leq(r, ident());
    case Property::Irreflexive: return is_zero(inter_of(r, ident()));
    case Property::Symmetric: return inverse(r) == r;
    case Property::Antisymmetric: return leq(inter_of(r, inverse(r)), ident());
    case Property::Asymmetric: return is_zero(inter_of(r, inverse(r)));
    case Property::Total: return union_of(r, inverse(r)) == RelationMatrix::full(n);
    case Property::Connex:
      return union_of(union_of(ident(), r), inverse(r)) == RelationMatrix::full(n);
    case Property::Idempotent: return compose(r, r) == r;
    case Property::Preorder:
      return check_property(r, Property::Transitive) && check_property(r, Property::Reflexive);
    case Property::Equivalence:
      return check_property(r, Property::Symmetric) && check_property(r, Property::Preorder);
    case Property::PartialOrder:
      return check_property(r, Property::Antisymmetric) && check_property(r, Property::Preorder);
    case Property::TotalOrder:
      return check_property(r, Property::Total) && check_property(r, Property::PartialOrder);
    case Property::StrictPartialOrder:
      return check_property(r, Property::Transitive) && check_property(r, Property::Irreflexive);
    case Property::StrictTotalOrder:
      return check_property(r, Property::Connex) &&
             check_property(r, Property::StrictPartialOrder);
    case Property::Dense: {
      RelationMatrix s = inter_of(r, complement(RelationMatrix::identity(n)));
      return leq(s, compose(s, s));
    }
  }
  throw UnknownProperty("unknown property id");
}

// ------------------------------------------------------------- bicliques

namespace {

bool lex_less(const Bits& a, const Bits& b) {
  auto ia = a.indices(), ib = b.indices();
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

// The attribute closure of an object set: columns common to all rows.
Bits common_columns(const RelationMatrix& r, const Bits& objs) {
  Bits cols = Bits::ones(r.n);
  objs.for_each([&](std::size_t i) { cols &= r.rows[i]; });
  return cols;
}

Bits objects_with(const RelationMatrix& r, const Bits& cols) {
  Bits objs(r.n);
  for (int i = 0; i < r.n; ++i)
    if (cols.subset_of(r.rows[i])) objs.set(i);
  return objs;
}

bool equal_below(const Bits& a, const Bits& b, std::size_t j) {
  for (std::size_t i = 0; i < j; ++i)
    if (a.get(i) != b.get(i)) return false;
  return true;
}

// Close-by-one over attribute sets; records concepts with nonempty sides.
void cbo(const RelationMatrix& r, const Bits& extent, const Bits& intent, int y,
         std::vector<Biclique>& out) {
  if (extent.any() && intent.any()) out.push_back({extent, intent});
  for (int j = y; j < r.n; ++j) {
    if (intent.get(j)) continue;
    Bits cols = intent;
    cols.set(j);
    Bits objs = extent;
    {
      Bits having(r.n);
      for (int i = 0; i < r.n; ++i)
        if (r.rows[i].get(j)) having.set(i);
      objs &= having;
    }
    if (objs.none()) continue;
    Bits closed = common_columns(r, objs);
    if (!equal_below(closed, intent, j)) continue;  // canonicity
    cbo(r, objs, closed, j + 1, out);
  }
}

}  // namespace

void sort_bicliques(std::vector<Biclique>& bs) {
  std::sort(bs.begin(), bs.end(), [](const Biclique& a, const Biclique& b) {
    std::size_t ca = a.dom.count(), cb = b.dom.count();
    if (ca != cb) return ca > cb;
    if (a.dom != b.dom) return lex_less(a.dom, b.dom);
    return lex_less(a.rng, b.rng);
  });
}

std::vector<Biclique> max_bicliques(const RelationMatrix& r) {
  std::vector<Biclique> out;
  Bits all = Bits::ones(r.n);
  Bits top_intent = common_columns(r, all);
  cbo(r, all, top_intent, 0, out);
  // The top call starts from (all objects, common columns); objects with an
  // empty row never join a biclique, which CbO already guarantees.
  sort_bicliques(out);
  return out;
}

// ------------------------------------------------------------- reference

namespace reference {

RelationMatrix compose(const RelationMatrix& r, const RelationMatrix& s) {
  check_same_universe(r, s);
  RelationMatrix out(r.n);
  for (int i = 0; i < r.n; ++i)
    for (int k = 0; k < r.n; ++k)
      for (int j = 0; j < r.n; ++j)
        if (r.get(i, j) && s.get(j, k)) {
          out.set(i, k);
          break;
        }
  return out;
}

RelationMatrix right_residual(const RelationMatrix& r, const RelationMatrix& s) {
  check_same_universe(r, s);
  RelationMatrix out(r.n);
  for (int x = 0; x < r.n; ++x)
    for (int y = 0; y < r.n; ++y) {
      bool ok = true;
      for (int z = 0; z < r.n; ++z)
        if (r.get(z, x) && !s.get(z, y)) {
          ok = false;
          break;
        }
      if (ok) out.set(x, y);
    }
  return out;
}

RelationMatrix left_residual(const RelationMatrix& s, const RelationMatrix& r) {
  check_same_universe(s, r);
  RelationMatrix out(s.n);
  for (int y = 0; y < s.n; ++y)
    for (int x = 0; x < s.n; ++x) {
      bool ok = true;
      for (int z = 0; z < s.n; ++z)
        if (r.get(x, z) && !s.get(y, z)) {
          ok = false;
          break;
        }
      if (ok) out.set(y, x);
    }
  return out;
}

RelationMatrix kleene_star(const RelationMatrix& r) {
  RelationMatrix x = RelationMatrix::identity(r.n);
  for (;;) {
    RelationMatrix next = union_of(RelationMatrix::identity(r.n), reference::compose(r, x));
    if (next == x) return x;
    x = next;
  }
}

std::vector<Biclique> max_bicliques(const RelationMatrix& r) {
  // Closure of every nonempty row subset; exponential, small n only.
  if (r.n > 20) throw UniverseMismatch("reference biclique enumeration limited to n <= 20");
  std::vector<Biclique> out;
  for (uint32_t m = 1; m < (1u << r.n); ++m) {
    Bits objs(r.n);
    for (int i = 0; i < r.n; ++i)
      if (m >> i & 1) objs.set(i);
    Bits cols = common_columns(r, objs);
    if (cols.none()) continue;
    Bits dom = objects_with(r, cols);
    Biclique b{dom, cols};
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  }
  sort_bicliques(out);
  return out;
}

}  // namespace reference

}  // namespace ca::relalg
