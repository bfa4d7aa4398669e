#include "ca/expr.hpp"

#include <cassert>
#include <vector>

namespace ca::expr {

namespace {

FormulaPtr node(Kind k, std::string name, FormulaPtr l, FormulaPtr r, std::size_t pos = 0) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->name = std::move(name);
  f->left = std::move(l);
  f->right = std::move(r);
  f->pos = pos;
  return f;
}

}  // namespace

FormulaPtr class_ref(std::string name) { return node(Kind::ClassRef, std::move(name), nullptr, nullptr); }
FormulaPtr name_ref(std::string name) { return node(Kind::NameRef, std::move(name), nullptr, nullptr); }
FormulaPtr univ() { return node(Kind::Univ, "", nullptr, nullptr); }
FormulaPtr empty() { return node(Kind::Empty, "", nullptr, nullptr); }
FormulaPtr ident() { return node(Kind::Ident, "", nullptr, nullptr); }
FormulaPtr union_of(FormulaPtr l, FormulaPtr r) { return node(Kind::Union, "", std::move(l), std::move(r)); }
FormulaPtr inter_of(FormulaPtr l, FormulaPtr r) { return node(Kind::Inter, "", std::move(l), std::move(r)); }
FormulaPtr compose(FormulaPtr l, FormulaPtr r) { return node(Kind::Compose, "", std::move(l), std::move(r)); }
FormulaPtr bool_comp(FormulaPtr x) { return node(Kind::BoolComp, "", std::move(x), nullptr); }
FormulaPtr pseudo_comp(FormulaPtr x) { return node(Kind::PseudoComp, "", std::move(x), nullptr); }
FormulaPtr inverse(FormulaPtr x) { return node(Kind::Inverse, "", std::move(x), nullptr); }
FormulaPtr star(FormulaPtr x) { return node(Kind::Star, "", std::move(x), nullptr); }
FormulaPtr selector(FormulaPtr base, FormulaPtr sel) {
  return node(Kind::Selector, "", std::move(base), std::move(sel));
}
FormulaPtr subset_atom(FormulaPtr path, FormulaPtr cls) {
  return node(Kind::SubsetAtom, "", std::move(path), std::move(cls));
}

FormulaPtr conditional(FormulaPtr x, FormulaPtr y) {
  return union_of(bool_comp(x), inter_of(x, std::move(y)));
}

bool equals(const Formula& a, const Formula& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  if (!a.left != !b.left || !a.right != !b.right) return false;
  if (a.left && !equals(*a.left, *b.left)) return false;
  if (a.right && !equals(*a.right, *b.right)) return false;
  return true;
}

// ---------------------------------------------------------------- lexer

namespace {

enum class Tok : uint8_t {
  Name, At, Univ, Zero, Ident,
  Subset, Or, And, Dot, Tilde, Minus, Prime, Star,
  LParen, RParen, LBrace, RBrace, End,
};

struct Token {
  Tok t;
  std::string text;
  std::size_t pos;
};

bool name_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}
bool name_cont(unsigned char c) { return name_start(c) || (c >= '0' && c <= '9') || c == '_'; }

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    std::size_t p = i;
    switch (c) {
      case '@': out.push_back({Tok::At, "@", p}); ++i; continue;
      case '|': out.push_back({Tok::Or, "|", p}); ++i; continue;
      case '&': out.push_back({Tok::And, "&", p}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", p}); ++i; continue;
      case '~': out.push_back({Tok::Tilde, "~", p}); ++i; continue;
      case '-': out.push_back({Tok::Minus, "-", p}); ++i; continue;
      case '\'': out.push_back({Tok::Prime, "'", p}); ++i; continue;
      case '*': out.push_back({Tok::Star, "*", p}); ++i; continue;
      case '(': out.push_back({Tok::LParen, "(", p}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", p}); ++i; continue;
      case '{': out.push_back({Tok::LBrace, "{", p}); ++i; continue;
      case '}': out.push_back({Tok::RBrace, "}", p}); ++i; continue;
      case '<':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          out.push_back({Tok::Subset, "<=", p});
          i += 2;
          continue;
        }
        throw LexError("illegal character '<'", p);
      case '0':
        if (i + 1 < s.size() && name_cont(s[i + 1]))
          throw LexError("illegal name starting with digit", p);
        out.push_back({Tok::Zero, "0", p});
        ++i;
        continue;
      default: break;
    }
    if (name_start(c)) {
      std::size_t j = i + 1;
      while (j < s.size() && name_cont(s[j])) ++j;
      std::string name = s.substr(i, j - i);
      if (name == "U")
        out.push_back({Tok::Univ, name, p});
      else if (name == "I")
        out.push_back({Tok::Ident, name, p});
      else
        out.push_back({Tok::Name, std::move(name), p});
      i = j;
      continue;
    }
    throw LexError(std::string("illegal character '") + char(c) + "'", p);
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

// ---------------------------------------------------------------- parser
//
// expr    := sub
// sub     := or ('<=' or)?
// or      := and ('|' or)?
// and     := comp ('&' and)?
// comp    := unary ('.' comp)?
// unary   := '~' unary | '-' unary | postfix
// postfix := primary (''' | '*')*
// primary := '@'Name | Name | 'U' | '0' | 'I' | '(' expr ')' | primary '{' expr '}'

struct Parser {
  const std::vector<Token>& toks;
  std::size_t i = 0;

  const Token& peek() const { return toks[i]; }
  Token next() { return toks[i++]; }
  bool eat(Tok t) {
    if (toks[i].t == t) {
      ++i;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string got = t.t == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError("expected " + what + ", got " + got, t.pos);
  }

  FormulaPtr parse_expr() { return parse_sub(); }

  FormulaPtr parse_sub() {
    std::size_t p = peek().pos;
    FormulaPtr l = parse_or();
    if (eat(Tok::Subset)) return node(Kind::SubsetAtom, "", l, parse_or(), p);
    return l;
  }

  FormulaPtr parse_or() {
    std::size_t p = peek().pos;
    FormulaPtr l = parse_and();
    if (eat(Tok::Or)) return node(Kind::Union, "", l, parse_or(), p);
    return l;
  }

  FormulaPtr parse_and() {
    std::size_t p = peek().pos;
    FormulaPtr l = parse_comp();
    if (eat(Tok::And)) return node(Kind::Inter, "", l, parse_and(), p);
    return l;
  }

  FormulaPtr parse_comp() {
    std::size_t p = peek().pos;
    FormulaPtr l = parse_unary();
    if (eat(Tok::Dot)) return node(Kind::Compose, "", l, parse_comp(), p);
    return l;
  }

  FormulaPtr parse_unary() {
    std::size_t p = peek().pos;
    if (eat(Tok::Tilde)) return node(Kind::BoolComp, "", parse_unary(), nullptr, p);
    if (eat(Tok::Minus)) return node(Kind::PseudoComp, "", parse_unary(), nullptr, p);
    return parse_postfix();
  }

  FormulaPtr parse_postfix() {
    FormulaPtr f = parse_primary();
    for (;;) {
      std::size_t p = peek().pos;
      if (eat(Tok::Prime))
        f = node(Kind::Inverse, "", f, nullptr, p);
      else if (eat(Tok::Star))
        f = node(Kind::Star, "", f, nullptr, p);
      else
        break;
    }
    return f;
  }

  FormulaPtr parse_primary() {
    FormulaPtr f;
    std::size_t p = peek().pos;
    switch (peek().t) {
      case Tok::At: {
        next();
        if (peek().t != Tok::Name && peek().t != Tok::Univ && peek().t != Tok::Ident)
          fail("class name after '@'");
        f = node(Kind::ClassRef, next().text, nullptr, nullptr, p);
        break;
      }
      case Tok::Name: f = node(Kind::NameRef, next().text, nullptr, nullptr, p); break;
      case Tok::Univ: next(); f = node(Kind::Univ, "", nullptr, nullptr, p); break;
      case Tok::Zero: next(); f = node(Kind::Empty, "", nullptr, nullptr, p); break;
      case Tok::Ident: next(); f = node(Kind::Ident, "", nullptr, nullptr, p); break;
      case Tok::LParen: {
        next();
        f = parse_expr();
        if (!eat(Tok::RParen)) fail("')'");
        break;
      }
      default: fail("expression");
    }
    while (peek().t == Tok::LBrace) {
      std::size_t bp = next().pos;
      FormulaPtr sel = parse_expr();
      if (!eat(Tok::RBrace)) fail("'}'");
      f = node(Kind::Selector, "", f, sel, bp);
    }
    return f;
  }
};

// ------------------------------------------------------- sort inference

// Three-valued constraint: unknown names may still be either sort.
enum class SortC : uint8_t { Any, Class, Relation };

SortC meet(SortC a, SortC b, std::size_t pos) {
  if (a == SortC::Any) return b;
  if (b == SortC::Any) return a;
  if (a != b) throw SortError("name used with conflicting sorts", pos);
  return a;
}

struct SortCtx {
  std::unordered_map<std::string, SortC> names;
  bool changed = false;

  SortC constrain_name(const Formula& f, SortC req) {
    SortC& cur = names[f.name];
    SortC m = meet(cur, req, f.pos);
    if (m != cur) {
      cur = m;
      changed = true;
    }
    return cur;
  }

  // Returns the node sort under the current constraints and pushes `req`
  // down to bare names where the operator does not fix the sort itself.
  SortC visit(const Formula& f, SortC req) {
    switch (f.kind) {
      case Kind::NameRef: return constrain_name(f, req);
      case Kind::ClassRef:
        if (req == SortC::Relation) throw SortError("class reference in relation position", f.pos);
        return SortC::Class;
      case Kind::Ident:
        if (req == SortC::Class) throw SortError("identity relation in class position", f.pos);
        return SortC::Relation;
      case Kind::Univ:
      case Kind::Empty: return req;  // polymorphic constants
      case Kind::Union:
      case Kind::Inter: {
        SortC a = visit(*f.left, req);
        SortC b = visit(*f.right, meet(req, a, f.pos));
        SortC m = meet(a, b, f.pos);
        if (m != a) visit(*f.left, m);  // re-push when the right side decided it
        return m;
      }
      case Kind::BoolComp: return visit(*f.left, req);
      case Kind::PseudoComp:
        if (req == SortC::Relation)
          throw SortError("pseudo-complement applies to classes only", f.pos);
        visit(*f.left, SortC::Class);
        return SortC::Class;
      case Kind::Compose:
        if (req == SortC::Class) throw SortError("composition yields a relation", f.pos);
        visit(*f.left, SortC::Relation);
        visit(*f.right, SortC::Relation);
        return SortC::Relation;
      case Kind::Inverse:
      case Kind::Star:
        if (req == SortC::Class)
          throw SortError(f.kind == Kind::Star ? "'*' applies to relations only"
                                               : "''' applies to relations only",
                          f.pos);
        visit(*f.left, SortC::Relation);
        return SortC::Relation;
      case Kind::Selector:
        if (req == SortC::Relation) throw SortError("selector yields a class", f.pos);
        visit(*f.left, SortC::Class);
        visit(*f.right, SortC::Class);
        return SortC::Class;
      case Kind::SubsetAtom:
        if (req == SortC::Relation) throw SortError("subset atom yields a class", f.pos);
        visit(*f.left, SortC::Relation);
        visit(*f.right, SortC::Class);
        return SortC::Class;
    }
    return SortC::Any;  // unreachable
  }
};

}  // namespace

NameSorts infer_sorts(const Formula& f) {
  SortCtx ctx;
  // Iterate to a fixpoint: a later use of a name can decide an earlier one.
  do {
    ctx.changed = false;
    ctx.visit(f, SortC::Any);
  } while (ctx.changed);
  NameSorts out;
  for (auto& [name, c] : ctx.names)
    out[name] = c == SortC::Relation ? Sort::Relation : Sort::Class;
  return out;
}

Sort sort_of(const Formula& f, const NameSorts& sorts) {
  switch (f.kind) {
    case Kind::NameRef: {
      auto it = sorts.find(f.name);
      return it == sorts.end() ? Sort::Class : it->second;
    }
    case Kind::ClassRef:
    case Kind::PseudoComp:
    case Kind::Selector:
    case Kind::SubsetAtom: return Sort::Class;
    case Kind::Ident:
    case Kind::Compose:
    case Kind::Inverse:
    case Kind::Star: return Sort::Relation;
    case Kind::Univ:
    case Kind::Empty: return Sort::Class;  // polymorphic; class unless forced
    case Kind::Union:
    case Kind::Inter:
    case Kind::BoolComp: return sort_of(*f.left, sorts);
  }
  return Sort::Class;
}

FormulaPtr parse(const std::string& text) {
  auto toks = lex(text);
  Parser p{toks};
  FormulaPtr f = p.parse_expr();
  if (p.peek().t != Tok::End) p.fail("end of input");
  infer_sorts(*f);  // sort-check; result discarded here
  return f;
}

// --------------------------------------------------------------- printer

namespace {

// Precedence levels: <= 1, | 2, & 3, . 4, prefix 5, postfix 7, primary 9.
int level(const Formula& f) {
  switch (f.kind) {
    case Kind::SubsetAtom: return 1;
    case Kind::Union: return 2;
    case Kind::Inter: return 3;
    case Kind::Compose: return 4;
    case Kind::BoolComp:
    case Kind::PseudoComp: return 5;
    case Kind::Inverse: return 7;
    case Kind::Star: return 8;
    default: return 9;
  }
}

void print_rec(const Formula& f, int ctx, std::string& out) {
  int lv = level(f);
  bool paren = lv < ctx;
  if (paren) out += '(';
  switch (f.kind) {
    case Kind::ClassRef: out += '@'; out += f.name; break;
    case Kind::NameRef: out += f.name; break;
    case Kind::Univ: out += 'U'; break;
    case Kind::Empty: out += '0'; break;
    case Kind::Ident: out += 'I'; break;
    case Kind::SubsetAtom:
      print_rec(*f.left, 2, out);
      out += " <= ";
      print_rec(*f.right, 2, out);
      break;
    case Kind::Union:
      print_rec(*f.left, 3, out);
      out += " | ";
      print_rec(*f.right, 2, out);
      break;
    case Kind::Inter:
      print_rec(*f.left, 4, out);
      out += " & ";
      print_rec(*f.right, 3, out);
      break;
    case Kind::Compose:
      print_rec(*f.left, 5, out);
      out += '.';
      print_rec(*f.right, 4, out);
      break;
    case Kind::BoolComp:
      out += '~';
      print_rec(*f.left, 5, out);
      break;
    case Kind::PseudoComp:
      out += '-';
      print_rec(*f.left, 5, out);
      break;
    case Kind::Inverse:
      print_rec(*f.left, 7, out);
      out += '\'';
      break;
    case Kind::Star:
      print_rec(*f.left, 7, out);
      out += '*';
      break;
    case Kind::Selector:
      print_rec(*f.left, 9, out);
      out += '{';
      print_rec(*f.right, 1, out);
      out += '}';
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string print(const Formula& f) {
  std::string out;
  print_rec(f, 1, out);
  return out;
}

std::string to_sexpr(const Formula& f) {
  switch (f.kind) {
    case Kind::ClassRef: return "@" + f.name;
    case Kind::NameRef: return f.name;
    case Kind::Univ: return "U";
    case Kind::Empty: return "0";
    case Kind::Ident: return "I";
    case Kind::Union: return "Union(" + to_sexpr(*f.left) + ", " + to_sexpr(*f.right) + ")";
    case Kind::Inter: return "Inter(" + to_sexpr(*f.left) + ", " + to_sexpr(*f.right) + ")";
    case Kind::Compose: return "Compose(" + to_sexpr(*f.left) + ", " + to_sexpr(*f.right) + ")";
    case Kind::BoolComp: return "BoolComp(" + to_sexpr(*f.left) + ")";
    case Kind::PseudoComp: return "PseudoComp(" + to_sexpr(*f.left) + ")";
    case Kind::Inverse: return "Inverse(" + to_sexpr(*f.left) + ")";
    case Kind::Star: return "Star(" + to_sexpr(*f.left) + ")";
    case Kind::Selector: return "Selector(" + to_sexpr(*f.left) + ", " + to_sexpr(*f.right) + ")";
    case Kind::SubsetAtom:
      return "SubsetAtom(" + to_sexpr(*f.left) + ", " + to_sexpr(*f.right) + ")";
  }
  return "?";
}

}  // namespace ca::expr
