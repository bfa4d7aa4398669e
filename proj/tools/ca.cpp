// Deterministic command-line front end for the class-algebra library.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "ca/caisl.hpp"
#include "ca/expr.hpp"
#include "ca/logic4.hpp"
#include "ca/ontology.hpp"
#include "ca/relalg.hpp"
#include "ca/rough.hpp"
#include "ca/worldfile.hpp"

namespace {

using namespace ca;

struct Options {
  std::vector<std::string> args;  // positional
  bool upper = false;
  bool left = false;
  int budget = 4;
  std::size_t bound = 10000;
  bool nonconstraint_full = false;
};

int usage() {
  std::cerr <<
      "usage: ca <command> ...\n"
      "  parse <expr>                         print the expression tree\n"
      "  normalize <expr>                     Blake normal forms of S and ~S\n"
      "  entail <expr> <expr>                 equivalent|implies|implied_by|unrelated\n"
      "  world <file> eval <expr>             objects satisfying a class formula\n"
      "  world <file> select <selector>       selector query @Base{...}\n"
      "  world <file> describe <obj>...       minimal formulas for an object set\n"
      "  world <file> fuzzy <expr>            frequency interval lo/n hi/n\n"
      "  world <file> partition <class>       true/false/both/neither object sets\n"
      "  rel <file> prop <R>                  all 23 relation properties\n"
      "  rel <file> bicliques <R>             maximal biclique decomposition\n"
      "  rel <file> star <R>                  reflexive-transitive closure\n"
      "  rel <file> compose <R> <S>           Boolean matrix product\n"
      "  rel <file> residual <R> <S>          right residual R\\S (--left: R/S)\n"
      "  caisl <file> [goal]                  prove the goal from the statements\n"
      "flags: --upper --budget <k> --bound <n> --nonconstraint=full|empty --left\n";
  return 2;
}

Options parse_options(int argc, char** argv) {
  Options o;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--upper") {
      o.upper = true;
    } else if (a == "--left") {
      o.left = true;
    } else if (a == "--budget" && i + 1 < argc) {
      o.budget = std::stoi(argv[++i]);
    } else if (a == "--bound" && i + 1 < argc) {
      o.bound = std::stoul(argv[++i]);
    } else if (a.rfind("--nonconstraint=", 0) == 0) {
      std::string v = a.substr(16);
      if (v != "full" && v != "empty") throw std::invalid_argument("--nonconstraint=full|empty");
      o.nonconstraint_full = v == "full";
    } else if (a.rfind("--", 0) == 0) {
      throw std::invalid_argument("unknown flag " + a);
    } else {
      o.args.push_back(a);
    }
  }
  return o;
}

onto::ExtentMode mode_of(const Options& o) {
  return o.upper ? onto::ExtentMode::Upper : onto::ExtentMode::Lower;
}

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ' ';
    out += names[i];
  }
  return out;
}

std::string brace_list(const Bits& set, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  set.for_each([&](std::size_t i) {
    if (!first) out += ',';
    out += names[i];
    first = false;
  });
  return out + "}";
}

void print_matrix(const relalg::RelationMatrix& m, const std::vector<std::string>& names) {
  std::string head = ".";
  for (const auto& n : names) head += " " + n;
  std::printf("%s\n", head.c_str());
  for (int i = 0; i < m.n; ++i) {
    std::string row = names[i];
    for (int j = 0; j < m.n; ++j) row += m.get(i, j) ? " 1" : " 0";
    std::printf("%s\n", row.c_str());
  }
}

const relalg::RelationMatrix& named_relation(const onto::Ontology& ont, const std::string& name) {
  auto it = ont.world().relations.find(name);
  if (it == ont.world().relations.end())
    throw onto::UnknownReference("unknown relation '" + name + "'");
  return it->second;
}

int cmd_parse(const Options& o) {
  auto f = expr::parse(o.args.at(1));
  std::printf("%s\n", expr::to_sexpr(*f).c_str());
  return 0;
}

int cmd_normalize(const Options& o) {
  auto f = logic4::atomize(*expr::parse(o.args.at(1)));
  auto table = logic4::AtomTable::sorted_from(logic4::atom_names(*f));
  auto nf = logic4::blake_normal_form(logic4::dnf_of(*f, table));
  auto nfc = logic4::blake_normal_form(logic4::dnf_of(*expr::bool_comp(f), table));
  std::printf("S: %s\n", logic4::print_dnf(nf, table).c_str());
  std::printf("~S: %s\n", logic4::print_dnf(nfc, table).c_str());
  return 0;
}

int cmd_entail(const Options& o) {
  auto a = expr::parse(o.args.at(1));
  auto b = expr::parse(o.args.at(2));
  std::printf("%s\n", logic4::relation_name(logic4::decide_relation(*a, *b)));
  return 0;
}

int cmd_world(const Options& o) {
  onto::Ontology ont = cli::load_world(o.args.at(1));
  const std::string& sub = o.args.at(2);
  if (sub == "eval") {
    Bits set = ont.eval_intent(*expr::parse(o.args.at(3)), mode_of(o));
    std::printf("%s\n", joined(ont.object_names(set)).c_str());
  } else if (sub == "select") {
    Bits set = ont.select(*expr::parse(o.args.at(3)), mode_of(o));
    std::printf("%s\n", joined(ont.object_names(set)).c_str());
  } else if (sub == "describe") {
    Bits target(ont.world().size());
    for (std::size_t i = 3; i < o.args.size(); ++i)
      target.set(ont.world().object(o.args[i]));
    for (const auto& f : ont.describe_extent(target, o.budget, mode_of(o)))
      std::printf("%s\n", expr::print(*f).c_str());
  } else if (sub == "fuzzy") {
    auto f = expr::parse(o.args.at(3));
    long long n = (long long)ont.world().size();
    if (n == 0) throw rough::EmptyUniverse("empty universe");
    long long lo = (long long)ont.eval_intent(*f, onto::ExtentMode::Lower).count();
    long long hi = (long long)ont.eval_intent(*f, onto::ExtentMode::Upper).count();
    std::printf("%lld/%lld %lld/%lld\n", lo, n, hi, n);
  } else if (sub == "partition") {
    int atom = ont.world().atoms.require(o.args.at(3));
    auto p = rough::status_partition(ont.world(), atom);
    const auto& names = ont.world().objects;
    auto line = [&](const char* label, const Bits& set) {
      std::vector<std::string> sorted;
      set.for_each([&](std::size_t i) { sorted.push_back(names[i]); });
      std::sort(sorted.begin(), sorted.end());
      std::string text = joined(sorted);
      std::printf("%s:%s%s\n", label, text.empty() ? "" : " ", text.c_str());
    };
    line("true", p.true_set);
    line("false", p.false_set);
    line("both", p.both_set);
    line("neither", p.neither_set);
  } else {
    return usage();
  }
  return 0;
}

int cmd_rel(const Options& o) {
  onto::Ontology ont = cli::load_world(o.args.at(1));
  const std::string& sub = o.args.at(2);
  const auto& names = ont.world().objects;
  if (sub == "prop") {
    const auto& r = named_relation(ont, o.args.at(3));
    for (int i = 0; i < relalg::kPropertyCount; ++i) {
      auto p = relalg::Property(i);
      std::printf("%s: %s\n", relalg::property_name(p),
                  relalg::check_property(r, p) ? "true" : "false");
    }
  } else if (sub == "bicliques") {
    const auto& r = named_relation(ont, o.args.at(3));
    for (const auto& b : relalg::max_bicliques(r))
      std::printf("%s x %s\n", brace_list(b.dom, names).c_str(),
                  brace_list(b.rng, names).c_str());
  } else if (sub == "star") {
    print_matrix(relalg::kleene_star(named_relation(ont, o.args.at(3))), names);
  } else if (sub == "compose") {
    print_matrix(
        relalg::compose(named_relation(ont, o.args.at(3)), named_relation(ont, o.args.at(4))),
        names);
  } else if (sub == "residual") {
    const auto& r = named_relation(ont, o.args.at(3));
    const auto& s = named_relation(ont, o.args.at(4));
    print_matrix(o.left ? relalg::left_residual(r, s) : relalg::right_residual(r, s), names);
  } else {
    return usage();
  }
  return 0;
}

int cmd_caisl(const Options& o) {
  cli::CaislFile f = cli::load_caisl(o.args.at(1));
  caisl::Config cfg;
  cfg.bound = o.bound;
  cfg.nonconstraint_full = o.nonconstraint_full;
  caisl::Statement goal;
  if (o.args.size() > 2)
    goal = caisl::parse_statement(o.args.at(2), f.universe);
  else if (f.goal)
    goal = *f.goal;
  else
    throw std::invalid_argument("no goal line in file and no goal argument");
  auto res = caisl::prove(f.statements, goal, f.universe, cfg);
  if (!res.proved) {
    std::printf("NOT PROVED\n");
    return 0;
  }
  std::printf("PROVED\n");
  for (std::size_t i = 0; i < res.derivation.steps.size(); ++i) {
    const auto& st = res.derivation.steps[i];
    std::string prem;
    for (std::size_t j = 0; j < st.premises.size(); ++j)
      prem += (j ? "," : "") + std::to_string(st.premises[j]);
    std::printf("%zu. %s%s%s%s: %s\n", i + 1, caisl::rule_name(st.rule), prem.empty() ? "" : "(",
                prem.c_str(), prem.empty() ? "" : ")",
                caisl::statement_text(st.produced, f.universe).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    Options o = parse_options(argc, argv);
    if (o.args.empty()) return usage();
    const std::string& cmd = o.args[0];
    if (cmd == "parse") return cmd_parse(o);
    if (cmd == "normalize") return cmd_normalize(o);
    if (cmd == "entail") return cmd_entail(o);
    if (cmd == "world") return cmd_world(o);
    if (cmd == "rel") return cmd_rel(o);
    if (cmd == "caisl") return cmd_caisl(o);
    return usage();
  } catch (const ca::expr::Error& e) {
    std::cerr << "error at byte " << e.pos << ": " << e.what() << "\n";
    return 2;
  } catch (const ca::caisl::BoundExceeded& e) {
    std::cerr << "error: " << e.what() << " (partial closure: " << e.partial_size << ")\n";
    return 3;
  } catch (const std::out_of_range&) {
    return usage();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
