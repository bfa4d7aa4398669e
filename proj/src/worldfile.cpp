#include "ca/worldfile.hpp"

#include <fstream>
#include <sstream>

#include "ca/expr.hpp"

namespace ca::cli {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open '" + path + "'", 0);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

bool comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t') continue;
    return c == '#';
  }
  return true;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw LoadError(path + ":" + std::to_string(line) + ": " + msg, line);
}

}  // namespace

onto::Ontology load_world(const std::string& path) {
  onto::Ontology ont;
  auto lines = read_lines(path);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int ln = int(li) + 1;
    const std::string& line = lines[li];
    if (comment_or_blank(line)) continue;
    auto w = words(line);
    try {
      if (w[0] == "object" && w.size() == 2) {
        ont.add_object(w[1]);
      } else if (w[0] == "class" && w.size() == 2) {
        ont.declare_class(w[1]);
      } else if (w[0] == "relation" && w.size() == 2) {
        ont.declare_relation(w[1]);
      } else if (w[0] == "isa" && w.size() == 3) {
        ont.add_isa(w[1], w[2]);
      } else if (w[0] == "intent" && w.size() >= 3) {
        std::size_t at = line.find(w[1], line.find("intent") + 6);
        ont.set_intent(w[1], expr::parse(line.substr(at + w[1].size())));
      } else if (w[0] == "evidence" && w.size() == 4 && (w[1] == "+" || w[1] == "-")) {
        ont.assert_evidence(w[2], w[3], w[1] == "-");
      } else if (w[0] == "edge" && w.size() == 4) {
        ont.add_edge(w[1], w[2], w[3]);
      } else {
        fail(path, ln, "unrecognized directive: " + line);
      }
    } catch (const LoadError&) {
      throw;
    } catch (const std::exception& e) {
      fail(path, ln, e.what());
    }
  }
  ont.classify();
  return ont;
}

CaislFile load_caisl(const std::string& path) {
  CaislFile f;
  auto lines = read_lines(path);
  // Declarations first so statement lines can refer to any name.
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int ln = int(li) + 1;
    if (comment_or_blank(lines[li])) continue;
    auto w = words(lines[li]);
    if (w[0] == "attr" && w.size() == 2)
      f.universe.add_attr(w[1]);
    else if (w[0] == "cond" && w.size() == 2)
      f.universe.add_cond(w[1]);
    else if (w[0] == "stmt" || w[0] == "goal")
      continue;
    else
      fail(path, ln, "unrecognized directive: " + lines[li]);
  }
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int ln = int(li) + 1;
    if (comment_or_blank(lines[li])) continue;
    auto w = words(lines[li]);
    if (w[0] != "stmt" && w[0] != "goal") continue;
    std::string rest = lines[li].substr(lines[li].find(w[0]) + w[0].size());
    try {
      caisl::Statement s = caisl::parse_statement(rest, f.universe);
      if (w[0] == "stmt") {
        f.statements.push_back(s);
      } else {
        if (f.goal) fail(path, ln, "duplicate goal line");
        f.goal = s;
      }
    } catch (const LoadError&) {
      throw;
    } catch (const std::exception& e) {
      fail(path, ln, e.what());
    }
  }
  return f;
}

}  // namespace ca::cli
