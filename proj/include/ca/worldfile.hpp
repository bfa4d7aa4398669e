#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ca/caisl.hpp"
#include "ca/ontology.hpp"

namespace ca::cli {

struct LoadError : std::runtime_error {
  int line;
  LoadError(const std::string& msg, int l) : std::runtime_error(msg), line(l) {}
};

// Loads a line-oriented world file and classifies the ontology.
// Directives: object, class, relation, isa, intent, evidence, edge, # comment.
onto::Ontology load_world(const std::string& path);

struct CaislFile {
  caisl::Universe universe;
  std::vector<caisl::Statement> statements;
  std::optional<caisl::Statement> goal;
};

// Directives: attr, cond, stmt, goal, # comment.
CaislFile load_caisl(const std::string& path);

}  // namespace ca::cli
