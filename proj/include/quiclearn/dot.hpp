#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "quiclearn/mealy.hpp"

namespace quiclearn {

// Parse failure with 1-based source position. Also raised for semantic
// problems (missing initial marker, partial transition table, duplicate
// edges), pointing at the offending construct where possible.
class DotParseError : public std::runtime_error {
 public:
  DotParseError(int line, int column, const std::string& what)
      : std::runtime_error("dot:" + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Graphviz digraph with one edge per transition, labelled "input/output".
// A synthetic point node `__start` marks the initial state. Node declarations
// come first in state order, so parsing the result reproduces the exact
// machine (states, order, names), not just an equivalent one.
std::string to_dot(const MealyMachine& m);

// Inverse of to_dot, tolerant of whitespace, comments and attribute noise
// produced by other tools. State order = declaration/first-appearance order;
// input order = first appearance in edge labels.
MealyMachine from_dot(std::string_view text);

}  // namespace quiclearn
