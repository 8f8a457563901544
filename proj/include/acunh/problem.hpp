#pragma once

#include <set>
#include <string>
#include <vector>

#include "acunh/term.hpp"

namespace acunh {

enum class Mode { symmetric, asymmetric };

struct Equation {
  Term lhs;
  Term rhs;
  Mode mode = Mode::asymmetric;
};

/// Linear constant restriction: `constant` must not occur in the image of `variable`.
struct Restriction {
  std::string constant;
  std::string variable;
  friend auto operator<=>(const Restriction&, const Restriction&) = default;
};

/// variable != rhs, where rhs is a variable or a constant atom.
struct Disequality {
  std::string variable;
  Atom rhs;
};

struct Problem {
  std::vector<Equation> equations;
  std::vector<Restriction> restrictions;
  std::vector<Disequality> disequalities;
  Signature signature;

  /// Variables of equations, restrictions and disequalities.
  std::set<std::string> variables() const;
  /// Declared constants plus every constant occurring in the problem.
  std::set<std::string> constants() const;
  bool has_free_symbols() const;
  bool empty() const { return equations.empty() && restrictions.empty() && disequalities.empty(); }
};

/// Problem file format, one item per line, `#` starts a comment:
///
///     constants: a, b
///     variables: x, y
///     free: f/1, g/2
///     h(x) + b =^ x + y        # asymmetric
///     x = h(y)                 # symmetric
///     restrict: a notin x
///     neq: x != y
///
Problem parse_problem(std::string_view text);

std::string to_string(const Equation& e);
std::string to_string(const Problem& p);

/// A name not in `used`, built from `stem` (the stem itself, then stem1, stem2, ...).
std::string fresh_name(const std::string& stem, const std::set<std::string>& used);

}  // namespace acunh
