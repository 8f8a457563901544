#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acunh/problem.hpp"
#include "acunh/std_equation.hpp"
#include "acunh/track_dfa.hpp"

namespace acunh {

/// A problem flattened into standard equations over atoms.
struct StandardForm {
  std::vector<StdEquation> equations;  // disequalities included, as var_neq/const_neq
  std::vector<std::string> fresh;      // variables introduced, in creation order
  std::vector<std::string> variables;  // original variables first, then fresh ones
};

/// Flattens every equation bottom-up with fresh variables F1, F2, ... (skipping
/// names already in use). The left side is flattened with symmetric kinds into
/// one operand; an asymmetric right side is flattened with asymmetric kinds so
/// that its instantiated summands stay nonzero and pairwise disjoint.
/// Restrictions are not included; they become zero components during decision.
StandardForm standardize(const Problem& p);

/// Zero/nonzero status of each (variable, constant) component.
struct ComponentPlan {
  std::vector<std::string> constants;
  std::map<std::pair<std::string, std::string>, bool> zero;  // (variable, constant) -> is zero
};

/// Product automata larger than max_product_states (0: unbounded) abort the
/// decision with BoundExceeded.
struct DecisionOptions {
  std::size_t max_product_states = 0;
};

struct DecisionStats {
  std::size_t plans = 0;         // component plans examined
  std::size_t systems = 0;       // per-constant automata systems built
  std::size_t cache_hits = 0;
  std::size_t product_states = 0;
};

struct Decision {
  bool sat = false;
  /// Ground witness over the problem's constants (and the fresh constant for
  /// decide_general), binding every variable of the problem.
  Substitution witness;
  std::optional<ComponentPlan> plan;  // the plan that succeeded
  std::string fresh_constant;         // decide_general only
  DecisionStats stats;
};

/// Algorithm for at most one constant: intersect the equation automata and
/// search for an accepted string. Throws std::invalid_argument for two or more
/// constants or for free function symbols.
Decision decide_single_constant(const Problem& p, const DecisionOptions& opt = {});

/// Splits every variable into one component per constant, enumerates the
/// consistent zero/nonzero plans and solves one automata system per constant.
Decision decide_multi_constant(const Problem& p, const DecisionOptions& opt = {});

/// Adds a fresh constant and decides ground solvability of the extension, which
/// coincides with general solvability.
Decision decide_general(const Problem& p, const DecisionOptions& opt = {});

/// The problem with `constant` added to its declared constants.
Problem with_constant(const Problem& p, const std::string& constant);

/// A name for a fresh constant: "c", or c1, c2, ... when taken.
std::string fresh_constant_name(const Problem& p);

/// Replaces monomials h^d(c) of a ground witness by h^(d mod D)(v_(d div D)) for
/// every stride D up to the largest degree of c plus one, and keeps the
/// abstractions that are asymmetric unifiers of p (largest stride first). When
/// none survives, the witness itself is returned.
std::vector<Substitution> generalize_witness(const Problem& p, const Substitution& s,
                                             const std::string& c);

}  // namespace acunh
