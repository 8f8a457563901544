#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acunh/enumeration.hpp"
#include "acunh/problem.hpp"

namespace acunh {

/// Theory of the top symbol: 1 for ACUNh (0, +, h), 2 for free symbols, 0 for
/// atoms, which belong to both.
int top_theory(const Term& t);
/// True when every non-atom symbol of t belongs to the theory of its top.
bool is_pure(const Term& t);

/// Abstracts alien subterms and splits mixed equations until every equation
/// is pure. Fresh variables are w1, w2, ... (avoiding names in use).
Problem purify(const Problem& p);

/// Theory of a pure equation; equations between atoms go to theory 1.
int equation_theory(const Equation& e);

/// A class of variables may be identified with one free constant, which then
/// represents it; such classes have no index and no place in the ordering.
struct Branch {
  std::map<std::string, std::string> representative;  // variable -> class representative
  std::set<std::string> constants;                     // representatives that are constants
  std::vector<std::string> ordering;                   // variable representatives, least first
  std::map<std::string, int> index;                    // variable representative -> 1 or 2

  bool less(const std::string& x, const std::string& y) const;
};

std::string to_string(const Branch& b);

/// Calls f on every (partition, ordering, index) triple over the variables of
/// p, with every way of identifying classes with distinct constants of p,
/// until f returns false. With `prune`, orderings that differ only inside a
/// run of equal-index representatives are visited once (they induce the same
/// restrictions).
void enumerate_branches(const Problem& p, const std::function<bool(const Branch&)>& f, bool prune = false);
std::size_t count_branches(std::size_t variables, std::size_t constants = 0);

struct PureSystem {
  int theory = 1;
  std::vector<Equation> equations;
  std::set<std::string> variables;  // representatives of this index
  std::set<std::string> foreign;    // other-index representatives
  std::set<std::string> constants;  // original constants plus foreign
  std::vector<Restriction> lcr;     // c notin x for own x < other-index c
};

/// Identifies variables with their representatives and splits by theory.
/// Nothing when identification makes an asymmetric right side reducible: then
/// every instance is reducible and the branch is rejected.
std::optional<std::pair<PureSystem, PureSystem>> split_system(const Problem& p, const Branch& b);

/// ACUNh problem of the theory-1 system with restrictions, injectivity
/// disequalities between its variables and theory-preservation disequalities
/// against the constantified index-2 variables.
Problem build_constrained_acunh(const PureSystem& sys, const Branch& b);

/// Most general syntactic unifier of the theory-2 system, provided it respects
/// the restrictions and is injective and theory preserving.
std::optional<Substitution> syntactic_unify_lcr(const PureSystem& sys);

struct CombinationStats {
  std::size_t branches = 0;        // branches visited
  std::size_t syntactic_ok = 0;    // branches whose free side succeeded
  std::size_t acunh_calls = 0;     // ACUNh problems decided or enumerated (not memoized)
  std::size_t emitted = 0;
  std::size_t unverified = 0;      // assembled unifiers failing verification
  bool bound_exceeded = false;
};

struct CombinedDecision {
  bool sat = false;
  std::optional<Branch> branch;
  CombinationStats stats;
};

/// Decides a problem with free symbols. Pure ACUNh problems go straight to the
/// ACUNh decision procedure. Restrictions and disequalities are supported
/// only for pure problems.
CombinedDecision decide_combined(const Problem& p);

/// Streams verified unifiers of p assembled from every branch, using ACUNh
/// unifiers of length at most opt.depth. The sink returns false to stop.
CombinationStats solve_combined(const Problem& p, const EnumerationOptions& opt,
                                const std::function<bool(const Substitution&)>& sink);

}  // namespace acunh
