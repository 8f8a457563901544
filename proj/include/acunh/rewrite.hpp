#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acunh/problem.hpp"
#include "acunh/term.hpp"

namespace acunh {

/// The three decompositions of ACUNh used here.
enum class DecompositionId {
  r1_mod_ac,   // R1 = {x+x->0, x+0->x, x+(y+x)->y, h(x+y)->h(x)+h(y), h(0)->0} modulo AC
  r2_mod_ach,  // R1 without the distributor, modulo AC plus h(x+y)=h(x)+h(y)
  rh_mod_ac,   // the distributor alone, modulo AC
};

/// Fixpoint of h(x+y) -> h(x)+h(y) modulo AC: sums are flattened, h never sits
/// above +, and zeros and duplicates are kept.
Term normalize_rh(const Term& t);

/// Rh-normal summands (zeros included, duplicates kept), sorted.
std::vector<Monomial> rh_summands(const Term& t);

/// True iff t has no R2 redex modulo ACh at any position.
bool is_irreducible_r2_ach(const Term& t);

/// Asymmetric unifier check, including the restrictions and disequalities of p.
bool is_asymmetric_unifier(const Problem& p, const Substitution& s);

/// Polynomial interpretation h = 2X, 0 = 1, + = X+Y; atoms count 2 and a free
/// application counts 2 plus its arguments.
std::int64_t termination_weight(const Term& t);

struct MatchResult {
  enum class Status { found, absent, bound_exceeded };
  Status status = Status::absent;
  Substitution match;
  std::size_t candidates = 0;

  bool found() const { return status == Status::found; }
};

/// Matching modulo ACh (associativity, commutativity, h distributing over +) by
/// enumerating assignments of subject summands to pattern summands. Exponential;
/// `bound` caps the number of candidate assignments examined.
MatchResult ach_match_bruteforce(const Term& pattern, const Term& subject,
                                 std::size_t bound = 1'000'000);

struct RewriteRule {
  Term lhs;
  Term rhs;
};

/// x+x -> 0, x+0 -> x, x+(y+x) -> y, h(0) -> 0.
const std::vector<RewriteRule>& r2_rules();

/// Every one-step R2,ACh rewrite of t found by the brute-force matcher, one per
/// (position, rule) pair that matches.
std::vector<Term> r2_ach_successors(const Term& t, std::size_t bound = 1'000'000);

/// ACh equality: equal multisets of Rh-normal summands.
bool equal_mod_ach(const Term& s, const Term& t);

}  // namespace acunh
