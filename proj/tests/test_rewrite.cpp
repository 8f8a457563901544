#include <gtest/gtest.h>

#include <random>

#include "acunh/rewrite.hpp"
#include "oracle_rewriter.hpp"

using namespace acunh;

namespace {

Term T(std::string_view s) { return parse_term(s); }

}  // namespace

TEST(Rh, DistributesAndKeepsDuplicates) {
  EXPECT_EQ(normalize_rh(T("h(x + y)")), normalize_rh(T("h(y) + h(x)")));
  EXPECT_EQ(rh_summands(T("h(x + x)")).size(), 2u);
  EXPECT_TRUE(equal_mod_ach(T("h(x + y) + z"), T("z + h(y) + h(x)")));
  EXPECT_FALSE(equal_mod_ach(T("x + x"), T("0")));
}

TEST(Irreducible, R2RedexesModuloACh) {
  EXPECT_TRUE(is_irreducible_r2_ach(T("x + h(y) + a")));
  EXPECT_TRUE(is_irreducible_r2_ach(T("h(x + y)")));  // distributor is not an R2 rule
  EXPECT_TRUE(is_irreducible_r2_ach(T("0")));
  EXPECT_FALSE(is_irreducible_r2_ach(T("x + x")));
  EXPECT_FALSE(is_irreducible_r2_ach(T("x + 0")));
  EXPECT_FALSE(is_irreducible_r2_ach(T("h(0)")));
  EXPECT_FALSE(is_irreducible_r2_ach(T("h(x + y) + h(y)")));
  EXPECT_FALSE(is_irreducible_r2_ach(T("h(x + x)")));
  Signature sig;
  sig.free_arity = {{"f", 1}};
  EXPECT_FALSE(is_irreducible_r2_ach(parse_term("f(x + x) + y", sig)));
  EXPECT_TRUE(is_irreducible_r2_ach(parse_term("f(x) + f(y)", sig)));
}

// Irreducibility agrees with the absence of brute-force matches of R2 rules.
TEST(Irreducible, AgreesWithBruteForceMatching) {
  std::mt19937 rng(3);
  std::vector<Term> atoms{Term::var("x"), Term::var("y"), Term::constant("a")};
  for (int i = 0; i < 300; ++i) {
    Term t = oracle::random_term(rng, atoms, 3);
    EXPECT_EQ(is_irreducible_r2_ach(t), r2_ach_successors(t).empty()) << to_string(t);
  }
}

TEST(Termination, R2StepsDecreaseWeight) {
  std::mt19937 rng(5);
  std::vector<Term> atoms{Term::var("x"), Term::var("y"), Term::constant("a")};
  for (int i = 0; i < 200; ++i) {
    Term t = oracle::random_term(rng, atoms, 3);
    for (const auto& s : r2_ach_successors(t))
      EXPECT_LT(termination_weight(s), termination_weight(t)) << to_string(t) << " -> " << to_string(s);
  }
}

TEST(Match, FindsAchMatches) {
  auto m = ach_match_bruteforce(T("x + (y + x)"), T("h(a + b) + c + h(a)"));
  ASSERT_TRUE(m.found());
  EXPECT_TRUE(equal_mod_ach(m.match.image("y"), T("h(b) + c")) ||
              equal_mod_ach(m.match.image("y"), T("c + h(b)")));
  EXPECT_FALSE(ach_match_bruteforce(T("x + x"), T("a + b")).found());
  auto big = ach_match_bruteforce(T("x + x"), T("a + b + c + d + e + h(a) + h(b)"), 10);
  EXPECT_EQ(big.status, MatchResult::Status::bound_exceeded);
}

TEST(Unifier, ChecksIrreducibilityOfInstantiatedRhs) {
  auto p = parse_problem("constants: b\nh(x) + b =^ x + y\n");
  EXPECT_TRUE(is_asymmetric_unifier(p, parse_substitution("{x -> b, y -> h(b)}")));
  EXPECT_TRUE(is_asymmetric_unifier(p, parse_substitution("{x -> b + h(b), y -> h^2(b)}")));
  EXPECT_FALSE(is_asymmetric_unifier(p, parse_substitution("{x -> h(v), y -> h(v) + h^2(v) + b}")));
  // y -> x + h(x) + b makes x + y reducible.
  EXPECT_FALSE(is_asymmetric_unifier(p, parse_substitution("{y -> x + h(x) + b}")));
  EXPECT_FALSE(is_asymmetric_unifier(p, parse_substitution("{x -> 0, y -> b}")));
}

TEST(Unifier, RestrictionsAndDisequalities) {
  auto p = parse_problem("constants: a\nx =^ y\nrestrict: a notin x\nneq: x != a\n");
  EXPECT_TRUE(is_asymmetric_unifier(p, parse_substitution("{x -> z, y -> z}")));
  EXPECT_FALSE(is_asymmetric_unifier(p, parse_substitution("{x -> a, y -> a}")));
  EXPECT_FALSE(is_asymmetric_unifier(p, parse_substitution("{x -> a + z, y -> a + z}")));
}
