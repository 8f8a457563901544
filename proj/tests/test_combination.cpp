#include <gtest/gtest.h>

#include "acunh/combination.hpp"
#include "acunh/rewrite.hpp"
#include "mixed_suite.hpp"
#include "oracle_mixed.hpp"

using namespace acunh;

namespace {

Problem P(const std::string& text) { return parse_problem(text); }

std::vector<std::string> equations(const Problem& p) {
  std::vector<std::string> out;
  for (const auto& e : p.equations) out.push_back(to_string(e));
  return out;
}

std::vector<std::string> solve(const Problem& p, int depth, std::size_t limit = 50) {
  std::vector<std::string> out;
  EnumerationOptions opt;
  opt.depth = depth;
  opt.max_results = limit;
  solve_combined(p, opt, [&](const Substitution& s) {
    out.push_back(to_string(s));
    return true;
  });
  return out;
}

Branch branch(std::vector<std::string> order, std::map<std::string, int> index) {
  Branch b;
  for (const auto& v : order) b.representative[v] = v;
  b.ordering = std::move(order);
  b.index = std::move(index);
  return b;
}

bool oracle_sat(const Problem& p) { return oracle::MixedOracle(p, {"a", "b", "c"}).first_solution().has_value(); }

}  // namespace

TEST(Purify, AbstractsAliens) {
  EXPECT_EQ(equations(purify(P("free: f/1\nconstants: a, b\nh(f(a)) =^ z + b\n"))),
            (std::vector<std::string>{"h(w1) =^ z + b", "f(a) =^ w1"}));
  EXPECT_EQ(equations(purify(P("free: f/1\nf(x + y) =^ w\n"))),
            (std::vector<std::string>{"f(w1) =^ w", "x + y =^ w1"}));
  auto pure = P("constants: b\nh(x) + b =^ x + y\n");
  EXPECT_EQ(equations(purify(pure)), equations(pure));
}

TEST(Purify, SplitsMixedEquationsAndAvoidsNames) {
  auto q = purify(P("free: f/1\nvariables: w1\nf(w1) = h(w1)\n"));
  EXPECT_EQ(equations(q), (std::vector<std::string>{"f(w1) = w2", "w2 = h(w1)"}));
  for (const auto& e : q.equations) EXPECT_TRUE(is_pure(e.lhs) && is_pure(e.rhs));
}

TEST(Branches, Counting) {
  for (std::size_t n = 0; n <= 4; ++n) {
    Problem p;
    for (std::size_t i = 0; i < n; ++i) p.equations.push_back({Term::var("x" + std::to_string(i)), Term::zero()});
    std::size_t full = 0, pruned = 0;
    enumerate_branches(p, [&](const Branch&) { return ++full, true; });
    enumerate_branches(p, [&](const Branch&) { return ++pruned, true; }, true);
    EXPECT_EQ(full, count_branches(n)) << n;
    EXPECT_LE(pruned, full);
  }
  EXPECT_EQ(count_branches(0), 1u);
  EXPECT_EQ(count_branches(1), 2u);
  EXPECT_EQ(count_branches(2), 10u);
  // One variable, one constant: the two indices, or x identified with a.
  EXPECT_EQ(count_branches(1, 1), 3u);
  std::size_t seen = 0;
  enumerate_branches(P("constants: a, b\nx = y + a\n"), [&](const Branch&) { return ++seen, true; });
  EXPECT_EQ(seen, count_branches(2, 2));
}

TEST(Branches, TwoVariables) {
  std::size_t merged = 0, separate = 0;
  // No constants, so no class is identified with one.
  enumerate_branches(P("x = y\n"), [&](const Branch& b) {
    (b.ordering.size() == 1 ? merged : separate)++;
    EXPECT_EQ(b.index.size(), b.ordering.size());
    return true;
  });
  EXPECT_EQ(merged, 2u);
  EXPECT_EQ(separate, 8u);
}

TEST(Split, ConstantifiesOtherIndex) {
  auto p = P("free: f/1\nconstants: a\nv1 =^ x + y\nf(a) =^ v1\n");
  auto b = branch({"x", "v1", "y"}, {{"x", 1}, {"v1", 2}, {"y", 1}});
  auto [s1, s2] = *split_system(p, b);
  ASSERT_EQ(s1.equations.size(), 1u);
  ASSERT_EQ(s2.equations.size(), 1u);
  EXPECT_TRUE(s1.equations[0].lhs.atom().is_constant());
  EXPECT_EQ(s1.foreign, (std::set<std::string>{"v1"}));
  EXPECT_EQ(s1.lcr, (std::vector<Restriction>{{"v1", "x"}}));
  EXPECT_EQ(s2.lcr, (std::vector<Restriction>{{"y", "v1"}}));
  EXPECT_EQ(s2.variables, (std::set<std::string>{"v1"}));

  auto only1 = split_system(P("x =^ y + a\n"), branch({"x", "y"}, {{"x", 1}, {"y", 1}}));
  ASSERT_TRUE(only1);
  EXPECT_TRUE(only1->second.equations.empty());

  // Identifying y with a makes y + a reducible.
  auto with_a = branch({"x"}, {{"x", 1}});
  with_a.representative["y"] = "a";
  with_a.constants.insert("a");
  EXPECT_FALSE(split_system(P("constants: a\nx =^ y + a\n"), with_a));
}

TEST(Split, ConstrainedAcunhProblem) {
  auto p = P("free: f/1\nu + w =^ v\nv = f(z)\n");
  auto b = branch({"u", "v", "w", "z"}, {{"u", 1}, {"v", 2}, {"w", 1}, {"z", 2}});
  auto [s1, s2] = *split_system(p, b);
  auto q = build_constrained_acunh(s1, b);
  std::vector<std::string> diseqs;
  for (const auto& d : q.disequalities) diseqs.push_back(d.variable + "!=" + d.rhs.name);
  std::sort(diseqs.begin(), diseqs.end());
  EXPECT_EQ(diseqs, (std::vector<std::string>{"u!=v", "u!=w", "u!=z", "w!=v", "w!=z"}));
  // u < v: v must not occur in u; w comes after v.
  EXPECT_EQ(q.restrictions, (std::vector<Restriction>{{"v", "u"}, {"z", "u"}, {"z", "w"}}));
  auto none = build_constrained_acunh(split_system(P("x =^ y\n"), branch({"x", "y"}, {{"x", 1}, {"y", 1}}))->first,
                                      branch({"x", "y"}, {{"x", 1}, {"y", 1}}));
  for (const auto& d : none.disequalities) EXPECT_TRUE(d.rhs.is_variable());
}

TEST(Syntactic, Unification) {
  auto sys = [](const std::string& text, std::set<std::string> vars, std::set<std::string> foreign = {}) {
    PureSystem s;
    s.theory = 2;
    s.equations = P(text).equations;
    s.variables = std::move(vars);
    s.foreign = std::move(foreign);
    return s;
  };
  auto ok = syntactic_unify_lcr(sys("free: f/1, g/1\nconstants: a\nf(x) = f(a)\n", {"x"}));
  ASSERT_TRUE(ok);
  EXPECT_EQ(to_string(*ok), "{x -> a}");
  EXPECT_FALSE(syntactic_unify_lcr(sys("free: f/1, g/1\nconstants: a\nf(x) = g(a)\n", {"x"})));
  EXPECT_FALSE(syntactic_unify_lcr(sys("free: f/1\nx = f(x)\n", {"x"})));
  // Not injective: x and y receive the same term.
  EXPECT_FALSE(syntactic_unify_lcr(sys("free: f/1\nx = y\n", {"x", "y"})));
  // Not theory preserving: x receives the constantified u.
  EXPECT_FALSE(syntactic_unify_lcr(sys("free: f/1\nconstants: u\nf(x) = f(u)\n", {"x"}, {"u"})));
  auto lcr = sys("free: f/1\nconstants: u\nx = f(u)\n", {"x"}, {"u"});
  EXPECT_TRUE(syntactic_unify_lcr(lcr));
  lcr.lcr.push_back({"u", "x"});
  EXPECT_FALSE(syntactic_unify_lcr(lcr));
}

TEST(DecideCombined, Examples) {
  EXPECT_TRUE(decide_combined(P("free: f/1\nconstants: a, b\nx + f(y) =^ f(a) + b\n")).sat);
  EXPECT_FALSE(decide_combined(P("free: f/1\nconstants: a\nf(a) =^ h(f(a)) + f(a)\n")).sat);
  EXPECT_TRUE(decide_combined(P("free: f/1\nf(x) = f(x)\n")).sat);
  EXPECT_FALSE(decide_combined(P("free: f/1\nx =^ x + y\n")).sat);
  EXPECT_THROW(decide_combined(P("free: f/1\nconstants: a\nf(x) = y\nneq: x != a\n")), std::invalid_argument);
}

TEST(SolveCombined, Examples) {
  auto out = solve(P("free: f/1\nconstants: a, b\nx + f(y) =^ f(a) + b\n"), 2);
  EXPECT_NE(std::find(out.begin(), out.end(), "{x -> b, y -> a}"), out.end());
  EXPECT_EQ(solve(P("free: f/1\nconstants: a\nf(x) = f(a)\n"), 2), (std::vector<std::string>{"{x -> a}"}));

  auto pure = P("constants: b\nh(x) + b =^ x + y\n");
  std::vector<std::string> direct;
  EnumerationOptions opt;
  opt.depth = 3;
  enumerate_unifiers(pure, opt, [&](const Substitution& s) {
    direct.push_back(to_string(s));
    return true;
  });
  EXPECT_EQ(solve(pure, 3, 10'000), direct);
}

TEST(SolveCombined, NamesLeftoverVariablesCanonically) {
  auto out = solve(P("free: f/1\nf(x + y) =^ w\n"), 2);
  for (const auto& s : out) EXPECT_EQ(s.find("w1"), std::string::npos) << s;
  EXPECT_NE(std::find(out.begin(), out.end(), "{w -> f(v), x -> f(v), y -> v + f(v)}"), out.end());
}

TEST(Oracle, MixedOracleSanity) {
  oracle::MixedOracle o(P("free: f/1\nconstants: a, b\nx + f(y) =^ f(a) + b\n"), {"a", "b"});
  auto s = o.first_solution();
  ASSERT_TRUE(s);
  EXPECT_TRUE(is_asymmetric_unifier(P("free: f/1\nconstants: a, b\nx + f(y) =^ f(a) + b\n"), o.to_substitution(*s)));
  EXPECT_FALSE(oracle::MixedOracle(P("free: f/1\nconstants: a\nf(a) =^ h(f(a)) + f(a)\n"), {"a"}).first_solution());
}

TEST(Combination, AgreesWithMixedOracle) {
  for (const auto& c : suite::mixed_problems()) {
    bool expected = oracle_sat(c.problem);
    EXPECT_EQ(decide_combined(c.problem).sat, expected) << c.text;
    EXPECT_EQ(decide_combined(purify(c.problem)).sat, expected) << c.text;
  }
}

TEST(Combination, SolveOutputsVerify) {
  for (const auto& c : suite::mixed_problems()) {
    EnumerationOptions opt;
    opt.depth = 2;
    opt.max_results = 20;
    auto stats = solve_combined(c.problem, opt, [&](const Substitution& s) {
      EXPECT_TRUE(is_asymmetric_unifier(c.problem, s)) << c.text << to_string(s);
      return true;
    });
    EXPECT_EQ(stats.unverified, 0u) << c.text;
    if (oracle_sat(c.problem)) EXPECT_GT(stats.emitted, 0u) << c.text;
  }
}

// Ground solutions from the oracle are instances of emitted unifiers.
TEST(Combination, OracleSolutionsAreCovered) {
  for (const char* text : {"constants: a, b\nfree: f/1\nx + f(y) =^ f(a) + b\n",
                           "constants: a, b\nfree: f/1\nf(x) + y =^ f(a) + h(b)\n",
                           "constants: a, b\nfree: f/1\nf(x) + b =^ f(y) + x\n"}) {
    auto p = P(text);
    std::vector<Substitution> unifiers;
    EnumerationOptions opt;
    opt.depth = 3;
    opt.max_results = 200;
    solve_combined(p, opt, [&](const Substitution& s) {
      unifiers.push_back(s);
      return true;
    });
    oracle::MixedOracle o(p, {"a", "b"});
    int checked = 0;
    o.for_each_solution([&](const std::vector<oracle::MixedOracle::Value>& vals) {
      auto theta = o.to_substitution(vals);
      bool covered = false;
      for (const auto& u : unifiers) {
        std::set<std::string> free;
        for (const auto& [v, t] : u.bindings()) free.merge(variables_of(t));
        for (const auto& v : p.variables())
          if (!u.binds(v)) free.insert(v);
        std::vector<std::string> fv(free.begin(), free.end());
        if (fv.size() > 2) continue;
        // Search instances of the free variables over small ground values.
        std::vector<oracle::MixedOracle::Value> tau(fv.size());
        std::function<bool(std::size_t)> rec = [&](std::size_t i) {
          if (i == fv.size()) {
            Substitution s;
            for (std::size_t k = 0; k < fv.size(); ++k) s.bind(fv[k], o.to_term(tau[k]));
            for (const auto& v : p.variables())
              if (!equal_mod_acunh(apply(u.image(v), s), theta.image(v))) return false;
            return true;
          }
          for (const auto& v : o.domain()) {
            tau[i] = v;
            if (rec(i + 1)) return true;
          }
          return false;
        };
        if (rec(0)) {
          covered = true;
          break;
        }
      }
      EXPECT_TRUE(covered) << text << to_string(theta);
      return ++checked < 15;
    });
    EXPECT_GT(checked, 0) << text;
  }
}
