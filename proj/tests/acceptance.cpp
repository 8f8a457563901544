// Acceptance gate: prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "acunh/combination.hpp"
#include "acunh/decision.hpp"
#include "acunh/enumeration.hpp"
#include "acunh/rewrite.hpp"
#include "acunh/std_equation.hpp"
#include "cli.hpp"
#include "mixed_suite.hpp"
#include "oracle_ground.hpp"
#include "oracle_mixed.hpp"
#include "oracle_rewriter.hpp"
#include "problem_suite.hpp"

using namespace acunh;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

struct CliRun {
  int code;
  std::vector<std::string> lines;
};

CliRun cli(const std::vector<std::string>& args) {
  std::istringstream in;
  std::ostringstream out, err;
  int code = cli::run(args, in, out, err);
  CliRun r{code, {}};
  std::istringstream s(out.str());
  for (std::string l; std::getline(s, l);) r.lines.push_back(l);
  return r;
}

Substitution restrict(const Substitution& s, const std::set<std::string>& vars) {
  Substitution out;
  for (const auto& v : vars) out.bind(v, s.image(v));
  return out;
}

BitColumn col(std::initializer_list<int> bits) {
  BitColumn c = 0;
  int j = 0;
  for (int b : bits) c |= BitColumn(b) << j++;
  return c;
}

const std::string kThreeEquations = "constants: a\nU =^ V + Y\nW = h(V)\nY =^ h(W)\n";
const std::string kRunning = "constants: b\nh(x) + b =^ x + y\n";

Outcome check_unifier_cases() {
  Outcome o;
  const std::string prob = "y + x =^ x + a";
  auto s1 = cli({"check-unifier", "-e", prob, "--sigma", "{y -> a}"});
  auto s2 = cli({"check-unifier", "-e", prob, "--sigma", "{x -> 0, y -> a}"});
  if (s1.code != 0 || s1.lines != std::vector<std::string>{"valid"}) o.fail("sigma1 not reported valid");
  if (s2.code != 1 || s2.lines != std::vector<std::string>{"invalid"}) o.fail("sigma2 not reported invalid");
  return o;
}

Outcome three_equations() {
  Outcome o;
  auto d = cli({"decide", "-e", kThreeEquations});
  if (d.code != 0 || d.lines.empty() || d.lines[0] != "SAT") o.fail("decide did not report SAT");
  Problem p = parse_problem(kThreeEquations);
  Substitution expected = parse_substitution("{V -> a, W -> h(a), Y -> h^2(a), U -> h^2(a) + a}", p.signature);
  auto s = cli({"solve", "--depth", "4", "-e", kThreeEquations});
  bool found = false;
  for (std::size_t i = 0; i + 1 < s.lines.size(); ++i)
    found = found || equal_mod_acunh(parse_substitution(s.lines[i], p.signature), expected);
  if (s.code != 0 || !found) o.fail("unifier missing from depth-4 solve output");
  return o;
}

Outcome published_automata() {
  Outcome o;
  if (!build_equation_dfa(StdEquation::xor_sum("P", "Q", "R")).accepts({col({1, 0, 1}), col({1, 1, 0})}))
    o.fail("P = Q + R rejects (1,0,1)(1,1,0)");
  if (!build_equation_dfa(StdEquation::hshift_asym("X", "Y"), {"Y", "X"}).accepts({col({1, 0}), col({1, 1}), col({0, 1})}))
    o.fail("X =^ h(Y) rejects (1,0)(1,1)(0,1)");
  if (build_equation_dfa(StdEquation::xor_asym("P", "Q", "R")).accepts({})) o.fail("P =^ Q + R accepts the empty string");
  std::vector<TrackDfa> sys{build_dfa(StdEquation::xor_asym("U", "V", "Y")), build_dfa(StdEquation::hshift("W", "V")),
                            build_dfa(StdEquation::hshift_asym("Y", "W"))};
  TrackDfa prod = intersect(sys, {"V", "W", "Y", "U"});
  if (!prod.accepts({col({1, 0, 0, 1}), col({0, 1, 0, 0}), col({0, 0, 1, 1}), col({0, 0, 0, 0})}))
    o.fail("product rejects the example string");
  return o;
}

Outcome not_finitary() {
  Outcome o;
  Problem p = parse_problem(kRunning);
  auto c = cli({"classify", "-e", kRunning});
  if (c.code != 0 || c.lines.empty() || c.lines[0] != "infinite") o.fail("classify did not report infinite");
  Classification cl = classify_finitary(p);
  ProductGraph g = explore_product(p);
  if (!cl.cycle_state) {
    o.fail("no cycle state");
    return o;
  }
  int q = *cl.cycle_state;
  auto useful = useful_states(g);
  std::vector<bool> seen(g.states.size(), false);
  std::vector<int> stack;
  for (const auto& e : g.edges[q]) stack.push_back(e.target);
  bool back = false;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    if (s == q) back = true;
    if (seen[s]) continue;
    seen[s] = true;
    for (const auto& e : g.edges[s]) stack.push_back(e.target);
  }
  if (!back || !useful[q]) o.fail("reported state is not on a cycle leading to acceptance");
  std::vector<Substitution> first;
  EnumerationOptions opt;
  opt.max_results = 3;
  enumerate_unifiers(p, opt, [&](const Substitution& s) {
    first.push_back(s);
    return true;
  });
  if (first.size() != 3) o.fail("fewer than 3 unifiers");
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (const auto& [v, t] : first[i].bindings())
      if (!variables_of(t).empty()) o.fail("unifier is not ground: " + to_string(first[i]));
    for (std::size_t j = 0; j < i; ++j)
      if (equal_mod_acunh(first[i], first[j])) o.fail("duplicate unifiers");
  }
  return o;
}

std::vector<std::string> oracle_constants(const Problem& p, const std::string& fresh) {
  auto set = p.constants();
  std::vector<std::string> cs(set.begin(), set.end());
  cs.push_back(fresh);
  return cs;
}

Outcome decision_oracle() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& c : suite::small_problems()) {
    Decision d = decide_general(c.problem);
    bool expected = oracle::GroundOracle(c.problem, oracle_constants(c.problem, d.fresh_constant), 3).first_solution().has_value();
    if (d.sat != expected) o.fail("disagreement on:\n" + c.text);
    ++n;
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(n) + " problems";
  return o;
}

// Ground theta is an instance of u when some assignment of h^i(fresh), i <= 2,
// to the variables left in u makes them ACUNh-equal.
bool instance_of(const Substitution& theta, const Substitution& u, const std::set<std::string>& vars,
                 const std::string& fresh) {
  std::set<std::string> open;
  for (const auto& v : vars)
    for (const auto& w : variables_of(u.image(v))) open.insert(w);
  std::vector<std::string> ws(open.begin(), open.end());
  std::vector<int> pick(ws.size(), 0);
  for (;;) {
    Substitution rho;
    for (std::size_t i = 0; i < ws.size(); ++i) rho.bind(ws[i], Term::h_pow(Term::constant(fresh), pick[i]));
    bool eq = true;
    for (const auto& v : vars) eq = eq && equal_mod_acunh(apply(u.image(v), rho), theta.image(v));
    if (eq) return true;
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] > 2) pick[i++] = 0;
    if (i == pick.size()) return false;
  }
}

Outcome enumeration_oracle() {
  Outcome o;
  std::size_t solutions = 0;
  for (const auto& c : suite::small_problems()) {
    ProductGraph g = explore_product(c.problem);
    if (!g.complete) {
      o.fail("exploration incomplete on:\n" + c.text);
      continue;
    }
    auto vars = c.problem.variables();
    oracle::GroundOracle oracle(c.problem, g.constants, 2);
    oracle.for_each_solution([&](const oracle::GroundOracle::Values& v) {
      ++solutions;
      Substitution theta = oracle.to_substitution(v);
      LayerDecomposition d = layer_decompose(theta);
      bool covered = d.layers.size() <= 3 && product_accepts(g, d);
      if (covered) {
        covered = false;
        for (const auto& u : unifiers_from_layers(c.problem, g, d))
          if (instance_of(theta, u, vars, g.fresh)) {
            covered = true;
            break;
          }
      }
      if (!covered) o.fail("uncovered " + to_string(theta) + " of:\n" + c.text);
      return o.pass;
    });
    if (!o.pass) break;
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(solutions) + " ground solutions";
  return o;
}

Outcome rewrite_properties() {
  Outcome o;
  std::mt19937 rng(2024);
  std::vector<Term> atoms{Term::constant("a"), Term::constant("b")};
  int done = 0;
  while (done < 1000 && o.pass) {
    Term t = oracle::random_term(rng, atoms, 4);
    if (t.size() > 12) continue;
    ++done;
    Term expected = oracle::ac_flat(canonicalize(t).to_term());
    for (unsigned seed = 0; seed < 3; ++seed) {
      oracle::R1Rewriter r(rng() + seed);
      if (r.normal_form(t) != expected) o.fail("normal forms differ for " + to_string(t));
    }
    auto next = r2_ach_successors(t);
    if (is_irreducible_r2_ach(t) != next.empty()) o.fail("irreducibility disagrees on " + to_string(t));
    Term cur = t;
    while (!next.empty()) {
      for (const auto& s : next)
        if (termination_weight(s) >= termination_weight(cur)) o.fail("weight does not decrease: " + to_string(cur));
      cur = next[rng() % next.size()];
      next = r2_ach_successors(cur);
    }
  }
  return o;
}

Outcome layer_roundtrip() {
  Outcome o;
  std::mt19937 rng(99);
  std::vector<Term> atoms{Term::constant("a"), Term::constant("b")};
  for (int i = 0; i < 500; ++i) {
    Substitution theta;
    for (const char* v : {"x", "y", "z"}) theta.bind(v, canonicalize(oracle::random_term(rng, atoms, 4)).to_term());
    Substitution back = compose_layers(layer_decompose(theta));
    if (!equal_mod_acunh(restrict(back, {"x", "y", "z"}), theta)) o.fail("round trip changed " + to_string(theta));
  }
  return o;
}

Outcome combination_suite() {
  Outcome o;
  std::size_t n = 0, emitted = 0;
  for (const auto& c : suite::mixed_problems()) {
    ++n;
    bool expected = oracle::MixedOracle(c.problem, {"a", "b", "c"}).first_solution().has_value();
    if (decide_combined(c.problem).sat != expected) o.fail("decision disagrees on:\n" + c.text);
    EnumerationOptions opt;
    opt.depth = 3;
    opt.max_results = 50;
    auto stats = solve_combined(c.problem, opt, [&](const Substitution& s) {
      if (!is_asymmetric_unifier(c.problem, s)) o.fail("unverified output " + to_string(s) + " of:\n" + c.text);
      return true;
    });
    emitted += stats.emitted;
    if (stats.unverified) o.fail("assembled unifiers failed verification on:\n" + c.text);
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(n) + " problems, " + std::to_string(emitted) + " unifiers";
  return o;
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> all{
      {1, "check-unifier on y + x =^ x + a", 1, check_unifier_cases},
      {2, "decide and depth-4 solve on the three-equation example", 5, three_equations},
      {3, "published automata strings", 1, published_automata},
      {4, "running example is not finitary", 5, not_finitary},
      {5, "decision agrees with the ground oracle", 600, decision_oracle},
      {6, "depth-3 enumeration covers every ground solution", 600, enumeration_oracle},
      {7, "rewrite properties on 1000 random terms", 120, rewrite_properties},
      {8, "layer decomposition round trip", 60, layer_roundtrip},
      {9, "combination agrees with the mixed oracle", 600, combination_suite},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_seconds) + " s");
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s)";
    if (!o.detail.empty()) std::cout << " [" << o.detail << "]";
    std::cout << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
