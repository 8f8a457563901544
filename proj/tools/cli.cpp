#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "acunh/combination.hpp"
#include "acunh/decision.hpp"
#include "acunh/enumeration.hpp"
#include "acunh/rewrite.hpp"
#include "acunh/std_equation.hpp"

namespace acunh::cli {

namespace {

using json = nlohmann::ordered_json;

struct Config {
  std::string input;
  std::string expr;
  int depth = 5;
  std::size_t bound = 10'000;
  std::size_t limit = 10'000;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::string sigma;
  std::string out_dir = ".";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_input(const Config& c, std::istream& in) {
  if (!c.expr.empty()) return c.expr;
  if (c.input.empty() || c.input == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(c.input);
  if (!f) throw UsageError("cannot read " + c.input);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json to_json(const Substitution& s) {
  json j = json::object();
  for (const auto& [v, t] : s.bindings()) j[v] = to_string(t);
  return j;
}

bool is_mixed(const Problem& p) { return p.has_free_symbols(); }

Substitution presentable_witness(const Problem& p, const Decision& d) {
  Substitution w;
  for (const auto& v : p.variables()) w.bind(v, d.witness.image(v));
  if (d.fresh_constant.empty()) return w;
  bool uses_fresh = false;
  for (const auto& [v, t] : w.bindings()) uses_fresh = uses_fresh || constants_of(t).count(d.fresh_constant);
  if (!uses_fresh) return w;
  Substitution dropped;
  Term fresh = Term::constant(d.fresh_constant);
  for (const auto& v : p.variables()) {
    std::vector<Term> parts;
    CanonicalTerm image = canonicalize(w.image(v));
    for (const auto& m : image.monomials())
      if (m.base != fresh) parts.push_back(m.to_term());
    dropped.bind(v, Term::plus(std::move(parts)));
  }
  if (is_asymmetric_unifier(p, dropped)) return dropped;
  auto general = generalize_witness(p, w, d.fresh_constant);
  return general.empty() ? w : general.front();
}

int cmd_decide(const Config& c, const Problem& p, std::ostream& out) {
  std::optional<Substitution> witness;
  bool sat = false;
  if (is_mixed(p)) {
    sat = decide_combined(p).sat;
    if (sat) {
      EnumerationOptions opt;
      opt.depth = c.depth;
      opt.max_results = 1;
      opt.max_states = c.bound;
      solve_combined(p, opt, [&](const Substitution& s) {
        witness = s;
        return false;
      });
    }
  } else {
    DecisionOptions opt;
    opt.max_product_states = c.bound;
    Decision d = decide_general(p, opt);
    sat = d.sat;
    if (sat) witness = presentable_witness(p, d);
  }
  if (witness && !is_asymmetric_unifier(p, *witness)) witness.reset();
  if (c.format == "json") {
    json j{{"command", "decide"}, {"result", sat ? "SAT" : "UNSAT"}};
    if (witness) j["witness"] = to_json(*witness);
    out << j.dump(2) << "\n";
  } else {
    out << (sat ? "SAT" : "UNSAT") << "\n";
    if (witness) out << to_string(*witness) << "\n";
  }
  return sat ? ok : negative;
}

int cmd_solve(const Config& c, const Problem& p, std::ostream& out, std::ostream& err) {
  EnumerationOptions opt;
  opt.depth = c.depth;
  opt.max_results = c.limit;
  opt.max_states = c.bound;
  std::vector<Substitution> found;
  std::size_t dropped = 0;
  auto sink = [&](const Substitution& s) {
    if (!is_asymmetric_unifier(p, s)) {
      ++dropped;
      return true;
    }
    found.push_back(s);
    if (c.format == "text") out << to_string(s) << "\n";
    return true;
  };
  bool exceeded = is_mixed(p) ? solve_combined(p, opt, sink).bound_exceeded : enumerate_unifiers(p, opt, sink).bound_exceeded;
  if (dropped) err << "warning: " << dropped << " candidate(s) failed verification and were dropped\n";
  if (c.format == "json") {
    json sols = json::array();
    for (const auto& s : found) sols.push_back(to_json(s));
    out << json{{"command", "solve"}, {"depth", c.depth}, {"solutions", sols}, {"count", found.size()},
                {"bound_exceeded", exceeded}}
               .dump(2)
        << "\n";
  } else {
    out << found.size() << (found.size() == 1 ? " solution" : " solutions") << "\n";
  }
  if (exceeded) {
    err << "exploration bound of " << c.bound << " states exceeded; output may be incomplete\n";
    return bound;
  }
  return ok;
}

int cmd_classify(const Config& c, const Problem& p, std::ostream& out) {
  if (is_mixed(p)) throw UsageError("classify supports problems without free symbols only");
  if (c.format == "dot") {
    out << to_dot(explore_product(p, c.bound));
    return ok;
  }
  Classification cl = classify_finitary(p, c.bound);
  json j{{"command", "classify"}, {"states", cl.states}};
  std::string text;
  switch (cl.kind) {
    case Classification::Kind::finite:
      j["result"] = "finite";
      j["count"] = cl.count;
      text = "finite(" + std::to_string(cl.count) + ")";
      break;
    case Classification::Kind::infinite:
      j["result"] = "infinite";
      j["cycle"] = cl.cycle;
      text = "infinite\ncycle at state: " + cl.cycle;
      break;
    case Classification::Kind::bound_exceeded:
      j["result"] = "unknown";
      j["bound"] = c.bound;
      text = "unknown(" + std::to_string(c.bound) + ")";
      break;
  }
  out << (c.format == "json" ? j.dump(2) : text) << "\n";
  return cl.kind == Classification::Kind::bound_exceeded ? bound : ok;
}

int cmd_normalize(const Config& c, const std::string& text, std::ostream& out) {
  Term t = parse_term(text);
  Term rh = normalize_rh(t);
  CanonicalTerm nf = canonicalize(t);
  json j{{"command", "normalize"},
         {"input", to_string(t)},
         {"rh_normal_form", to_string(rh)},
         {"normal_form", to_string(nf)},
         {"irreducible", is_irreducible_r2_ach(t)},
         {"weight", termination_weight(t)}};
  if (c.seed) {
    std::mt19937_64 rng(*c.seed);
    Term cur = rh;
    std::size_t steps = 0;
    for (;;) {
      auto next = r2_ach_successors(cur);
      if (next.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
      cur = normalize_rh(next[pick(rng)]);
      ++steps;
    }
    if (!equal_mod_ach(cur, nf.to_term()))
      throw std::logic_error("randomized rewriting reached " + to_string(cur) + ", expected " + to_string(nf));
    j["seed"] = *c.seed;
    j["random_steps"] = steps;
    j["random_result"] = to_string(cur);
  }
  if (c.format == "json") {
    out << j.dump(2) << "\n";
    return ok;
  }
  out << "normal form: " << j["normal_form"].get<std::string>() << "\n"
      << "rh normal form: " << j["rh_normal_form"].get<std::string>() << "\n"
      << "irreducible: " << (j["irreducible"].get<bool>() ? "yes" : "no") << "\n"
      << "weight: " << j["weight"].get<std::int64_t>() << "\n";
  if (c.seed)
    out << "random strategy (seed " << *c.seed << "): " << j["random_result"].get<std::string>() << " after "
        << j["random_steps"].get<std::size_t>() << " steps\n";
  return ok;
}

int cmd_check(const Config& c, const Problem& p, std::ostream& out) {
  if (c.sigma.empty()) throw UsageError("check-unifier requires --sigma");
  Substitution s = parse_substitution(c.sigma, p.signature);
  bool valid = is_asymmetric_unifier(p, s);
  if (c.format == "json")
    out << json{{"command", "check-unifier"}, {"sigma", to_json(s)}, {"valid", valid}}.dump(2) << "\n";
  else
    out << (valid ? "valid" : "invalid") << "\n";
  return valid ? ok : negative;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("error writing " + path.string());
}

int cmd_export(const Config& c, const Problem& p, std::ostream& out, std::ostream& err) {
  if (p.equations.empty() && p.restrictions.empty() && p.disequalities.empty()) {
    err << "warning: empty problem, no automata written\n";
    return ok;
  }
  if (is_mixed(p)) throw UsageError("export-dot supports problems without free symbols only");
  std::vector<std::pair<std::string, std::string>> files;
  StandardForm sf = standardize(p);
  for (std::size_t i = 0; i < sf.equations.size(); ++i) {
    std::string name = "std" + std::to_string(i + 1);
    files.push_back({name + ".dot", to_dot(build_dfa(sf.equations[i]), name)});
  }
  std::string fresh = fresh_constant_name(p);
  for (std::size_t i = 0; i < p.equations.size(); ++i) {
    std::string name = "solutions" + std::to_string(i + 1);
    files.push_back({name + ".dot", to_dot(build_solution_automaton(p.equations[i], p, fresh), name)});
  }
  ProductGraph g = explore_product(p, c.bound);
  files.push_back({"product.dot", to_dot(g)});
  std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, content] : files) {
    write_file(dir / name, content);
    out << (dir / name).string() << "\n";
  }
  if (!g.complete) {
    err << "exploration bound of " << c.bound << " states exceeded; product.dot is partial\n";
    return bound;
  }
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asymmetric unification modulo xor with a homomorphism", "acunh"};
  app.require_subcommand(1);
  Config c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("input", c.input, "Problem file, or - for stdin (default)");
    sub->add_option("-e,--expr", c.expr, "Problem text given inline");
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("--bound", c.bound, "Exploration bound in automaton states")->check(CLI::PositiveNumber);
  };
  auto* decide = app.add_subcommand("decide", "Decide solvability and print a witness");
  auto* solve = app.add_subcommand("solve", "Enumerate verified unifiers up to a depth");
  auto* classify = app.add_subcommand("classify", "Report finite(n), infinite, or unknown(bound)");
  auto* normalize = app.add_subcommand("normalize", "Normalize a term");
  auto* check = app.add_subcommand("check-unifier", "Check a substitution against a problem");
  auto* dot = app.add_subcommand("export-dot", "Write the automata as DOT files");
  for (auto* sub : {decide, solve, classify, normalize, check, dot}) common(sub);
  for (auto* sub : {decide, solve}) sub->add_option("--depth", c.depth, "Enumeration depth")->check(CLI::NonNegativeNumber);
  solve->add_option("--limit", c.limit, "Maximum number of unifiers")->check(CLI::PositiveNumber);
  normalize->add_option("--seed", c.seed, "Also rewrite with a randomized strategy");
  check->add_option("--sigma", c.sigma, "Substitution, e.g. {x -> a, y -> h(b)}")->required();
  dot->add_option("--out", c.out_dir, "Output directory");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : error;
  }

  try {
    auto* sub = app.get_subcommands().front();
    if (c.format == "dot" && sub != classify && sub != dot)
      throw UsageError("--format dot is available for classify and export-dot only");
    std::string text = read_input(c, in);
    if (sub == normalize) return cmd_normalize(c, text, out);
    Problem p = parse_problem(text);
    if (sub == decide) return cmd_decide(c, p, out);
    if (sub == solve) return cmd_solve(c, p, out, err);
    if (sub == classify) return cmd_classify(c, p, out);
    if (sub == check) return cmd_check(c, p, out);
    return cmd_export(c, p, out, err);
  } catch (const BoundExceeded& e) {
    err << "error: " << e.what() << "\n";
    return bound;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return error;
  }
}

}  // namespace acunh::cli
