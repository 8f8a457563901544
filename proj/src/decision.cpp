#include "acunh/decision.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "acunh/rewrite.hpp"

namespace acunh {

namespace {

class Flattener {
 public:
  explicit Flattener(const Problem& p) {
    used_ = p.variables();
    used_.merge(p.constants());
  }

  StandardForm& out() { return out_; }

  std::string fresh() {
    std::string name;
    do name = "F" + std::to_string(++counter_);
    while (used_.count(name));
    used_.insert(name);
    out_.fresh.push_back(name);
    return name;
  }

  // Operand naming the symmetric value of t.
  std::string operand(const CanonicalTerm& t) {
    const auto& ms = t.monomials();
    if (ms.size() == 1) return monomial_operand(ms.front());
    return into(std::nullopt, t, false);
  }

  // Emits equations making `target` (fresh when absent) equal to t; asymmetric
  // kinds keep the summands of t nonzero and disjoint.
  std::string into(std::optional<std::string> target, const CanonicalTerm& t, bool asym) {
    const auto& ms = t.monomials();
    if (ms.empty()) {
      std::string x = target ? *target : fresh();
      emit(StdEquation::zero(x));
      return x;
    }
    if (ms.size() == 1) return monomial_into(std::move(target), ms.front(), asym);

    // Highest degree first, which follows the usual way of writing sums.
    std::vector<Monomial> order(ms.begin(), ms.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const Monomial& a, const Monomial& b) { return a.degree > b.degree; });
    std::vector<std::string> ops;
    for (const auto& m : order) ops.push_back(monomial_operand(m));
    std::string acc = ops[0];
    for (std::size_t j = 1; j + 1 < ops.size(); ++j) {
      std::string g = fresh();
      emit(asym ? StdEquation::xor_asym(g, acc, ops[j]) : StdEquation::xor_sum(g, acc, ops[j]));
      acc = g;
    }
    return finish(std::move(target), {acc, ops.back()}, [&](const std::string& x) {
      return asym ? StdEquation::xor_asym(x, acc, ops.back()) : StdEquation::xor_sum(x, acc, ops.back());
    });
  }

 private:
  std::string monomial_operand(const Monomial& m) {
    if (m.degree == 0 && m.base.is_variable()) return m.base.atom().name;
    return monomial_into(std::nullopt, m, false);
  }

  std::string monomial_into(std::optional<std::string> target, const Monomial& m, bool asym) {
    const Atom& a = m.base.atom();
    if (a.is_constant())
      return finish(std::move(target), {}, [&](const std::string& x) {
        return StdEquation::const_def(x, a.name, m.degree);
      });
    if (m.degree == 0) {
      if (target && *target == a.name) return a.name;
      return finish(std::move(target), {a.name}, [&](const std::string& x) {
        return StdEquation::equal(x, a.name);
      });
    }
    std::string prev = a.name;
    for (int i = 1; i < m.degree; ++i) {
      std::string g = fresh();
      emit(asym ? StdEquation::hshift_asym(g, prev) : StdEquation::hshift(g, prev));
      prev = g;
    }
    return finish(std::move(target), {prev}, [&](const std::string& x) {
      return asym ? StdEquation::hshift_asym(x, prev) : StdEquation::hshift(x, prev);
    });
  }

  // Emits make(target), routing through a fresh variable when the target is
  // also an operand.
  std::string finish(std::optional<std::string> target, const std::vector<std::string>& operands,
                     const std::function<StdEquation(const std::string&)>& make) {
    if (!target) {
      std::string x = fresh();
      emit(make(x));
      return x;
    }
    if (std::find(operands.begin(), operands.end(), *target) != operands.end()) {
      std::string g = fresh();
      emit(make(g));
      emit(StdEquation::equal(*target, g));
    } else {
      emit(make(*target));
    }
    return *target;
  }

  void emit(StdEquation e) { out_.equations.push_back(std::move(e)); }

  StandardForm out_;
  std::set<std::string> used_;
  int counter_ = 0;
};

void require_pure(const Problem& p) {
  if (p.has_free_symbols())
    throw std::invalid_argument("the decision procedure handles pure ACUNh problems only");
}

Substitution restrict_to(const Substitution& s, const std::set<std::string>& vars) {
  Substitution out;
  for (const auto& v : vars) {
    const Term* t = s.find(v);
    out.bind(v, t ? *t : Term::zero());
  }
  return out;
}

Substitution all_zero(const std::set<std::string>& vars) {
  Substitution out;
  for (const auto& v : vars) out.bind(v, Term::zero());
  return out;
}

// Runs one automata system and decodes the accepted string over `constant`.
std::optional<Substitution> solve_system(const std::vector<StdEquation>& eqs,
                                         const std::vector<std::string>& order,
                                         const std::string& constant, DecisionStats& stats,
                                         std::size_t max_states) {
  std::vector<TrackDfa> dfas;
  for (const auto& e : eqs) dfas.push_back(build_dfa(e));
  TrackDfa product = intersect(dfas, order, max_states);
  ++stats.systems;
  stats.product_states += product.state_count();
  auto w = find_witness(product);
  if (!w) return std::nullopt;
  return decode_witness(*w, order, constant);
}

// ---------------------------------------------------------------------------
// Zero-status constraints as clauses over booleans z(variable, constant).

struct Literal {
  int var;
  bool zero;  // literal holds when z(var) == zero
};
using Clause = std::vector<Literal>;

class PlanSearch {
 public:
  PlanSearch(std::size_t vars, std::size_t consts) : vars_(vars), consts_(consts) {}

  int id(std::size_t v, std::size_t c) const { return static_cast<int>(c * vars_ + v); }

  void add(Clause c) { clauses_.push_back(std::move(c)); }

  // zX <-> zY in every component.
  void same(std::size_t x, std::size_t y) {
    for (std::size_t c = 0; c < consts_; ++c) {
      add({{id(x, c), false}, {id(y, c), true}});
      add({{id(x, c), true}, {id(y, c), false}});
    }
  }

  // Some component of x is nonzero.
  void somewhere_nonzero(std::size_t x) {
    Clause cl;
    for (std::size_t c = 0; c < consts_; ++c) cl.push_back({id(x, c), false});
    add(std::move(cl));
  }

  // Calls f on each model until it returns true.
  bool enumerate(const std::function<bool(const std::vector<bool>&)>& f) {
    std::vector<signed char> val(vars_ * consts_, -1);
    return search(val, f);
  }

 private:
  bool propagate(std::vector<signed char>& val) const {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& cl : clauses_) {
        int open = 0;
        const Literal* last = nullptr;
        bool sat = false;
        for (const auto& l : cl) {
          if (val[l.var] < 0) {
            ++open;
            last = &l;
          } else if (static_cast<bool>(val[l.var]) == l.zero) {
            sat = true;
            break;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          val[last->var] = last->zero;
          changed = true;
        }
      }
    }
    return true;
  }

  bool search(std::vector<signed char>& val, const std::function<bool(const std::vector<bool>&)>& f) {
    if (!propagate(val)) return false;
    // Branch on the first open component, variable-major so that originals go first.
    int pick = -1;
    for (std::size_t v = 0; v < vars_ && pick < 0; ++v)
      for (std::size_t c = 0; c < consts_; ++c)
        if (val[id(v, c)] < 0) {
          pick = id(v, c);
          break;
        }
    if (pick < 0) return f(std::vector<bool>(val.begin(), val.end()));
    for (bool z : {false, true}) {
      auto copy = val;
      copy[pick] = z;
      if (search(copy, f)) return true;
    }
    return false;
  }

  std::size_t vars_, consts_;
  std::vector<Clause> clauses_;
};

}  // namespace

StandardForm standardize(const Problem& p) {
  Flattener fl(p);
  for (const auto& e : p.equations) {
    CanonicalTerm lhs = canonicalize(e.lhs);
    CanonicalTerm rhs = canonicalize(e.rhs);
    std::string l = fl.operand(lhs);
    fl.into(l, rhs, e.mode == Mode::asymmetric);
  }
  for (const auto& d : p.disequalities)
    fl.out().equations.push_back(d.rhs.is_variable() ? StdEquation::var_neq(d.variable, d.rhs.name)
                                                     : StdEquation::const_neq(d.variable, d.rhs.name));
  StandardForm out = std::move(fl.out());
  for (const auto& v : p.variables()) out.variables.push_back(v);
  out.variables.insert(out.variables.end(), out.fresh.begin(), out.fresh.end());
  return out;
}

Decision decide_single_constant(const Problem& p, const DecisionOptions& opt) {
  require_pure(p);
  auto constants = p.constants();
  if (constants.size() > 1) throw std::invalid_argument("more than one constant");
  Decision d;
  auto vars = p.variables();
  if (constants.empty()) {
    d.sat = is_asymmetric_unifier(p, all_zero(vars));
    if (d.sat) d.witness = all_zero(vars);
    return d;
  }
  const std::string& c = *constants.begin();
  StandardForm sf = standardize(p);
  std::vector<StdEquation> eqs = sf.equations;
  for (const auto& r : p.restrictions) eqs.push_back(StdEquation::zero(r.variable));
  auto sol = solve_system(eqs, sf.variables, c, d.stats, opt.max_product_states);
  d.stats.plans = 1;
  if (sol) {
    d.sat = true;
    d.witness = restrict_to(*sol, vars);
  }
  return d;
}

Decision decide_multi_constant(const Problem& p, const DecisionOptions& opt) {
  require_pure(p);
  Decision d;
  auto var_set = p.variables();
  const auto constant_set = p.constants();
  std::vector<std::string> constants(constant_set.begin(), constant_set.end());
  if (constants.empty()) {
    d.sat = is_asymmetric_unifier(p, all_zero(var_set));
    if (d.sat) d.witness = all_zero(var_set);
    return d;
  }

  StandardForm sf = standardize(p);
  const auto& vars = sf.variables;
  std::map<std::string, std::size_t> vix;
  for (std::size_t i = 0; i < vars.size(); ++i) vix[vars[i]] = i;
  std::map<std::string, std::size_t> cix;
  for (std::size_t i = 0; i < constants.size(); ++i) cix[constants[i]] = i;
  const std::size_t nc = constants.size();

  PlanSearch search(vars.size(), nc);
  std::vector<StdEquation> equations, diseqs;
  for (const auto& e : sf.equations) (e.is_disequality() ? diseqs : equations).push_back(e);

  for (const auto& e : equations) {
    auto at = [&](std::size_t k) { return vix.at(e.operands[k]); };
    switch (e.kind) {
      case StdKind::xor_sum:
        for (std::size_t c = 0; c < nc; ++c) {
          int P = search.id(at(0), c), Q = search.id(at(1), c), R = search.id(at(2), c);
          search.add({{P, true}, {Q, false}, {R, false}});
          search.add({{Q, true}, {P, false}, {R, false}});
          search.add({{R, true}, {P, false}, {Q, false}});
        }
        break;
      case StdKind::xor_asym:
        for (std::size_t c = 0; c < nc; ++c) {
          int P = search.id(at(0), c), Q = search.id(at(1), c), R = search.id(at(2), c);
          search.add({{P, false}, {Q, true}});
          search.add({{P, false}, {R, true}});
          search.add({{P, true}, {Q, false}, {R, false}});
        }
        search.somewhere_nonzero(at(1));
        search.somewhere_nonzero(at(2));
        break;
      case StdKind::hshift:
        search.same(at(0), at(1));
        break;
      case StdKind::hshift_asym:
        search.same(at(0), at(1));
        search.somewhere_nonzero(at(1));
        break;
      case StdKind::const_def:
        for (std::size_t c = 0; c < nc; ++c)
          search.add({{search.id(at(0), c), constants[c] != e.constant}});
        break;
      case StdKind::zero:
        for (std::size_t c = 0; c < nc; ++c) search.add({{search.id(at(0), c), true}});
        break;
      case StdKind::equal:
        search.same(at(0), at(1));
        break;
      case StdKind::nonzero:
        search.somewhere_nonzero(at(0));
        break;
      case StdKind::var_neq:
      case StdKind::const_neq:
        break;
    }
  }
  for (const auto& r : p.restrictions)
    search.add({{search.id(vix.at(r.variable), cix.at(r.constant)), true}});

  // Per-constant systems depend only on the constant, its zero pattern and the
  // disequalities routed to it.
  using Key = std::tuple<std::size_t, std::vector<bool>, std::vector<std::size_t>>;
  std::map<Key, std::optional<Substitution>> memo;

  auto system_for = [&](std::size_t c, const std::vector<bool>& zero,
                        const std::vector<std::size_t>& routed) -> const std::optional<Substitution>& {
    Key key{c, zero, routed};
    if (auto it = memo.find(key); it != memo.end()) {
      ++d.stats.cache_hits;
      return it->second;
    }
    const std::string& name = constants[c];
    std::vector<StdEquation> eqs;
    for (std::size_t v = 0; v < vars.size(); ++v)
      eqs.push_back(zero[v] ? StdEquation::zero(vars[v]) : StdEquation::nonzero(vars[v]));
    auto z = [&](const std::string& v) { return static_cast<bool>(zero[vix.at(v)]); };
    for (const auto& e : equations) {
      const auto& o = e.operands;
      switch (e.kind) {
        case StdKind::xor_asym:
          if (z(o[1]) && z(o[2])) eqs.push_back(StdEquation::zero(o[0]));
          else if (z(o[1])) eqs.push_back(StdEquation::equal(o[0], o[2]));
          else if (z(o[2])) eqs.push_back(StdEquation::equal(o[0], o[1]));
          else eqs.push_back(e);
          break;
        case StdKind::hshift_asym:
          eqs.push_back(z(o[1]) ? StdEquation::zero(o[0]) : e);
          break;
        case StdKind::const_def:
          eqs.push_back(e.constant == name ? e : StdEquation::zero(o[0]));
          break;
        case StdKind::nonzero:
          break;  // realized by the plan
        default:
          eqs.push_back(e);
      }
    }
    for (std::size_t i : routed) eqs.push_back(diseqs[i]);
    return memo.emplace(key, solve_system(eqs, vars, name, d.stats, opt.max_product_states)).first->second;
  };

  search.enumerate([&](const std::vector<bool>& model) {
    ++d.stats.plans;
    std::vector<std::vector<bool>> zero(nc, std::vector<bool>(vars.size()));
    for (std::size_t c = 0; c < nc; ++c)
      for (std::size_t v = 0; v < vars.size(); ++v) zero[c][v] = model[search.id(v, c)];
    auto zv = [&](const std::string& v, std::size_t c) { return static_cast<bool>(zero[c][vix.at(v)]); };

    // Constants that could carry each disequality that the plan alone does not settle.
    std::vector<std::size_t> open;
    std::vector<std::vector<std::size_t>> options;
    for (std::size_t i = 0; i < diseqs.size(); ++i) {
      const auto& e = diseqs[i];
      const std::string& x = e.operands[0];
      std::vector<std::size_t> opts;
      bool settled = false;
      if (e.kind == StdKind::var_neq) {
        const std::string& y = e.operands[1];
        for (std::size_t c = 0; c < nc && !settled; ++c) {
          if (zv(x, c) != zv(y, c)) settled = true;
          else if (!zv(x, c)) opts.push_back(c);
        }
      } else {
        std::size_t a = cix.at(e.constant);
        for (std::size_t c = 0; c < nc; ++c)
          if (c != a && !zv(x, c)) settled = true;
        if (zv(x, a)) settled = true;
        opts.push_back(a);
      }
      if (settled) continue;
      if (opts.empty()) return false;
      open.push_back(i);
      options.push_back(std::move(opts));
    }

    std::vector<std::size_t> choice(open.size(), 0);
    for (;;) {
      std::vector<std::vector<std::size_t>> routed(nc);
      for (std::size_t k = 0; k < open.size(); ++k) routed[options[k][choice[k]]].push_back(open[k]);
      Substitution sum;
      bool ok = true;
      std::vector<Substitution> parts;
      for (std::size_t c = 0; c < nc && ok; ++c) {
        const auto& sol = system_for(c, zero[c], routed[c]);
        if (!sol) ok = false;
        else parts.push_back(*sol);
      }
      if (ok) {
        for (const auto& v : var_set) {
          std::vector<Term> comps;
          for (const auto& part : parts) comps.push_back(part.image(v));
          sum.bind(v, canonicalize(Term::plus(std::move(comps))).to_term());
        }
        if (is_asymmetric_unifier(p, sum)) {
          d.sat = true;
          d.witness = sum;
          ComponentPlan plan{constants, {}};
          for (const auto& v : var_set)
            for (std::size_t c = 0; c < nc; ++c) plan.zero[{v, constants[c]}] = zero[c][vix.at(v)];
          d.plan = std::move(plan);
          return true;
        }
      }
      std::size_t k = 0;
      while (k < open.size() && ++choice[k] == options[k].size()) choice[k++] = 0;
      if (k == open.size()) return false;
    }
  });
  return d;
}

std::string fresh_constant_name(const Problem& p) {
  std::set<std::string> used = p.variables();
  used.merge(p.constants());
  used.insert(p.signature.variables.begin(), p.signature.variables.end());
  for (const auto& [f, n] : p.signature.free_arity) used.insert(f);
  return fresh_name("c", used);
}

Problem with_constant(const Problem& p, const std::string& constant) {
  Problem q = p;
  auto all = p.constants();
  q.signature.constants.insert(all.begin(), all.end());
  q.signature.constants.insert(constant);
  return q;
}

Decision decide_general(const Problem& p, const DecisionOptions& opt) {
  std::string c = fresh_constant_name(p);
  Decision d = decide_multi_constant(with_constant(p, c), opt);
  d.fresh_constant = c;
  return d;
}

namespace {

int max_degree_of(const Term& t, const std::string& c) {
  int best = -1;
  const CanonicalTerm ct = canonicalize(t);
  for (const auto& m : ct.monomials())
    if (m.base.is_atom() && m.base.atom().is_constant() && m.base.atom().name == c)
      best = std::max(best, m.degree);
  return best;
}

Term abstract(const Term& t, const std::string& c, int stride, const std::vector<std::string>& names) {
  std::vector<Term> parts;
  const CanonicalTerm ct = canonicalize(t);
  for (const auto& m : ct.monomials()) {
    if (m.base.is_atom() && m.base.atom().is_constant() && m.base.atom().name == c)
      parts.push_back(Term::h_pow(Term::var(names[m.degree / stride]), m.degree % stride));
    else
      parts.push_back(m.to_term());
  }
  return canonicalize(Term::plus(std::move(parts))).to_term();
}

}  // namespace

std::vector<Substitution> generalize_witness(const Problem& p, const Substitution& s,
                                             const std::string& c) {
  int maxdeg = -1;
  for (const auto& [v, t] : s.bindings()) maxdeg = std::max(maxdeg, max_degree_of(t, c));
  if (maxdeg < 0) return {s};

  std::set<std::string> used = p.variables();
  used.merge(p.constants());
  for (const auto& [v, t] : s.bindings()) used.insert(v);
  std::vector<std::string> names;
  for (int i = 0; i <= maxdeg; ++i) {
    names.push_back(fresh_name("v", used));
    used.insert(names.back());
  }

  std::vector<Substitution> out;
  for (int stride = maxdeg + 1; stride >= 1; --stride) {
    Substitution g;
    for (const auto& [v, t] : s.bindings()) g.bind(v, abstract(t, c, stride, names));
    if (!is_asymmetric_unifier(p, g)) continue;
    if (std::none_of(out.begin(), out.end(), [&](const Substitution& o) { return o == g; }))
      out.push_back(std::move(g));
  }
  if (out.empty()) out.push_back(s);
  return out;
}

}  // namespace acunh
