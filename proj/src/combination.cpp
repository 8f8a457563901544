#include "acunh/combination.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "acunh/decision.hpp"
#include "acunh/rewrite.hpp"

namespace acunh {

int top_theory(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::atom: return 0;
    case Term::Kind::app: return 2;
    default: return 1;
  }
}

namespace {

bool pure_below(const Term& t, int theory) {
  int k = top_theory(t);
  if (k == 0) return true;
  if (k != theory) return false;
  if (t.kind() == Term::Kind::h) return pure_below(t.child(), theory);
  if (t.kind() == Term::Kind::zero) return true;
  for (const auto& c : t.children())
    if (!pure_below(c, theory)) return false;
  return true;
}

// Rebuilds t with every atom replaced by f(atom).
template <typename F>
Term map_atoms(const Term& t, F&& f) {
  switch (t.kind()) {
    case Term::Kind::zero: return t;
    case Term::Kind::atom: return f(t.atom());
    case Term::Kind::h: return Term::h(map_atoms(t.child(), f));
    case Term::Kind::plus:
    case Term::Kind::app: {
      std::vector<Term> cs;
      for (const auto& c : t.children()) cs.push_back(map_atoms(c, f));
      return t.kind() == Term::Kind::plus ? Term::plus(std::move(cs)) : Term::app(t.symbol(), std::move(cs));
    }
  }
  return t;
}

Term retag(const Term& t, const std::set<std::string>& names, bool as_constant) {
  return map_atoms(t, [&](const Atom& a) {
    if (!names.count(a.name)) return Term::atom(a);
    return as_constant ? Term::constant(a.name) : Term::var(a.name);
  });
}

class Purifier {
 public:
  explicit Purifier(const Problem& p) : used_(p.variables()) {
    used_.merge(p.constants());
    for (const auto& v : p.signature.variables) used_.insert(v);
    for (const auto& c : p.signature.constants) used_.insert(c);
    for (const auto& [f, n] : p.signature.free_arity) used_.insert(f);
  }

  std::string fresh() {
    std::string name;
    do name = "w" + std::to_string(++counter_);
    while (used_.count(name));
    used_.insert(name);
    created_.push_back(name);
    return name;
  }

  // Replaces maximal subterms of another theory than `theory` by fresh variables.
  Term abstract(const Term& t, int theory, std::vector<std::pair<std::string, Term>>& aliens) {
    int k = top_theory(t);
    if (k == 0) return t;
    if (k != theory) {
      std::string x = fresh();
      aliens.emplace_back(x, t);
      return Term::var(x);
    }
    switch (t.kind()) {
      case Term::Kind::h: return Term::h(abstract(t.child(), theory, aliens));
      case Term::Kind::plus:
      case Term::Kind::app: {
        std::vector<Term> cs;
        for (const auto& c : t.children()) cs.push_back(abstract(c, theory, aliens));
        return t.kind() == Term::Kind::plus ? Term::plus(std::move(cs)) : Term::app(t.symbol(), std::move(cs));
      }
      default: return t;
    }
  }

  const std::vector<std::string>& created() const { return created_; }

 private:
  std::set<std::string> used_;
  std::vector<std::string> created_;
  int counter_ = 0;
};

}  // namespace

bool is_pure(const Term& t) { return pure_below(t, top_theory(t)); }

int equation_theory(const Equation& e) {
  int k = std::max(top_theory(e.lhs), top_theory(e.rhs));
  return k == 0 ? 1 : k;
}

Problem purify(const Problem& p) {
  Purifier pur(p);
  Problem out = p;
  out.equations.clear();
  std::deque<Equation> work(p.equations.begin(), p.equations.end());
  while (!work.empty()) {
    Equation e = work.front();
    work.pop_front();
    if (!is_pure(e.rhs)) {
      std::vector<std::pair<std::string, Term>> aliens;
      e.rhs = pur.abstract(e.rhs, top_theory(e.rhs), aliens);
      for (auto& [x, t] : aliens) work.push_back({Term::var(x), t, e.mode});
    }
    if (!is_pure(e.lhs)) {
      std::vector<std::pair<std::string, Term>> aliens;
      e.lhs = pur.abstract(e.lhs, top_theory(e.lhs), aliens);
      for (auto& [x, s] : aliens) work.push_back({s, Term::var(x), e.mode});
    }
    int ks = top_theory(e.lhs), kt = top_theory(e.rhs);
    if (ks != 0 && kt != 0 && ks != kt) {
      Term x = Term::var(pur.fresh());
      out.equations.push_back({e.lhs, x, e.mode});
      out.equations.push_back({x, e.rhs, e.mode});
    } else {
      out.equations.push_back(std::move(e));
    }
  }
  for (const auto& v : pur.created()) out.signature.variables.insert(v);
  return out;
}

// ---------------------------------------------------------------------------
// Branches

bool Branch::less(const std::string& x, const std::string& y) const {
  auto px = std::find(ordering.begin(), ordering.end(), x);
  auto py = std::find(ordering.begin(), ordering.end(), y);
  return px < py;
}

std::string to_string(const Branch& b) {
  std::ostringstream os;
  std::map<std::string, std::vector<std::string>> classes;
  for (const auto& [v, r] : b.representative) classes[r].push_back(v);
  os << "partition {";
  bool first = true;
  for (const auto& [r, members] : classes) {
    os << (first ? "" : ", ") << '{';
    for (std::size_t i = 0; i < members.size(); ++i) os << (i ? ", " : "") << members[i];
    if (b.constants.count(r)) os << " = " << r;
    os << '}';
    first = false;
  }
  os << "} ordering ";
  for (std::size_t i = 0; i < b.ordering.size(); ++i)
    os << (i ? " < " : "") << b.ordering[i] << '[' << b.index.at(b.ordering[i]) << ']';
  return os.str();
}

void enumerate_branches(const Problem& p, const std::function<bool(const Branch&)>& f, bool prune) {
  auto var_set = p.variables();
  auto const_set = p.constants();
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  std::vector<std::string> consts(const_set.begin(), const_set.end());
  const std::size_t n = vars.size();
  if (n > 12) throw std::invalid_argument("too many variables for branch enumeration");
  std::vector<int> block(n, 0);
  bool stop = false;

  auto visit_orderings = [&](const Branch& base, const std::vector<std::string>& reps) {
    const int k = static_cast<int>(reps.size());
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (std::uint32_t mask = 0; mask < (1u << k) && !stop; ++mask) {
        auto ind = [&](int i) { return (mask >> perm[i] & 1) ? 2 : 1; };
        if (prune) {
          bool redundant = false;
          for (int i = 0; i + 1 < k && !redundant; ++i) redundant = ind(i) == ind(i + 1) && perm[i] > perm[i + 1];
          if (redundant) continue;
        }
        Branch b = base;
        for (int i = 0; i < k; ++i) {
          b.ordering.push_back(reps[perm[i]]);
          b.index[reps[perm[i]]] = ind(i);
        }
        if (!f(b)) stop = true;
      }
    } while (!stop && std::next_permutation(perm.begin(), perm.end()));
  };

  auto visit_partition = [&](int classes) {
    std::vector<std::string> first(classes);
    for (std::size_t i = 0; i < n; ++i)
      if (first[block[i]].empty()) first[block[i]] = vars[i];
    // Each class keeps its least variable or takes a distinct constant.
    std::vector<int> constant(classes, -1);
    std::vector<bool> taken(consts.size(), false);
    auto choose = [&](auto&& self, int c) -> void {
      if (stop) return;
      if (c == classes) {
        Branch base;
        std::vector<std::string> reps;
        for (int j = 0; j < classes; ++j) {
          if (constant[j] >= 0) base.constants.insert(consts[constant[j]]);
          else reps.push_back(first[j]);
        }
        for (std::size_t i = 0; i < n; ++i)
          base.representative[vars[i]] = constant[block[i]] >= 0 ? consts[constant[block[i]]] : first[block[i]];
        visit_orderings(base, reps);
        return;
      }
      constant[c] = -1;
      self(self, c + 1);
      for (std::size_t k = 0; k < consts.size() && !stop; ++k) {
        if (taken[k]) continue;
        taken[k] = true;
        constant[c] = static_cast<int>(k);
        self(self, c + 1);
        taken[k] = false;
      }
      constant[c] = -1;
    };
    choose(choose, 0);
  };

  // Restricted growth strings enumerate set partitions.
  auto assign = [&](auto&& self, std::size_t i, int classes) -> void {
    if (stop) return;
    if (i == n) {
      visit_partition(classes);
      return;
    }
    for (int c = 0; c <= classes && !stop; ++c) {
      block[i] = c;
      self(self, i + 1, std::max(classes, c + 1));
    }
  };
  if (n == 0) {
    f(Branch{});
    return;
  }
  assign(assign, 0, 0);
}

std::size_t count_branches(std::size_t variables, std::size_t constants) {
  auto factorial = [](std::size_t k) {
    std::size_t r = 1;
    for (std::size_t i = 2; i <= k; ++i) r *= i;
    return r;
  };
  auto choose = [&](std::size_t a, std::size_t b) { return factorial(a) / (factorial(b) * factorial(a - b)); };
  // Stirling numbers of the second kind, row by row.
  std::vector<std::size_t> s{1};
  for (std::size_t m = 1; m <= variables; ++m) {
    std::vector<std::size_t> next(m + 1, 0);
    for (std::size_t k = 1; k <= m; ++k) next[k] = k * (k < s.size() ? s[k] : 0) + s[k - 1];
    s = std::move(next);
  }
  std::size_t total = 0;
  for (std::size_t k = variables == 0 ? 0 : 1; k < s.size(); ++k)
    for (std::size_t j = 0; j <= std::min(k, constants); ++j) {
      std::size_t placements = choose(k, j) * factorial(constants) / factorial(constants - j);
      total += s[k] * placements * factorial(k - j) * (std::size_t{1} << (k - j));
    }
  return total;
}

// ---------------------------------------------------------------------------
// Split systems

std::optional<std::pair<PureSystem, PureSystem>> split_system(const Problem& p, const Branch& b) {
  Substitution identify;
  for (const auto& [v, r] : b.representative) identify.bind(v, b.constants.count(r) ? Term::constant(r) : Term::var(r));
  std::set<std::string> of[3];
  for (const auto& [r, i] : b.index) of[i].insert(r);
  auto originals = p.constants();

  PureSystem sys[3];
  for (int i : {1, 2}) {
    sys[i].theory = i;
    sys[i].variables = of[i];
    sys[i].foreign = of[3 - i];
    sys[i].constants = originals;
    sys[i].constants.insert(of[3 - i].begin(), of[3 - i].end());
    for (const auto& x : of[i])
      for (const auto& c : of[3 - i])
        if (b.less(x, c)) sys[i].lcr.push_back({c, x});
  }
  for (const auto& e : p.equations) {
    Equation id{apply(e.lhs, identify), apply(e.rhs, identify), e.mode};
    if (id.mode == Mode::asymmetric && !is_irreducible_r2_ach(id.rhs)) return std::nullopt;
    int i = equation_theory(id);
    sys[i].equations.push_back(
        {retag(id.lhs, sys[i].foreign, true), retag(id.rhs, sys[i].foreign, true), id.mode});
  }
  return std::pair{std::move(sys[1]), std::move(sys[2])};
}

Problem build_constrained_acunh(const PureSystem& sys, const Branch&) {
  Problem q;
  q.equations = sys.equations;
  std::set<std::string> used;
  for (const auto& e : sys.equations) {
    used.merge(variables_of(e.lhs));
    used.merge(variables_of(e.rhs));
  }
  q.signature.constants = sys.constants;
  q.signature.variables = used;
  for (const auto& r : sys.lcr)
    if (used.count(r.variable)) q.restrictions.push_back(r);
  for (auto x = used.begin(); x != used.end(); ++x)
    for (auto y = std::next(x); y != used.end(); ++y) q.disequalities.push_back({*x, Atom{AtomKind::variable, *y}});
  for (const auto& x : used)
    for (const auto& c : sys.foreign) q.disequalities.push_back({x, Atom{AtomKind::constant, c}});
  return q;
}

std::optional<Substitution> syntactic_unify_lcr(const PureSystem& sys) {
  Substitution sigma;
  std::deque<std::pair<Term, Term>> work;
  for (const auto& e : sys.equations) work.emplace_back(e.lhs, e.rhs);
  auto own = [&](const Term& t) { return t.is_variable() && sys.variables.count(t.atom().name) > 0; };
  while (!work.empty()) {
    Term s = apply(work.front().first, sigma);
    Term t = apply(work.front().second, sigma);
    work.pop_front();
    if (s == t) continue;
    if (!own(s) && own(t)) std::swap(s, t);
    if (own(s)) {
      const std::string& x = s.atom().name;
      if (variables_of(t).count(x)) return std::nullopt;
      Substitution step{{x, t}};
      Substitution next;
      for (const auto& [v, img] : sigma.bindings()) next.bind(v, apply(img, step));
      next.bind(x, t);
      sigma = std::move(next);
      continue;
    }
    if (s.kind() != Term::Kind::app || t.kind() != Term::Kind::app || s.symbol() != t.symbol() ||
        s.children().size() != t.children().size())
      return std::nullopt;
    for (std::size_t i = 0; i < s.children().size(); ++i) work.emplace_back(s.children()[i], t.children()[i]);
  }
  for (const auto& r : sys.lcr)
    if (constants_of(sigma.image(r.variable)).count(r.constant)) return std::nullopt;
  for (auto x = sys.variables.begin(); x != sys.variables.end(); ++x) {
    Term tx = sigma.image(*x);
    if (tx.is_atom() && sys.foreign.count(tx.atom().name)) return std::nullopt;
    for (auto y = std::next(x); y != sys.variables.end(); ++y)
      if (tx == sigma.image(*y)) return std::nullopt;
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// Decision and solving

namespace {

void require_supported(const Problem& p) {
  if (!p.restrictions.empty() || !p.disequalities.empty())
    throw std::invalid_argument("restrictions and disequalities are supported for pure ACUNh problems only");
}

// Back-substitution along the ordering: each representative's image only
// mentions other-index representatives that precede it.
Substitution assemble(const Branch& b, const Substitution& s1, const Substitution& s2,
                      const std::set<std::string>& originals) {
  Substitution done;
  for (const auto& r : b.ordering) {
    const Substitution& own = b.index.at(r) == 1 ? s1 : s2;
    done.bind(r, apply(own.image(r), done));
  }
  // Leftover variables are renamed v, v1, ... in order of appearance so that
  // renamed variants coincide.
  std::map<std::string, std::string> rename;
  std::set<std::string> taken = originals;
  Substitution out;
  for (const auto& v : originals) {
    auto it = b.representative.find(v);
    std::string r = it == b.representative.end() ? v : it->second;
    Term t = b.constants.count(r) ? Term::constant(r) : canonicalize(done.image(r)).to_term();
    out.bind(v, map_atoms(t, [&](const Atom& a) {
      if (a.is_constant() || originals.count(a.name)) return Term::atom(a);
      auto [r, inserted] = rename.emplace(a.name, "");
      if (inserted) {
        r->second = fresh_name("v", taken);
        taken.insert(r->second);
      }
      return Term::var(r->second);
    }));
  }
  return out;
}

}  // namespace

CombinedDecision decide_combined(const Problem& p) {
  CombinedDecision out;
  if (!p.has_free_symbols()) {
    out.sat = decide_general(p).sat;
    return out;
  }
  require_supported(p);
  Problem pure = purify(p);
  std::map<std::string, bool> memo;
  enumerate_branches(
      pure,
      [&](const Branch& b) {
        ++out.stats.branches;
        auto split = split_system(pure, b);
        if (!split) return true;
        auto& [s1, s2] = *split;
        if (!syntactic_unify_lcr(s2)) return true;
        ++out.stats.syntactic_ok;
        bool sat = true;
        if (!s1.equations.empty()) {
          Problem q = build_constrained_acunh(s1, b);
          auto [it, fresh] = memo.emplace(to_string(q), false);
          if (fresh) {
            ++out.stats.acunh_calls;
            it->second = decide_general(q).sat;
          }
          sat = it->second;
        }
        if (!sat) return true;
        out.sat = true;
        out.branch = b;
        return false;
      },
      true);
  return out;
}

CombinationStats solve_combined(const Problem& p, const EnumerationOptions& opt,
                                const std::function<bool(const Substitution&)>& sink) {
  CombinationStats stats;
  if (!p.has_free_symbols()) {
    auto es = enumerate_unifiers(p, opt, sink);
    stats.emitted = es.emitted;
    stats.bound_exceeded = es.bound_exceeded;
    stats.acunh_calls = 1;
    return stats;
  }
  require_supported(p);
  Problem pure = purify(p);
  const auto originals = p.variables();
  std::set<std::string> names = pure.variables();
  names.merge(pure.constants());

  std::map<std::string, std::vector<Substitution>> memo;
  std::set<std::string> seen;
  bool stop = false;
  enumerate_branches(
      pure,
      [&](const Branch& b) {
        ++stats.branches;
        auto split = split_system(pure, b);
        if (!split) return true;
        auto& [s1, s2] = *split;
        auto sigma2 = syntactic_unify_lcr(s2);
        if (!sigma2) return true;
        ++stats.syntactic_ok;
        std::vector<Substitution> ones{Substitution{}};
        if (!s1.equations.empty()) {
          Problem q = build_constrained_acunh(s1, b);
          auto [it, fresh] = memo.emplace(to_string(q), std::vector<Substitution>{});
          if (fresh) {
            ++stats.acunh_calls;
            EnumerationOptions sub = opt;
            auto es = enumerate_unifiers(q, sub, [&](const Substitution& s) {
              it->second.push_back(s);
              return true;
            });
            stats.bound_exceeded = stats.bound_exceeded || es.bound_exceeded;
          }
          ones = it->second;
        }
        Substitution two;
        for (const auto& [v, t] : sigma2->bindings()) two.bind(v, retag(t, s2.foreign, false));
        for (const auto& one : ones) {
          // Variables introduced by the ACUNh side get names unused in the
          // purified problem; foreign constants become variables again.
          std::map<std::string, std::string> rename;
          std::set<std::string> taken = names;
          Substitution back;
          for (const auto& [v, t] : one.bindings()) {
            back.bind(v, map_atoms(t, [&](const Atom& a) {
              if (a.is_constant()) return s1.foreign.count(a.name) ? Term::var(a.name) : Term::atom(a);
              if (s1.variables.count(a.name)) return Term::atom(a);
              auto [r, inserted] = rename.emplace(a.name, "");
              if (inserted) {
                r->second = fresh_name("v", taken);
                taken.insert(r->second);
              }
              return Term::var(r->second);
            }));
          }
          Substitution combined = assemble(b, back, two, originals);
          if (!is_asymmetric_unifier(p, combined)) {
            ++stats.unverified;
            continue;
          }
          if (!seen.insert(to_string(combined)).second) continue;
          ++stats.emitted;
          if (!sink(combined) || stats.emitted >= opt.max_results) {
            stop = true;
            return false;
          }
        }
        return !stop;
      },
      true);
  return stats;
}

}  // namespace acunh
