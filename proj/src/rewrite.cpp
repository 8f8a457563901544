#include "acunh/rewrite.hpp"

#include <algorithm>
#include <map>

namespace acunh {

namespace {

void collect_rh(const Term& t, int shift, std::vector<Monomial>& out) {
  switch (t.kind()) {
    case Term::Kind::zero:
    case Term::Kind::atom:
      out.push_back({shift, t});
      return;
    case Term::Kind::h:
      collect_rh(t.child(), shift + 1, out);
      return;
    case Term::Kind::plus:
      for (const auto& c : t.children()) collect_rh(c, shift, out);
      return;
    case Term::Kind::app: {
      std::vector<Term> args;
      for (const auto& c : t.children()) args.push_back(normalize_rh(c));
      out.push_back({shift, Term::app(t.symbol(), std::move(args))});
      return;
    }
  }
}

Term sum_of(const std::vector<Monomial>& ms) {
  std::vector<Term> parts;
  for (const auto& m : ms) parts.push_back(m.to_term());
  return Term::plus(std::move(parts));
}

bool summands_irreducible(const std::vector<Monomial>& ms) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    if (m.base.is_zero() && (m.degree > 0 || ms.size() > 1)) return false;  // h(0), x+0
    if (i > 0 && ms[i - 1] == m) return false;                              // x+x, x+(y+x)
    if (m.base.kind() == Term::Kind::app)
      for (const auto& arg : m.base.children())
        if (!summands_irreducible(rh_summands(arg))) return false;
  }
  return true;
}

}  // namespace

std::vector<Monomial> rh_summands(const Term& t) {
  std::vector<Monomial> out;
  collect_rh(t, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

Term normalize_rh(const Term& t) { return sum_of(rh_summands(t)); }

bool equal_mod_ach(const Term& s, const Term& t) { return rh_summands(s) == rh_summands(t); }

bool is_irreducible_r2_ach(const Term& t) { return summands_irreducible(rh_summands(t)); }

bool is_asymmetric_unifier(const Problem& p, const Substitution& s) {
  for (const auto& e : p.equations) {
    if (!equal_mod_acunh(apply(e.lhs, s), apply(e.rhs, s))) return false;
    if (e.mode == Mode::asymmetric &&
        !is_irreducible_r2_ach(apply(canonicalize(e.rhs).to_term(), s)))
      return false;
  }
  for (const auto& r : p.restrictions)
    if (constants_of(canonicalize(s.image(r.variable)).to_term()).count(r.constant)) return false;
  for (const auto& d : p.disequalities) {
    Term rhs = d.rhs.is_variable() ? s.image(d.rhs.name) : Term::atom(d.rhs);
    if (equal_mod_acunh(s.image(d.variable), rhs)) return false;
  }
  return true;
}

std::int64_t termination_weight(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::zero:
      return 1;
    case Term::Kind::atom:
      return 2;
    case Term::Kind::h:
      return 2 * termination_weight(t.child());
    case Term::Kind::plus: {
      std::int64_t w = 0;
      for (const auto& c : t.children()) w += termination_weight(c);
      return w;
    }
    case Term::Kind::app: {
      std::int64_t w = 2;
      for (const auto& c : t.children()) w += termination_weight(c);
      return w;
    }
  }
  return 1;
}

MatchResult ach_match_bruteforce(const Term& pattern, const Term& subject, std::size_t bound) {
  const auto pat = rh_summands(pattern);
  const auto sub = rh_summands(subject);
  const std::size_t k = pat.size(), n = sub.size();
  MatchResult result;
  if (n == 0 || k == 0) return result;

  std::vector<std::size_t> assign(n, 0);
  std::vector<std::vector<Monomial>> groups(k);
  for (;;) {
    if (++result.candidates > bound) {
      result.status = MatchResult::Status::bound_exceeded;
      return result;
    }
    for (auto& g : groups) g.clear();
    for (std::size_t i = 0; i < n; ++i) groups[assign[i]].push_back(sub[i]);

    bool ok = true;
    std::map<std::string, std::vector<Monomial>> binding;
    for (std::size_t j = 0; j < k && ok; ++j) {
      const auto& pm = pat[j];
      const auto& g = groups[j];
      if (!pm.base.is_variable()) {
        ok = g.size() == 1 && g.front() == pm;
        continue;
      }
      if (g.empty()) {
        ok = false;
        continue;
      }
      std::vector<Monomial> peeled;
      for (const auto& m : g) {
        if (m.degree < pm.degree) {
          ok = false;
          break;
        }
        peeled.push_back({m.degree - pm.degree, m.base});
      }
      if (!ok) break;
      std::sort(peeled.begin(), peeled.end());
      auto [it, inserted] = binding.emplace(pm.base.atom().name, peeled);
      if (!inserted && it->second != peeled) ok = false;
    }
    if (ok) {
      result.status = MatchResult::Status::found;
      for (const auto& [var, ms] : binding) result.match.bind(var, sum_of(ms));
      return result;
    }

    // Next assignment, first subject summand varying slowest.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++assign[pos] < k) break;
      assign[pos] = 0;
      if (pos == 0) return result;
    }
  }
}

const std::vector<RewriteRule>& r2_rules() {
  static const std::vector<RewriteRule> rules = [] {
    Term x = Term::var("x"), y = Term::var("y");
    return std::vector<RewriteRule>{
        {Term::plus({x, x}), Term::zero()},
        {Term::plus({x, Term::zero()}), x},
        {Term::plus({x, Term::plus({y, x})}), y},
        {Term::h(Term::zero()), Term::zero()},
    };
  }();
  return rules;
}

std::vector<Term> r2_ach_successors(const Term& t, std::size_t bound) {
  std::vector<Term> out;
  for (const auto& rule : r2_rules()) {
    auto m = ach_match_bruteforce(rule.lhs, t, bound);
    if (m.found()) out.push_back(apply(rule.rhs, m.match));
  }
  switch (t.kind()) {
    case Term::Kind::zero:
    case Term::Kind::atom:
      break;
    case Term::Kind::h:
      for (auto& s : r2_ach_successors(t.child(), bound)) out.push_back(Term::h(std::move(s)));
      break;
    case Term::Kind::plus:
    case Term::Kind::app: {
      auto kids = t.children();
      for (std::size_t i = 0; i < kids.size(); ++i) {
        for (auto& s : r2_ach_successors(kids[i], bound)) {
          std::vector<Term> next(kids.begin(), kids.end());
          next[i] = std::move(s);
          out.push_back(t.kind() == Term::Kind::plus ? Term::plus(std::move(next))
                                                     : Term::app(t.symbol(), std::move(next)));
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace acunh
