#include "acunh/enumeration.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "acunh/decision.hpp"
#include "acunh/rewrite.hpp"

namespace acunh {

Term loseh(const Term& t) {
  std::vector<Term> parts;
  for (const auto& m : mset(t))
    if (m.degree > 0) parts.push_back(Term::h_pow(m.base, m.degree - 1));
  return Term::plus(std::move(parts));
}

Substitution to_substitution(const LayerSubstitution& layer) {
  Substitution s;
  for (const auto& [x, img] : layer) {
    std::vector<Term> parts;
    for (const auto& c : img.constants) parts.push_back(Term::constant(c));
    if (img.shift) parts.push_back(Term::h(Term::var(x)));
    s.bind(x, Term::plus(std::move(parts)));
  }
  return s;
}

std::string to_string(const LayerSubstitution& layer) { return to_string(to_substitution(layer)); }

Substitution ZeroSubstitution::to_substitution() const {
  Substitution s;
  for (const auto& x : zeroed) s.bind(x, Term::zero());
  return s;
}

namespace {

// Nonempty subsets of the constants plus h(x): bit k is constants[k], the top
// bit is h(x).
LayerImage image_of(std::uint32_t mask, const std::vector<std::string>& constants) {
  LayerImage img;
  for (std::size_t k = 0; k < constants.size(); ++k)
    if (mask >> k & 1) img.constants.insert(constants[k]);
  img.shift = mask >> constants.size() & 1;
  return img;
}

std::uint32_t mask_of(const LayerImage& img, const std::vector<std::string>& constants) {
  std::uint32_t mask = 0;
  for (std::size_t k = 0; k < constants.size(); ++k)
    if (img.constants.count(constants[k])) mask |= 1u << k;
  if (img.shift) mask |= 1u << constants.size();
  return mask;
}

// Calls f with every assignment of nonempty images to `vars`.
template <typename F>
void for_each_letter(const std::vector<std::string>& vars, const std::vector<std::string>& constants,
                     const std::vector<std::uint32_t>& forbidden, F&& f) {
  const std::uint32_t limit = 1u << (constants.size() + 1);
  std::vector<std::uint32_t> masks(vars.size(), 1);
  auto valid = [&](std::size_t i) { return (masks[i] & forbidden[i]) == 0; };
  // Advance position i to its next allowed mask; false when exhausted.
  auto settle = [&](std::size_t i) {
    while (masks[i] < limit && !valid(i)) ++masks[i];
    return masks[i] < limit;
  };
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (!settle(i)) return;
  for (;;) {
    f(masks);
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      ++masks[i];
      if (settle(i)) break;
      masks[i] = 1;
      settle(i);
    }
    if (i == vars.size()) return;
  }
}

std::vector<Monomial> cancel_pairs(std::vector<Monomial> ms) {
  std::sort(ms.begin(), ms.end());
  std::vector<Monomial> out;
  for (auto& m : ms) {
    if (!out.empty() && out.back() == m) out.pop_back();
    else out.push_back(std::move(m));
  }
  return out;
}

bool has_duplicates(const std::vector<Monomial>& sorted) {
  return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

// Applies a letter; nullopt when a variable is unbound.
std::optional<std::vector<Monomial>> apply_letter(const std::vector<Monomial>& ms,
                                                  const LayerSubstitution& letter) {
  std::vector<Monomial> out;
  for (const auto& m : ms) {
    if (!m.base.is_variable()) {
      out.push_back(m);
      continue;
    }
    auto it = letter.find(m.base.atom().name);
    if (it == letter.end()) return std::nullopt;
    for (const auto& c : it->second.constants) out.push_back({m.degree, Term::constant(c)});
    if (it->second.shift) out.push_back({m.degree + 1, m.base});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Monomial> degree_zero(const std::vector<Monomial>& sorted) {
  std::vector<Monomial> out;
  for (const auto& m : sorted)
    if (m.degree == 0) out.push_back(m);
  return out;
}

std::vector<Monomial> lowered(const std::vector<Monomial>& sorted) {
  std::vector<Monomial> out;
  for (const auto& m : sorted)
    if (m.degree > 0) out.push_back({m.degree - 1, m.base});
  return out;
}

std::string sum_string(const std::vector<Monomial>& ms) {
  std::vector<Term> parts;
  for (const auto& m : ms) parts.push_back(m.to_term());
  return to_string(Term::plus(std::move(parts)));
}

}  // namespace

std::vector<LayerSubstitution> layer_alphabet(const Problem& p) {
  auto var_set = p.variables();
  auto const_set = p.constants();
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  std::vector<std::string> constants(const_set.begin(), const_set.end());
  if (vars.size() > 16) throw std::invalid_argument("too many variables for the layer alphabet");
  std::vector<LayerSubstitution> out;
  for (std::uint32_t dom = 0; dom < (1u << vars.size()); ++dom) {
    std::vector<std::string> d;
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (dom >> i & 1) d.push_back(vars[i]);
    if (d.empty()) {
      out.emplace_back();
      continue;
    }
    std::vector<std::uint32_t> none(d.size(), 0);
    for_each_letter(d, constants, none, [&](const std::vector<std::uint32_t>& masks) {
      LayerSubstitution l;
      for (std::size_t i = 0; i < d.size(); ++i) l[d[i]] = image_of(masks[i], constants);
      out.push_back(std::move(l));
    });
  }
  return out;
}

LayerDecomposition layer_decompose(const Substitution& theta) {
  LayerDecomposition d;
  std::map<std::string, CanonicalTerm> value;
  int m = -1;
  for (const auto& [x, t] : theta.bindings()) {
    CanonicalTerm c = canonicalize(t);
    for (const auto& mono : c.monomials())
      if (!mono.base.is_atom() || !mono.base.atom().is_constant())
        throw std::invalid_argument("layer_decompose needs a ground substitution");
    if (c.is_zero()) d.zeta.zeroed.insert(x);
    m = std::max(m, c.degree());
    value.emplace(x, std::move(c));
  }
  for (int i = 0; i <= m; ++i) {
    LayerSubstitution layer;
    for (const auto& [x, c] : value) {
      if (c.degree() < i) continue;
      LayerImage img;
      for (const auto& mono : c.monomials())
        if (mono.degree == i) img.constants.insert(mono.base.atom().name);
      img.shift = c.degree() > i;
      layer[x] = std::move(img);
    }
    d.layers.push_back(std::move(layer));
  }
  return d;
}

Substitution compose_layers(const LayerDecomposition& d) {
  Substitution s = d.zeta.to_substitution();
  for (const auto& layer : d.layers) s = compose(s, to_substitution(layer));
  return s;
}

// ---------------------------------------------------------------------------
// Residual equations

std::set<std::string> Residual::variables() const {
  std::set<std::string> out;
  for (const auto* side : {&lhs, &rhs})
    for (const auto& m : *side)
      if (m.base.is_variable()) out.insert(m.base.atom().name);
  return out;
}

Residual make_residual(const Equation& e) {
  Residual r;
  r.mode = e.mode;
  r.lhs = canonicalize(e.lhs).monomials();
  if (e.mode == Mode::asymmetric) {
    r.rhs = mset(e.rhs);
    // Only Rh is applied to the right side; callers pass normalized sides.
    if (has_duplicates(r.rhs)) r.rhs = canonicalize(e.rhs).monomials();
  } else {
    r.rhs = canonicalize(e.rhs).monomials();
  }
  return r;
}

std::string to_string(const Residual& r) {
  return sum_string(r.lhs) + (r.mode == Mode::asymmetric ? " =^ " : " = ") + sum_string(r.rhs);
}

std::optional<Residual> residual_step(const Residual& r, const LayerSubstitution& letter) {
  auto s = apply_letter(r.lhs, letter);
  auto t = apply_letter(r.rhs, letter);
  if (!s || !t) return std::nullopt;
  *s = cancel_pairs(std::move(*s));
  if (r.mode == Mode::symmetric) *t = cancel_pairs(std::move(*t));
  else if (has_duplicates(*t)) return std::nullopt;
  if (degree_zero(*s) != degree_zero(*t)) return std::nullopt;
  return Residual{lowered(*s), lowered(*t), r.mode};
}

// ---------------------------------------------------------------------------
// Single-equation automaton

std::optional<int> SolutionAutomaton::find(const Residual& r) const {
  auto it = std::find(states.begin(), states.end(), r);
  if (it == states.end()) return std::nullopt;
  return static_cast<int>(it - states.begin());
}

SolutionAutomaton build_solution_automaton(const Equation& eq, const Problem& p, const std::string& fresh) {
  auto const_set = p.constants();
  std::vector<std::string> constants(const_set.begin(), const_set.end());
  if (!fresh.empty()) constants.push_back(fresh);
  SolutionAutomaton a;
  std::map<Residual, int> index;
  std::deque<int> queue;
  auto intern = [&](const Residual& r) {
    auto [it, inserted] = index.emplace(r, static_cast<int>(a.states.size()));
    if (inserted) {
      a.states.push_back(r);
      a.edges.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };
  a.start = intern(make_residual(eq));
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    auto vs = a.states[s].variables();
    if (vs.empty()) continue;
    std::vector<std::string> vars(vs.begin(), vs.end());
    std::vector<std::uint32_t> none(vars.size(), 0);
    for_each_letter(vars, constants, none, [&](const std::vector<std::uint32_t>& masks) {
      LayerSubstitution letter;
      for (std::size_t i = 0; i < vars.size(); ++i) letter[vars[i]] = image_of(masks[i], constants);
      auto next = residual_step(a.states[s], letter);
      if (!next) return;
      int t = intern(*next);
      a.edges[s].push_back({std::move(letter), t});
    });
  }
  return a;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const SolutionAutomaton& a, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=LR;\n  init [shape=point];\n";
  for (std::size_t s = 0; s < a.states.size(); ++s)
    os << "  s" << s << " [label=\"" << dot_escape(to_string(a.states[s])) << "\", shape="
       << (a.accepting(static_cast<int>(s)) ? "doublecircle" : "box") << "];\n";
  os << "  init -> s" << a.start << ";\n";
  for (std::size_t s = 0; s < a.states.size(); ++s) {
    std::map<int, std::vector<std::string>> grouped;
    for (const auto& e : a.edges[s]) grouped[e.target].push_back(to_string(e.letter));
    for (const auto& [t, labels] : grouped) {
      os << "  s" << s << " -> s" << t << " [label=\"";
      for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "\\n" : "") << dot_escape(labels[i]);
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Side automata

bool SideAutomaton::accepting(int state) const {
  return kind == Kind::var_var_diseq ? state == 1 : state >= 0;
}

int SideAutomaton::step(int state, const LayerSubstitution& letter) const {
  switch (kind) {
    case Kind::lcr:
      for (const auto& r : restrictions) {
        auto it = letter.find(r.variable);
        if (it != letter.end() && it->second.constants.count(r.constant)) return -1;
      }
      return 0;
    case Kind::var_const_diseq:
      if (state == 1) return 1;
      for (const auto& d : disequalities) {
        auto it = letter.find(d.variable);
        if (it != letter.end() && !it->second.shift && it->second.constants == std::set<std::string>{d.rhs.name})
          return -1;
      }
      return 1;
    case Kind::var_var_diseq: {
      if (state == 1) return 1;
      const auto& d = disequalities.front();
      auto x = letter.find(d.variable), y = letter.find(d.rhs.name);
      if (x == letter.end() || y == letter.end()) return -1;
      if (x->second == y->second) return x->second.shift ? 0 : -1;
      return 1;
    }
  }
  return -1;
}

std::vector<SideAutomaton> build_side_automata(const Problem& p) {
  std::vector<SideAutomaton> out;
  if (!p.restrictions.empty()) out.push_back({SideAutomaton::Kind::lcr, p.restrictions, {}});
  std::vector<Disequality> vc;
  for (const auto& d : p.disequalities) {
    if (d.rhs.is_constant()) vc.push_back(d);
    else out.push_back({SideAutomaton::Kind::var_var_diseq, {}, {d}});
  }
  if (!vc.empty()) out.push_back({SideAutomaton::Kind::var_const_diseq, {}, vc});
  return out;
}

// ---------------------------------------------------------------------------
// Product

bool ProductGraph::accepting(int s) const {
  const auto& st = states[s];
  for (const auto& r : st.residuals)
    if (!r.accepting()) return false;
  const auto& sides = branches[st.branch].sides;
  for (std::size_t i = 0; i < sides.size(); ++i)
    if (!sides[i].accepting(st.side_states[i])) return false;
  return true;
}

LayerSubstitution ProductGraph::letter(int s, const Edge& e) const {
  LayerSubstitution l;
  const auto& live = states[s].live;
  for (std::size_t i = 0; i < live.size(); ++i) l[live[i]] = image_of(e.images[i], constants);
  return l;
}

std::string ProductGraph::describe(int s) const {
  const auto& st = states[s];
  std::ostringstream os;
  for (std::size_t i = 0; i < st.residuals.size(); ++i) os << (i ? "; " : "") << to_string(st.residuals[i]);
  if (st.residuals.empty()) os << "(no equations)";
  os << " [live:";
  for (const auto& v : st.live) os << ' ' << v;
  os << ']';
  if (!branches[st.branch].zeta.zeroed.empty()) {
    os << " [zero:";
    for (const auto& v : branches[st.branch].zeta.zeroed) os << ' ' << v;
    os << ']';
  }
  if (!st.side_states.empty()) {
    os << " [sides:";
    for (int q : st.side_states) os << ' ' << q;
    os << ']';
  }
  return os.str();
}

namespace {

// Zero substitutions that keep every asymmetric right side irreducible, with
// the side automata that remain after resolving zeroed disequalities.
std::vector<ProductGraph::Branch> admissible_branches(const Problem& p) {
  auto var_set = p.variables();
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  if (vars.size() > 20) throw std::invalid_argument("too many variables for zero-substitution enumeration");
  // Variables that may not be zeroed.
  std::set<std::string> pinned;
  for (const auto& e : p.equations) {
    if (e.mode != Mode::asymmetric) continue;
    CanonicalTerm rhs = canonicalize(e.rhs);
    const auto& ms = rhs.monomials();
    if (ms.size() == 1 && ms[0].degree == 0) continue;
    for (const auto& m : ms)
      if (m.base.is_variable()) pinned.insert(m.base.atom().name);
  }
  std::vector<ProductGraph::Branch> out;
  for (std::uint32_t z = 0; z < (1u << vars.size()); ++z) {
    ZeroSubstitution zeta;
    bool ok = true;
    for (std::size_t i = 0; i < vars.size() && ok; ++i)
      if (z >> i & 1) {
        if (pinned.count(vars[i])) ok = false;
        zeta.zeroed.insert(vars[i]);
      }
    if (!ok) continue;
    Problem q;
    q.restrictions = p.restrictions;
    for (const auto& d : p.disequalities) {
      bool x0 = zeta.zeroed.count(d.variable) > 0;
      if (d.rhs.is_constant()) {
        if (!x0) q.disequalities.push_back(d);
        continue;
      }
      bool y0 = zeta.zeroed.count(d.rhs.name) > 0;
      if (x0 && y0) ok = false;
      else if (!x0 && !y0) q.disequalities.push_back(d);
    }
    if (!ok) continue;
    out.push_back({std::move(zeta), build_side_automata(q)});
  }
  return out;
}

}  // namespace

ProductGraph explore_product(const Problem& p, std::size_t max_states) {
  if (p.has_free_symbols()) throw std::invalid_argument("enumeration handles pure ACUNh problems only");
  ProductGraph g;
  auto const_set = p.constants();
  g.constants.assign(const_set.begin(), const_set.end());
  g.fresh = fresh_constant_name(p);
  g.constants.push_back(g.fresh);
  if (g.constants.size() > 24) throw std::invalid_argument("too many constants");
  g.branches = admissible_branches(p);
  auto var_set = p.variables();

  std::map<ProductGraph::State, int> index;
  std::deque<int> queue;
  auto intern = [&](ProductGraph::State st) {
    auto [it, inserted] = index.emplace(st, static_cast<int>(g.states.size()));
    if (inserted) {
      g.states.push_back(std::move(st));
      g.edges.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };

  for (std::size_t b = 0; b < g.branches.size(); ++b) {
    const auto& br = g.branches[b];
    Substitution zeta = br.zeta.to_substitution();
    ProductGraph::State st;
    st.branch = static_cast<int>(b);
    for (const auto& v : var_set)
      if (!br.zeta.zeroed.count(v)) st.live.push_back(v);
    for (const auto& e : p.equations)
      st.residuals.push_back(make_residual({canonicalize(apply(e.lhs, zeta)).to_term(),
                                            canonicalize(apply(canonicalize(e.rhs).to_term(), zeta)).to_term(),
                                            e.mode}));
    for (const auto& side : br.sides) st.side_states.push_back(side.start());
    g.starts.push_back(intern(std::move(st)));
  }

  while (!queue.empty()) {
    if (g.states.size() > max_states) {
      g.complete = false;
      break;
    }
    int s = queue.front();
    queue.pop_front();
    const auto cur = g.states[s];
    if (cur.live.empty()) continue;
    const auto& sides = g.branches[cur.branch].sides;

    // Restrictions prune images before letters are assembled.
    std::vector<std::uint32_t> forbidden(cur.live.size(), 0);
    for (const auto& side : sides)
      if (side.kind == SideAutomaton::Kind::lcr)
        for (const auto& r : side.restrictions)
          for (std::size_t i = 0; i < cur.live.size(); ++i)
            if (cur.live[i] == r.variable)
              for (std::size_t k = 0; k < g.constants.size(); ++k)
                if (g.constants[k] == r.constant) forbidden[i] |= 1u << k;

    const std::uint32_t shift_bit = 1u << g.constants.size();
    for_each_letter(cur.live, g.constants, forbidden, [&](const std::vector<std::uint32_t>& masks) {
      LayerSubstitution letter;
      for (std::size_t i = 0; i < cur.live.size(); ++i) letter[cur.live[i]] = image_of(masks[i], g.constants);
      ProductGraph::State next;
      next.branch = cur.branch;
      for (std::size_t i = 0; i < cur.live.size(); ++i)
        if (masks[i] & shift_bit) next.live.push_back(cur.live[i]);
      for (const auto& r : cur.residuals) {
        auto n = residual_step(r, letter);
        if (!n) return;
        next.residuals.push_back(std::move(*n));
      }
      for (std::size_t i = 0; i < sides.size(); ++i) {
        int q = sides[i].step(cur.side_states[i], letter);
        if (q < 0) return;
        next.side_states.push_back(q);
      }
      int t = intern(std::move(next));
      g.edges[s].push_back({masks, t});
    });
  }
  return g;
}

std::vector<bool> useful_states(const ProductGraph& g) {
  const std::size_t n = g.states.size();
  std::vector<std::vector<int>> rev(n);
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& e : g.edges[s]) rev[e.target].push_back(static_cast<int>(s));
  std::vector<bool> forward(n, false), backward(n, false);
  std::deque<int> q(g.starts.begin(), g.starts.end());
  for (int s : g.starts) forward[s] = true;
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (const auto& e : g.edges[s])
      if (!forward[e.target]) {
        forward[e.target] = true;
        q.push_back(e.target);
      }
  }
  for (std::size_t s = 0; s < n; ++s)
    if (g.accepting(static_cast<int>(s))) {
      backward[s] = true;
      q.push_back(static_cast<int>(s));
    }
  while (!q.empty()) {
    int s = q.front();
    q.pop_front();
    for (int r : rev[s])
      if (!backward[r]) {
        backward[r] = true;
        q.push_back(r);
      }
  }
  std::vector<bool> out(n);
  for (std::size_t s = 0; s < n; ++s) out[s] = forward[s] && backward[s];
  return out;
}

bool product_accepts(const ProductGraph& g, const LayerDecomposition& d) {
  for (std::size_t b = 0; b < g.branches.size(); ++b) {
    if (g.branches[b].zeta.zeroed != d.zeta.zeroed) continue;
    int s = g.starts[b];
    bool alive = true;
    for (const auto& layer : d.layers) {
      const auto& live = g.states[s].live;
      if (layer.size() != live.size()) return false;
      std::vector<std::uint32_t> masks;
      for (const auto& v : live) {
        auto it = layer.find(v);
        if (it == layer.end()) return false;
        masks.push_back(mask_of(it->second, g.constants));
      }
      auto e = std::find_if(g.edges[s].begin(), g.edges[s].end(),
                            [&](const ProductGraph::Edge& e) { return e.images == masks; });
      if (e == g.edges[s].end()) {
        alive = false;
        break;
      }
      s = e->target;
    }
    return alive && g.accepting(s);
  }
  return false;
}

std::vector<Substitution> unifiers_from_layers(const Problem& p, const ProductGraph& g, const LayerDecomposition& d) {
  Substitution s = compose_layers(d);
  Substitution restricted;
  bool has_fresh = false;
  for (const auto& v : p.variables()) {
    Term img = canonicalize(s.image(v)).to_term();
    has_fresh = has_fresh || constants_of(img).count(g.fresh);
    restricted.bind(v, img);
  }
  if (!has_fresh) {
    if (is_asymmetric_unifier(p, restricted)) return {restricted};
    return {};
  }
  // Abstractions returned by generalize_witness are verified already.
  std::vector<Substitution> out;
  for (auto& c : generalize_witness(p, restricted, g.fresh)) {
    bool mentions_fresh = false;
    for (const auto& [v, t] : c.bindings()) mentions_fresh = mentions_fresh || constants_of(t).count(g.fresh);
    if (!mentions_fresh) out.push_back(std::move(c));
  }
  return out;
}

EnumerationStats enumerate_unifiers(const Problem& p, const EnumerationOptions& opt,
                                    const std::function<bool(const Substitution&)>& sink) {
  EnumerationStats stats;
  ProductGraph g = explore_product(p, opt.max_states);
  stats.bound_exceeded = !g.complete;
  auto useful = useful_states(g);
  std::set<std::string> seen;
  bool stop = false;

  std::vector<std::pair<int, const ProductGraph::Edge*>> path;
  auto emit = [&](int branch) {
    ++stats.strings;
    LayerDecomposition d{g.branches[branch].zeta, {}};
    for (const auto& [from, e] : path) d.layers.push_back(g.letter(from, *e));
    auto found = unifiers_from_layers(p, g, d);
    if (found.empty()) ++stats.rejected;
    for (const auto& c : found) {
      if (!seen.insert(to_string(c)).second) continue;
      ++stats.emitted;
      if (!sink(c) || stats.emitted >= opt.max_results) {
        stop = true;
        return;
      }
    }
  };

  auto dfs = [&](auto&& self, int s, int remaining, int branch) -> void {
    if (stop) return;
    if (remaining == 0) {
      if (g.accepting(s)) emit(branch);
      return;
    }
    for (const auto& e : g.edges[s]) {
      if (!useful[e.target]) continue;
      path.emplace_back(s, &e);
      self(self, e.target, remaining - 1, branch);
      path.pop_back();
      if (stop) return;
    }
  };
  for (int len = 0; len <= opt.depth && !stop; ++len)
    for (std::size_t b = 0; b < g.starts.size() && !stop; ++b)
      if (useful[g.starts[b]]) dfs(dfs, g.starts[b], len, static_cast<int>(b));
  return stats;
}

Classification classify_finitary(const Problem& p, std::size_t exploration_bound) {
  Classification out;
  ProductGraph g = explore_product(p, exploration_bound);
  out.states = g.states.size();
  if (!g.complete) {
    out.kind = Classification::Kind::bound_exceeded;
    return out;
  }
  auto useful = useful_states(g);
  const int n = static_cast<int>(g.states.size());

  // Tarjan's algorithm on the useful subgraph.
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on(n, false);
  int counter = 0, comps = 0;
  std::vector<int> comp_size;
  auto strong = [&](auto&& self, int v) -> void {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (const auto& e : g.edges[v]) {
      int w = e.target;
      if (!useful[w]) continue;
      if (idx[w] < 0) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      int size = 0;
      for (int w = -1; w != v;) {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp[w] = comps;
        ++size;
      }
      comp_size.push_back(size);
      ++comps;
    }
  };
  for (int v = 0; v < n; ++v)
    if (useful[v] && idx[v] < 0) strong(strong, v);

  for (int v = 0; v < n && !out.cycle_state; ++v) {
    if (!useful[v]) continue;
    bool cyclic = comp_size[comp[v]] > 1;
    for (const auto& e : g.edges[v]) cyclic = cyclic || e.target == v;
    if (cyclic) out.cycle_state = v;
  }
  if (out.cycle_state) {
    out.kind = Classification::Kind::infinite;
    out.cycle = g.describe(*out.cycle_state);
    return out;
  }

  constexpr std::uint64_t cap = ~std::uint64_t{0};
  std::vector<std::optional<std::uint64_t>> memo(n);
  auto count = [&](auto&& self, int v) -> std::uint64_t {
    if (memo[v]) return *memo[v];
    std::uint64_t c = g.accepting(v) ? 1 : 0;
    for (const auto& e : g.edges[v])
      if (useful[e.target]) {
        std::uint64_t sub = self(self, e.target);
        c = c > cap - sub ? cap : c + sub;
      }
    memo[v] = c;
    return c;
  };
  for (int s : g.starts)
    if (useful[s]) {
      std::uint64_t sub = count(count, s);
      out.count = out.count > cap - sub ? cap : out.count + sub;
    }
  out.kind = Classification::Kind::finite;
  return out;
}

std::string to_dot(const ProductGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=LR;\n";
  for (std::size_t s = 0; s < g.states.size(); ++s)
    os << "  s" << s << " [label=\"" << dot_escape(g.describe(static_cast<int>(s))) << "\", shape="
       << (g.accepting(static_cast<int>(s)) ? "doublecircle" : "box") << "];\n";
  for (std::size_t b = 0; b < g.starts.size(); ++b)
    os << "  init" << b << " [shape=point];\n  init" << b << " -> s" << g.starts[b] << ";\n";
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    std::map<int, std::vector<std::string>> grouped;
    for (const auto& e : g.edges[s]) grouped[e.target].push_back(to_string(g.letter(static_cast<int>(s), e)));
    for (const auto& [t, labels] : grouped) {
      os << "  s" << s << " -> s" << t << " [label=\"";
      for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "\\n" : "") << dot_escape(labels[i]);
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace acunh
