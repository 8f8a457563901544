#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acunh/problem.hpp"

namespace acunh {

/// Sum of h^i(t) over the summands h^(i+1)(t) of the Rh-normal form of t;
/// degree-0 summands are dropped.
Term loseh(const Term& t);

/// Image of one variable in a layer: a nonempty set of constants, plus h(x)
/// when `shift` is set.
struct LayerImage {
  std::set<std::string> constants;
  bool shift = false;

  friend auto operator<=>(const LayerImage&, const LayerImage&) = default;
};

using LayerSubstitution = std::map<std::string, LayerImage>;

Substitution to_substitution(const LayerSubstitution& layer);
std::string to_string(const LayerSubstitution& layer);

/// Every layer substitution over the variables and constants of p, one per
/// choice of domain and nonempty images. Exponential; meant for small inputs.
std::vector<LayerSubstitution> layer_alphabet(const Problem& p);

struct ZeroSubstitution {
  std::set<std::string> zeroed;

  Substitution to_substitution() const;
  friend auto operator<=>(const ZeroSubstitution&, const ZeroSubstitution&) = default;
};

struct LayerDecomposition {
  ZeroSubstitution zeta;
  std::vector<LayerSubstitution> layers;
};

/// Splits a ground substitution in normal form into a zero substitution and
/// one layer per degree, layer i holding the degree-i monomials.
LayerDecomposition layer_decompose(const Substitution& theta);

/// zeta composed with every layer in order.
Substitution compose_layers(const LayerDecomposition& d);

/// Residual equation s =? t of a solution automaton state, both sides kept as
/// sorted monomial lists. For asymmetric equations t may not be normalized
/// further than Rh.
struct Residual {
  std::vector<Monomial> lhs;
  std::vector<Monomial> rhs;
  Mode mode = Mode::asymmetric;

  bool accepting() const { return lhs == rhs; }
  std::set<std::string> variables() const;
  friend auto operator<=>(const Residual&, const Residual&) = default;
};

Residual make_residual(const Equation& e);
std::string to_string(const Residual& r);

/// One step of a solution automaton, or nothing when the letter does not apply.
/// The letter must bind every variable of r.
std::optional<Residual> residual_step(const Residual& r, const LayerSubstitution& letter);

/// Automaton for a single equation: states are residual equations reachable
/// from the start under letters whose domain is exactly the state's variables,
/// over the constants of p plus `fresh` (when nonempty). States without
/// variables have no outgoing transitions.
struct SolutionAutomaton {
  struct Edge {
    LayerSubstitution letter;
    int target;
  };
  std::vector<Residual> states;
  std::vector<std::vector<Edge>> edges;
  int start = 0;

  bool accepting(int s) const { return states[s].accepting(); }
  std::optional<int> find(const Residual& r) const;
};

SolutionAutomaton build_solution_automaton(const Equation& eq, const Problem& p,
                                           const std::string& fresh = "");
std::string to_dot(const SolutionAutomaton& a, const std::string& name = "solutions");

/// Automata for the constraints of p that read layer substitutions.
struct SideAutomaton {
  enum class Kind { lcr, var_const_diseq, var_var_diseq };
  Kind kind;
  std::vector<Restriction> restrictions;  // lcr
  std::vector<Disequality> disequalities; // var_const_diseq, or the single pair of var_var_diseq

  int start() const { return 0; }
  bool accepting(int state) const;
  /// Next state, or -1 when the letter is rejected.
  int step(int state, const LayerSubstitution& letter) const;
};

std::vector<SideAutomaton> build_side_automata(const Problem& p);

/// Product of all solution and side automata, for every admissible zero
/// substitution. Variables stay live while their last image contained h(x);
/// letters bind exactly the live variables.
struct ProductGraph {
  struct Branch {
    ZeroSubstitution zeta;
    std::vector<SideAutomaton> sides;
  };
  struct State {
    int branch = 0;
    std::vector<std::string> live;
    std::vector<Residual> residuals;
    std::vector<int> side_states;
    friend auto operator<=>(const State&, const State&) = default;
  };
  struct Edge {
    std::vector<std::uint32_t> images;  // per live variable: bit k = constants[k], bit K = h(x)
    int target;
  };

  std::vector<std::string> constants;  // Const(P) plus the fresh constant
  std::string fresh;
  std::vector<Branch> branches;
  std::vector<State> states;
  std::vector<std::vector<Edge>> edges;
  std::vector<int> starts;  // one per branch
  bool complete = true;     // false when the state bound stopped exploration

  bool accepting(int s) const;
  LayerSubstitution letter(int s, const Edge& e) const;
  std::string describe(int s) const;
};

/// Explores the product breadth-first, stopping after `max_states` states.
ProductGraph explore_product(const Problem& p, std::size_t max_states = 10'000);

/// States that are reachable and from which an accepting state is reachable.
std::vector<bool> useful_states(const ProductGraph& g);

/// True when the product accepts the decomposition of a ground solution
/// (constants of theta must lie in g.constants).
bool product_accepts(const ProductGraph& g, const LayerDecomposition& d);

/// Verified unifiers contributed by one string: the composition zeta theta_0
/// ... theta_m restricted to the variables of p, or its verified
/// generalizations when it mentions the fresh constant.
std::vector<Substitution> unifiers_from_layers(const Problem& p, const ProductGraph& g, const LayerDecomposition& d);

struct EnumerationOptions {
  int depth = 5;
  std::size_t max_results = 10'000;
  std::size_t max_states = 10'000;
};

struct EnumerationStats {
  std::size_t strings = 0;        // accepted strings visited
  std::size_t emitted = 0;
  std::size_t rejected = 0;       // strings yielding no verified unifier
  bool bound_exceeded = false;
};

/// Emits the verified unifiers composed from accepted strings of length at
/// most `depth`, shortest first, without duplicates. Candidates that contain
/// the fresh constant are generalized first. The sink returns false to stop.
EnumerationStats enumerate_unifiers(const Problem& p, const EnumerationOptions& opt,
                                    const std::function<bool(const Substitution&)>& sink);

struct Classification {
  enum class Kind { finite, infinite, bound_exceeded };
  Kind kind = Kind::finite;
  std::uint64_t count = 0;       // accepted strings, when finite (saturating)
  std::optional<int> cycle_state;
  std::string cycle;             // description of a state on the cycle
  std::size_t states = 0;
};

/// Infinite iff some useful product state lies on a cycle.
Classification classify_finitary(const Problem& p, std::size_t exploration_bound = 10'000);

std::string to_dot(const ProductGraph& g, const std::string& name = "product");

}  // namespace acunh
