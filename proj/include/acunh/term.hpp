#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace acunh {

enum class AtomKind { variable, constant };

struct Atom {
  AtomKind kind = AtomKind::variable;
  std::string name;

  bool is_variable() const { return kind == AtomKind::variable; }
  bool is_constant() const { return kind == AtomKind::constant; }

  // Name-major so printing order follows identifiers.
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.name <=> b.name; c != 0) return c;
    return a.kind <=> b.kind;
  }
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Raw syntax tree over {0, atoms, h, +} plus uninterpreted free symbols.
///
/// Terms are immutable and share structure; copying is cheap. No normality
/// invariant holds for a Term: use canonicalize() for ACUNh-normal forms.
class Term {
 public:
  enum class Kind { zero, atom, h, plus, app };

  Term();  // zero

  static Term zero() { return Term(); }
  static Term atom(Atom a);
  static Term var(std::string name);
  static Term constant(std::string name);
  static Term h(Term t);
  static Term h_pow(Term t, int times);
  /// Sum of the given terms. Fewer than two summands collapse to 0 or the
  /// single summand.
  static Term plus(std::vector<Term> summands);
  static Term app(std::string symbol, std::vector<Term> args);

  Kind kind() const;
  bool is_zero() const { return kind() == Kind::zero; }
  bool is_atom() const { return kind() == Kind::atom; }
  bool is_variable() const { return is_atom() && atom().is_variable(); }

  const Atom& atom() const;
  const Term& child() const;                 // h
  std::span<const Term> children() const;    // plus, app
  const std::string& symbol() const;         // app

  std::size_t size() const;

  /// Structural comparison (no AC reasoning).
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
  friend bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// h^degree(base). In canonical terms the base is an atom or a free
/// application with canonical arguments; Rh-normal forms may also use 0.
struct Monomial {
  int degree = 0;
  Term base;

  Term to_term() const { return Term::h_pow(base, degree); }

  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree <=> b.degree; c != 0) return c;
    return a.base <=> b.base;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// ACUNh-normal form: a duplicate-free sum of monomials, sorted degree-major.
/// The empty set is 0.
class CanonicalTerm {
 public:
  CanonicalTerm() = default;
  /// Builds from arbitrary monomials, cancelling pairs mod 2.
  static CanonicalTerm from_monomials(std::vector<Monomial> ms);

  const std::vector<Monomial>& monomials() const { return monomials_; }
  bool is_zero() const { return monomials_.empty(); }
  int degree() const;  // -1 for zero

  CanonicalTerm operator+(const CanonicalTerm& o) const;  // symmetric difference
  CanonicalTerm shifted(int by = 1) const;
  bool contains(const Monomial& m) const;

  Term to_term() const;

  friend bool operator==(const CanonicalTerm&, const CanonicalTerm&) = default;
  friend auto operator<=>(const CanonicalTerm& a, const CanonicalTerm& b) {
    return a.monomials_ <=> b.monomials_;
  }

 private:
  std::vector<Monomial> monomials_;
};

class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const std::string, Term>> init);

  /// Identity bindings (x -> x) are dropped.
  void bind(const std::string& var, Term t);
  void erase(const std::string& var) { bindings_.erase(var); }
  const Term* find(const std::string& var) const;
  bool binds(const std::string& var) const { return bindings_.count(var) > 0; }
  /// Image of var; the variable itself when unbound.
  Term image(const std::string& var) const;

  const std::map<std::string, Term>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<std::string, Term> bindings_;
};

/// Names of constants and free symbols. Identifiers not declared as constants
/// are variables; when no constants are declared at all, identifiers that start
/// with a lowercase letter a-e are treated as constants.
struct Signature {
  std::set<std::string> constants;
  std::set<std::string> variables;
  std::map<std::string, int> free_arity;

  bool is_constant(const std::string& name) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), message_(what), pos_(pos) {}
  std::size_t pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t pos_;
};

Term parse_term(std::string_view text, const Signature& sig = {});
/// Parses "{x -> t, y -> u}" (braces optional, ↦ accepted for ->).
Substitution parse_substitution(std::string_view text, const Signature& sig = {});

std::string to_string(const Term& t);
std::string to_string(const CanonicalTerm& t);
std::string to_string(const Monomial& m);
std::string to_string(const Substitution& s);

CanonicalTerm canonicalize(const Term& t);
/// Non-zero summands of the Rh-normal form of t, duplicates kept, sorted.
std::vector<Monomial> mset(const Term& t);
int degree(const Term& t);
Term apply(const Term& t, const Substitution& s);
bool equal_mod_acunh(const Term& s, const Term& t);

/// Canonical image of every binding.
Substitution normalized(const Substitution& s);
/// Composition: apply(t, compose(a, b)) == apply(apply(t, a), b).
Substitution compose(const Substitution& a, const Substitution& b);
bool equal_mod_acunh(const Substitution& a, const Substitution& b);

void collect_atoms(const Term& t, std::set<Atom>& out);
std::set<std::string> variables_of(const Term& t);
std::set<std::string> constants_of(const Term& t);
bool has_free_symbols(const Term& t);

}  // namespace acunh
