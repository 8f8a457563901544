#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "acunh/track_dfa.hpp"

namespace acunh {

enum class StdKind {
  xor_sum,      // P = Q + R
  xor_asym,     // P =↓ Q + R
  hshift,       // X = h(Y)
  hshift_asym,  // X =↓ h(Y)
  const_def,    // X = h^i(b)
  zero,         // X = 0
  equal,        // X = Y
  nonzero,      // X != 0
  var_neq,      // X != Y
  const_neq,    // X != b
};

struct StdEquation {
  StdKind kind;
  std::vector<std::string> operands;  // variables, in the order listed above
  std::string constant;               // const_def, const_neq
  int degree = 0;                     // const_def

  static StdEquation xor_sum(std::string p, std::string q, std::string r);
  static StdEquation xor_asym(std::string p, std::string q, std::string r);
  static StdEquation hshift(std::string x, std::string y);
  static StdEquation hshift_asym(std::string x, std::string y);
  static StdEquation const_def(std::string x, std::string b, int degree = 0);
  static StdEquation zero(std::string x);
  static StdEquation equal(std::string x, std::string y);
  static StdEquation nonzero(std::string x);
  static StdEquation var_neq(std::string x, std::string y);
  static StdEquation const_neq(std::string x, std::string b);

  bool is_disequality() const { return kind == StdKind::var_neq || kind == StdKind::const_neq; }

  friend bool operator==(const StdEquation&, const StdEquation&) = default;
};

class UnsupportedKind : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string to_string(StdKind k);
std::string to_string(const StdEquation& e);

/// Distinct operands in order of first occurrence.
std::vector<std::string> tracks_of(const StdEquation& e);

/// Automaton for an equation kind (everything except var_neq and const_neq)
/// over the given track order, or over tracks_of(e) when `order` is empty.
/// Asymmetric kinds also reject assignments that make the right side reducible.
/// const_def accepts exactly the unit string with a 1 at position `degree`,
/// read as a component over the equation's own constant.
TrackDfa build_equation_dfa(const StdEquation& e, std::vector<std::string> order = {});

/// Automaton for var_neq or const_neq. For const_neq the track is read as the
/// component over the named constant, which must differ from h^0 of it.
TrackDfa build_diseq_dfa(const StdEquation& e, std::vector<std::string> order = {});

/// Either builder, by kind.
TrackDfa build_dfa(const StdEquation& e, std::vector<std::string> order = {});

}  // namespace acunh
