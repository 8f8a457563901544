#pragma once

// Brute-force ground solutions of pure ACUNh problems. A ground value is a set
// of monomials h^i(k) encoded as a bitmask, bit 8*k + i. Terms are evaluated by
// this file's own linearization, not by the library's normal forms.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acunh/problem.hpp"

namespace oracle {

using acunh::Term;

constexpr int kBlock = 8;

// A sum of h^shift(atom) with parity already applied.
struct Linear {
  std::map<std::pair<std::string, int>, bool> parts;  // (atom, shift) -> present
  std::map<std::string, bool> is_var;

  void toggle(const std::string& atom, int shift, bool var) {
    auto key = std::make_pair(atom, shift);
    parts[key] = !parts[key];
    is_var[atom] = var;
  }
};

inline void linearize(const Term& t, int shift, Linear& out) {
  switch (t.kind()) {
    case Term::Kind::zero:
      return;
    case Term::Kind::atom:
      out.toggle(t.atom().name, shift, t.atom().is_variable());
      return;
    case Term::Kind::h:
      linearize(t.child(), shift + 1, out);
      return;
    case Term::Kind::plus:
      for (const auto& c : t.children()) linearize(c, shift, out);
      return;
    case Term::Kind::app:
      throw std::invalid_argument("ground oracle handles pure problems only");
  }
}

class GroundOracle {
 public:
  using Values = std::vector<std::uint64_t>;  // one per variable, in variables() order

  GroundOracle(const acunh::Problem& p, std::vector<std::string> constants, int max_degree)
      : constants_(std::move(constants)), max_degree_(max_degree) {
    for (const auto& v : p.variables()) vars_.push_back(v);
    for (const auto& e : p.equations) {
      Linear diff, rhs;
      linearize(e.lhs, 0, diff);
      linearize(e.rhs, 0, diff);
      linearize(e.rhs, 0, rhs);
      Eq eq;
      eq.diff = compile(diff);
      eq.asym = e.mode == acunh::Mode::asymmetric;
      eq.rhs = compile(rhs);
      eqs_.push_back(std::move(eq));
    }
    for (const auto& r : p.restrictions) lcr_.push_back({var_index(r.variable), block_mask(const_index(r.constant))});
    for (const auto& d : p.disequalities) {
      if (d.rhs.is_variable()) diseq_.push_back({var_index(d.variable), var_index(d.rhs.name), 0});
      else diseq_.push_back({var_index(d.variable), -1, unit(const_index(d.rhs.name))});
    }
  }

  const std::vector<std::string>& variables() const { return vars_; }

  /// Calls f on every solution with all values of degree <= max_degree until f returns false.
  void for_each_solution(const std::function<bool(const Values&)>& f) const {
    std::vector<std::uint64_t> domain;
    std::uint64_t per_block = (std::uint64_t{1} << (max_degree_ + 1)) - 1;
    std::uint64_t full = 0;
    for (std::size_t k = 0; k < constants_.size(); ++k) full |= per_block << (kBlock * k);
    // All submasks of `full`.
    for (std::uint64_t m = full;; m = (m - 1) & full) {
      domain.push_back(m);
      if (m == 0) break;
    }
    Values vals(vars_.size(), 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
      if (i == vars_.size()) return !holds(vals) || f(vals);
      for (auto m : domain) {
        vals[i] = m;
        if (!rec(i + 1)) return false;
      }
      return true;
    };
    rec(0);
  }

  std::optional<Values> first_solution() const {
    std::optional<Values> out;
    for_each_solution([&](const Values& v) {
      out = v;
      return false;
    });
    return out;
  }

  bool holds(const Values& vals) const {
    for (const auto& eq : eqs_) {
      if (eval(eq.diff, vals) != 0) return false;
      if (eq.asym && !irreducible(eq.rhs, vals)) return false;
    }
    for (const auto& [x, mask] : lcr_)
      if (vals[x] & mask) return false;
    for (const auto& d : diseq_) {
      std::uint64_t rhs = d.y >= 0 ? vals[d.y] : d.constant;
      if (vals[d.x] == rhs) return false;
    }
    return true;
  }

  Term value_term(std::uint64_t v) const {
    std::vector<Term> parts;
    for (std::size_t k = 0; k < constants_.size(); ++k)
      for (int i = 0; i < kBlock; ++i)
        if (v >> (kBlock * k + i) & 1) parts.push_back(Term::h_pow(Term::constant(constants_[k]), i));
    return Term::plus(std::move(parts));
  }

  acunh::Substitution to_substitution(const Values& vals) const {
    acunh::Substitution s;
    for (std::size_t i = 0; i < vars_.size(); ++i) s.bind(vars_[i], value_term(vals[i]));
    return s;
  }

 private:
  struct Mono {
    int var;  // -1 for a constant
    int shift;
    std::uint64_t constant;
  };
  struct Eq {
    std::vector<Mono> diff;  // lhs + rhs, which must vanish
    std::vector<Mono> rhs;   // normalized right side
    bool asym = false;
  };
  struct Lcr {
    int x;
    std::uint64_t mask;
  };
  struct Diseq {
    int x, y;
    std::uint64_t constant;
  };

  int var_index(const std::string& v) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == v) return static_cast<int>(i);
    throw std::invalid_argument("unknown variable " + v);
  }
  int const_index(const std::string& c) const {
    for (std::size_t i = 0; i < constants_.size(); ++i)
      if (constants_[i] == c) return static_cast<int>(i);
    throw std::invalid_argument("unknown constant " + c);
  }
  static std::uint64_t block_mask(int k) { return std::uint64_t{0xff} << (kBlock * k); }
  static std::uint64_t unit(int k, int shift = 0) { return std::uint64_t{1} << (kBlock * k + shift); }

  std::vector<Mono> compile(const Linear& l) const {
    std::vector<Mono> out;
    for (const auto& [key, present] : l.parts) {
      if (!present) continue;
      const auto& [atom, shift] = key;
      if (shift + max_degree_ >= kBlock) throw std::invalid_argument("degree too large for the oracle");
      if (l.is_var.at(atom)) out.push_back({var_index(atom), shift, 0});
      else out.push_back({-1, shift, unit(const_index(atom), shift)});
    }
    return out;
  }

  static std::uint64_t image(const Mono& m, const Values& vals) {
    return m.var < 0 ? m.constant : vals[m.var] << m.shift;
  }

  static std::uint64_t eval(const std::vector<Mono>& ms, const Values& vals) {
    std::uint64_t acc = 0;
    for (const auto& m : ms) acc ^= image(m, vals);
    return acc;
  }

  // The instantiated summands of the normalized right side are nonzero and
  // pairwise disjoint, except that a lone unshifted variable may become 0.
  static bool irreducible(const std::vector<Mono>& rhs, const Values& vals) {
    if (rhs.size() == 1 && rhs[0].var >= 0 && rhs[0].shift == 0) return true;
    std::uint64_t seen = 0;
    for (const auto& m : rhs) {
      std::uint64_t v = image(m, vals);
      if (v == 0 || (seen & v)) return false;
      seen |= v;
    }
    return true;
  }

  std::vector<std::string> vars_;
  std::vector<std::string> constants_;
  int max_degree_;
  std::vector<Eq> eqs_;
  std::vector<Lcr> lcr_;
  std::vector<Diseq> diseq_;
};

}  // namespace oracle
