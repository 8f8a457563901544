#include "acunh/std_equation.hpp"

#include <algorithm>
#include <functional>

namespace acunh {

StdEquation StdEquation::xor_sum(std::string p, std::string q, std::string r) {
  return {StdKind::xor_sum, {std::move(p), std::move(q), std::move(r)}, {}, 0};
}
StdEquation StdEquation::xor_asym(std::string p, std::string q, std::string r) {
  return {StdKind::xor_asym, {std::move(p), std::move(q), std::move(r)}, {}, 0};
}
StdEquation StdEquation::hshift(std::string x, std::string y) {
  return {StdKind::hshift, {std::move(x), std::move(y)}, {}, 0};
}
StdEquation StdEquation::hshift_asym(std::string x, std::string y) {
  return {StdKind::hshift_asym, {std::move(x), std::move(y)}, {}, 0};
}
StdEquation StdEquation::const_def(std::string x, std::string b, int degree) {
  return {StdKind::const_def, {std::move(x)}, std::move(b), degree};
}
StdEquation StdEquation::zero(std::string x) { return {StdKind::zero, {std::move(x)}, {}, 0}; }
StdEquation StdEquation::equal(std::string x, std::string y) {
  return {StdKind::equal, {std::move(x), std::move(y)}, {}, 0};
}
StdEquation StdEquation::nonzero(std::string x) { return {StdKind::nonzero, {std::move(x)}, {}, 0}; }
StdEquation StdEquation::var_neq(std::string x, std::string y) {
  return {StdKind::var_neq, {std::move(x), std::move(y)}, {}, 0};
}
StdEquation StdEquation::const_neq(std::string x, std::string b) {
  return {StdKind::const_neq, {std::move(x)}, std::move(b), 0};
}

std::string to_string(StdKind k) {
  switch (k) {
    case StdKind::xor_sum: return "xor";
    case StdKind::xor_asym: return "xor_asym";
    case StdKind::hshift: return "hshift";
    case StdKind::hshift_asym: return "hshift_asym";
    case StdKind::const_def: return "const_def";
    case StdKind::zero: return "zero";
    case StdKind::equal: return "equal";
    case StdKind::nonzero: return "nonzero";
    case StdKind::var_neq: return "var_neq";
    case StdKind::const_neq: return "const_neq";
  }
  return "?";
}

std::string to_string(const StdEquation& e) {
  std::string s = to_string(e.kind) + "(";
  for (std::size_t i = 0; i < e.operands.size(); ++i) s += (i ? ", " : "") + e.operands[i];
  if (!e.constant.empty()) {
    s += ", " + e.constant;
    if (e.kind == StdKind::const_def && e.degree != 0) s += ", " + std::to_string(e.degree);
  }
  return s + ")";
}

std::vector<std::string> tracks_of(const StdEquation& e) {
  std::vector<std::string> out;
  for (const auto& o : e.operands)
    if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
  return out;
}

namespace {

// An automaton whose letters are the operand bits (bit k = operand k) rather
// than track columns. Instantiation handles repeated operands and track order.
struct Template {
  std::vector<bool> accepting;
  std::vector<std::string> labels;
  std::function<int(int state, unsigned bits)> delta;  // -1 is dead
};

constexpr unsigned bit(unsigned bits, int k) { return bits >> k & 1; }

TrackDfa instantiate(const Template& f, const StdEquation& e, std::vector<std::string> order) {
  if (order.empty()) order = tracks_of(e);
  TrackDfa dfa(order);
  std::vector<int> pos;
  for (const auto& o : e.operands) {
    int p = dfa.track_index(o);
    if (p < 0) throw std::invalid_argument("track order misses operand '" + o + "'");
    pos.push_back(p);
  }
  std::vector<int> distinct = pos;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  BitColumn care = 0;
  for (int p : distinct) care |= BitColumn{1} << p;
  dfa.set_care(care);

  for (std::size_t s = 0; s < f.accepting.size(); ++s) dfa.add_state(f.accepting[s], f.labels[s]);
  dfa.set_start(0);
  for (unsigned assign = 0; assign < (1u << distinct.size()); ++assign) {
    BitColumn column = 0;
    for (std::size_t j = 0; j < distinct.size(); ++j)
      if (assign >> j & 1) column |= BitColumn{1} << distinct[j];
    unsigned bits = 0;
    for (std::size_t k = 0; k < pos.size(); ++k)
      if (column >> pos[k] & 1) bits |= 1u << k;
    for (std::size_t s = 0; s < f.accepting.size(); ++s) {
      int to = f.delta(static_cast<int>(s), bits);
      if (to >= 0) dfa.add_transition(static_cast<int>(s), column, to);
    }
  }
  return dfa;
}

Template template_for(const StdEquation& e) {
  switch (e.kind) {
    case StdKind::xor_sum:
      return {{true}, {"q0"}, [](int, unsigned b) {
                return bit(b, 0) == (bit(b, 1) ^ bit(b, 2)) ? 0 : -1;
              }};
    case StdKind::xor_asym:
      // q1: Q seen, q3: R seen, q2: both seen. Q and R never share a monomial.
      return {{false, false, true, false}, {"q0", "q1", "q2", "q3"}, [](int s, unsigned b) {
                static const int table[4][3] = {{0, 1, 3}, {1, 1, 2}, {2, 2, 2}, {3, 2, 3}};
                int letter = b == 0b000 ? 0 : b == 0b011 ? 1 : b == 0b101 ? 2 : -1;
                return letter < 0 ? -1 : table[s][letter];
              }};
    case StdKind::hshift:
      // State = previous bit of Y, which must equal the current bit of X.
      return {{true, false}, {"q0", "q1"}, [](int s, unsigned b) {
                return static_cast<int>(bit(b, 0)) == s ? static_cast<int>(bit(b, 1)) : -1;
              }};
    case StdKind::hshift_asym:
      // q0: Y still 0, q1: previous Y bit 1, q2: previous Y bit 0 after a 1.
      return {{false, false, true}, {"q0", "q1", "q2"}, [](int s, unsigned b) {
                int need = s == 1 ? 1 : 0;
                if (static_cast<int>(bit(b, 0)) != need) return -1;
                if (bit(b, 1)) return 1;
                return s == 0 ? 0 : 2;
              }};
    case StdKind::const_def: {
      int d = e.degree;
      std::vector<bool> acc(d + 2, false);
      acc[d + 1] = true;
      std::vector<std::string> labels;
      for (int i = 0; i <= d + 1; ++i) labels.push_back("q" + std::to_string(i));
      return {acc, labels, [d](int s, unsigned b) {
                if (s < d) return b == 0 ? s + 1 : -1;
                if (s == d) return b == 1 ? d + 1 : -1;
                return b == 0 ? s : -1;
              }};
    }
    case StdKind::zero:
      return {{true}, {"q0"}, [](int, unsigned b) { return b == 0 ? 0 : -1; }};
    case StdKind::equal:
      return {{true}, {"q0"}, [](int, unsigned b) { return bit(b, 0) == bit(b, 1) ? 0 : -1; }};
    case StdKind::nonzero:
      return {{false, true}, {"q0", "q1"}, [](int s, unsigned b) { return s == 1 || b ? 1 : 0; }};
    case StdKind::var_neq:
      return {{false, true}, {"q0", "q1"}, [](int s, unsigned b) {
                return s == 1 || bit(b, 0) != bit(b, 1) ? 1 : 0;
              }};
    case StdKind::const_neq:
      // q2: the value read so far is exactly h^0 of the constant.
      return {{true, true, false}, {"q0", "q1", "q2"}, [](int s, unsigned b) {
                if (s == 0) return b ? 2 : 1;
                if (s == 2) return b ? 1 : 2;
                return 1;
              }};
  }
  throw UnsupportedKind("unknown kind");
}

}  // namespace

TrackDfa build_equation_dfa(const StdEquation& e, std::vector<std::string> order) {
  if (e.is_disequality()) throw UnsupportedKind(to_string(e.kind) + " needs build_diseq_dfa");
  return instantiate(template_for(e), e, std::move(order));
}

TrackDfa build_diseq_dfa(const StdEquation& e, std::vector<std::string> order) {
  if (!e.is_disequality()) throw UnsupportedKind(to_string(e.kind) + " needs build_equation_dfa");
  return instantiate(template_for(e), e, std::move(order));
}

TrackDfa build_dfa(const StdEquation& e, std::vector<std::string> order) {
  return instantiate(template_for(e), e, std::move(order));
}

}  // namespace acunh
