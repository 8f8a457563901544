#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "acunh/term.hpp"

namespace acunh {

/// One bit per track; bit j belongs to tracks()[j].
using BitColumn = std::uint64_t;
/// Position i holds the coefficients of h^i(c); position 0 is leftmost.
using BitString = std::vector<BitColumn>;

/// Deterministic automaton over bit columns. Transitions are partial: a missing
/// entry leads to the implicit dead state. Tracks outside the care mask are
/// unconstrained and are ignored when looking up a transition.
class TrackDfa {
 public:
  using State = int;

  TrackDfa() = default;
  explicit TrackDfa(std::vector<std::string> tracks);

  const std::vector<std::string>& tracks() const { return tracks_; }
  std::size_t width() const { return tracks_.size(); }
  BitColumn care() const { return care_; }
  void set_care(BitColumn mask) { care_ = mask; }
  int track_index(const std::string& name) const;  // -1 when absent

  State add_state(bool accepting, std::string label = {});
  void add_transition(State from, BitColumn column, State to);
  void set_start(State s) { start_ = s; }

  State start() const { return start_; }
  std::size_t state_count() const { return accepting_.size(); }
  bool accepting(State s) const { return accepting_[s]; }
  const std::string& label(State s) const { return labels_[s]; }
  const std::map<BitColumn, State>& transitions(State s) const { return delta_[s]; }

  std::optional<State> step(State s, BitColumn column) const;
  bool accepts(const BitString& w) const;

 private:
  std::vector<std::string> tracks_;
  BitColumn care_ = 0;
  State start_ = 0;
  std::vector<bool> accepting_;
  std::vector<std::string> labels_;
  std::vector<std::map<BitColumn, State>> delta_;
};

/// Product automaton over `global_order`; each component's tracks are mapped
/// by name, and tracks no component mentions stay unconstrained. Only states
/// reachable from the start are built.
/// Throws BoundExceeded when the product would have more than `max_states`
/// states (0 means unbounded).
TrackDfa intersect(const std::vector<TrackDfa>& dfas, const std::vector<std::string>& global_order,
                   std::size_t max_states = 0);

class BoundExceeded : public std::runtime_error {
 public:
  explicit BoundExceeded(std::size_t bound)
      : std::runtime_error("exploration bound of " + std::to_string(bound) + " states exceeded") {}
};

/// Shortest accepted string (breadth-first), trailing all-zero columns trimmed.
std::optional<BitString> find_witness(const TrackDfa& a);

/// Each track maps to the sum of h^i(c) over positions i where its bit is 1.
/// Every track is bound, including those that decode to 0.
Substitution decode_witness(const BitString& w, const std::vector<std::string>& order,
                            const std::string& constant);

/// "(1,0,1)" with bits listed in track order.
std::string column_label(BitColumn column, std::size_t width);

std::string to_dot(const TrackDfa& a, const std::string& name = "dfa");

}  // namespace acunh
