#include "acunh/track_dfa.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace acunh {

TrackDfa::TrackDfa(std::vector<std::string> tracks) : tracks_(std::move(tracks)) {
  if (tracks_.size() > 64) throw std::invalid_argument("at most 64 tracks are supported");
  care_ = tracks_.size() == 64 ? ~BitColumn{0} : (BitColumn{1} << tracks_.size()) - 1;
}

int TrackDfa::track_index(const std::string& name) const {
  auto it = std::find(tracks_.begin(), tracks_.end(), name);
  return it == tracks_.end() ? -1 : static_cast<int>(it - tracks_.begin());
}

TrackDfa::State TrackDfa::add_state(bool accepting, std::string label) {
  accepting_.push_back(accepting);
  labels_.push_back(label.empty() ? "q" + std::to_string(accepting_.size() - 1) : std::move(label));
  delta_.emplace_back();
  return static_cast<State>(accepting_.size() - 1);
}

void TrackDfa::add_transition(State from, BitColumn column, State to) {
  delta_.at(from)[column & care_] = to;
}

std::optional<TrackDfa::State> TrackDfa::step(State s, BitColumn column) const {
  const auto& d = delta_[s];
  auto it = d.find(column & care_);
  if (it == d.end()) return std::nullopt;
  return it->second;
}

bool TrackDfa::accepts(const BitString& w) const {
  if (state_count() == 0) return false;
  State s = start_;
  for (BitColumn c : w) {
    auto next = step(s, c);
    if (!next) return false;
    s = *next;
  }
  return accepting(s);
}

namespace {

struct Component {
  const TrackDfa* dfa;
  std::vector<int> to_global;  // local track -> global position
  BitColumn global_care = 0;

  BitColumn widen(BitColumn local) const {
    BitColumn out = 0;
    for (std::size_t j = 0; j < to_global.size(); ++j)
      if (local >> j & 1) out |= BitColumn{1} << to_global[j];
    return out;
  }
};

}  // namespace

TrackDfa intersect(const std::vector<TrackDfa>& dfas, const std::vector<std::string>& global_order,
                   std::size_t max_states) {
  TrackDfa out(global_order);
  std::vector<Component> comps;
  BitColumn care = 0;
  for (const auto& d : dfas) {
    Component c{&d, {}, 0};
    for (std::size_t j = 0; j < d.width(); ++j) {
      auto it = std::find(global_order.begin(), global_order.end(), d.tracks()[j]);
      if (it == global_order.end())
        throw std::invalid_argument("track '" + d.tracks()[j] + "' missing from the global order");
      c.to_global.push_back(static_cast<int>(it - global_order.begin()));
    }
    c.global_care = c.widen(d.care());
    care |= c.global_care;
    comps.push_back(std::move(c));
  }
  out.set_care(care);

  for (const auto& c : comps)
    if (c.dfa->state_count() == 0) {
      out.add_state(false);
      return out;
    }

  using Tuple = std::vector<TrackDfa::State>;
  std::map<Tuple, TrackDfa::State> index;
  std::deque<Tuple> queue;
  auto intern = [&](const Tuple& t) {
    auto [it, inserted] = index.emplace(t, 0);
    if (inserted) {
      bool acc = true;
      for (std::size_t k = 0; k < comps.size(); ++k) acc = acc && comps[k].dfa->accepting(t[k]);
      it->second = out.add_state(acc);
      if (max_states && out.state_count() > max_states) throw BoundExceeded(max_states);
      queue.push_back(t);
    }
    return it->second;
  };

  Tuple start;
  for (const auto& c : comps) start.push_back(c.dfa->start());
  out.set_start(intern(start));

  while (!queue.empty()) {
    Tuple cur = queue.front();
    queue.pop_front();
    TrackDfa::State from = index.at(cur);
    Tuple next(comps.size());
    // Join component transitions that agree on shared tracks.
    auto join = [&](auto&& self, std::size_t k, BitColumn value, BitColumn mask) -> void {
      if (k == comps.size()) {
        out.add_transition(from, value, intern(next));
        return;
      }
      const auto& c = comps[k];
      for (const auto& [col, to] : c.dfa->transitions(cur[k])) {
        BitColumn wide = c.widen(col);
        if ((value ^ wide) & mask & c.global_care) continue;
        next[k] = to;
        self(self, k + 1, value | wide, mask | c.global_care);
      }
    };
    join(join, 0, 0, 0);
  }
  return out;
}

std::optional<BitString> find_witness(const TrackDfa& a) {
  if (a.state_count() == 0) return std::nullopt;
  std::vector<int> parent(a.state_count(), -2);
  std::vector<BitColumn> via(a.state_count(), 0);
  std::deque<TrackDfa::State> queue{a.start()};
  parent[a.start()] = -1;
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    if (a.accepting(s)) {
      BitString w;
      for (int cur = s; parent[cur] != -1; cur = parent[cur]) w.push_back(via[cur]);
      std::reverse(w.begin(), w.end());
      while (!w.empty() && w.back() == 0) w.pop_back();
      return w;
    }
    for (const auto& [col, to] : a.transitions(s)) {
      if (parent[to] != -2) continue;
      parent[to] = s;
      via[to] = col;
      queue.push_back(to);
    }
  }
  return std::nullopt;
}

Substitution decode_witness(const BitString& w, const std::vector<std::string>& order,
                            const std::string& constant) {
  Substitution out;
  for (std::size_t j = 0; j < order.size(); ++j) {
    std::vector<Term> parts;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] >> j & 1) parts.push_back(Term::h_pow(Term::constant(constant), static_cast<int>(i)));
    out.bind(order[j], Term::plus(std::move(parts)));
  }
  return out;
}

std::string column_label(BitColumn column, std::size_t width) {
  std::string s = "(";
  for (std::size_t j = 0; j < width; ++j) {
    if (j) s += ',';
    s += (column >> j & 1) ? '1' : '0';
  }
  return s + ")";
}

std::string to_dot(const TrackDfa& a, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
  os << "  // tracks:";
  for (const auto& t : a.tracks()) os << ' ' << t;
  os << "\n  init [shape=point];\n";
  for (std::size_t s = 0; s < a.state_count(); ++s)
    os << "  s" << s << " [label=\"" << a.label(static_cast<int>(s)) << "\", shape="
       << (a.accepting(static_cast<int>(s)) ? "doublecircle" : "circle") << "];\n";
  if (a.state_count() > 0) os << "  init -> s" << a.start() << ";\n";
  for (std::size_t s = 0; s < a.state_count(); ++s) {
    // One edge per target, labels joined.
    std::map<int, std::vector<std::string>> edges;
    for (const auto& [col, to] : a.transitions(static_cast<int>(s)))
      edges[to].push_back(column_label(col, a.width()));
    for (const auto& [to, labels] : edges) {
      os << "  s" << s << " -> s" << to << " [label=\"";
      for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? "\\n" : "") << labels[i];
      os << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace acunh
