#include "acunh/problem.hpp"

#include <algorithm>
#include <sstream>

namespace acunh {

std::set<std::string> Problem::variables() const {
  std::set<std::string> out;
  for (const auto& e : equations) {
    out.merge(variables_of(e.lhs));
    out.merge(variables_of(e.rhs));
  }
  for (const auto& r : restrictions) out.insert(r.variable);
  for (const auto& d : disequalities) {
    out.insert(d.variable);
    if (d.rhs.is_variable()) out.insert(d.rhs.name);
  }
  return out;
}

std::set<std::string> Problem::constants() const {
  std::set<std::string> out = signature.constants;
  for (const auto& e : equations) {
    out.merge(constants_of(e.lhs));
    out.merge(constants_of(e.rhs));
  }
  for (const auto& r : restrictions) out.insert(r.constant);
  for (const auto& d : disequalities)
    if (d.rhs.is_constant()) out.insert(d.rhs.name);
  return out;
}

bool Problem::has_free_symbols() const {
  return std::any_of(equations.begin(), equations.end(), [](const Equation& e) {
    return acunh::has_free_symbols(e.lhs) || acunh::has_free_symbols(e.rhs);
  });
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool valid_ident(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

Problem parse_problem(std::string_view text) {
  Problem p;
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::size_t offset = 0;
    std::stringstream ss{std::string(text)};
    std::string line;
    while (std::getline(ss, line)) {
      std::size_t line_offset = offset;
      offset += line.size() + 1;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (!line.empty()) lines.emplace_back(line_offset, line);
    }
  }

  auto fail = [](std::size_t pos, const std::string& msg) -> void { throw ParseError(msg, pos); };

  // Declarations first so that equations can be classified.
  for (const auto& [pos, line] : lines) {
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = trim(line.substr(0, colon));
    std::string rest = trim(line.substr(colon + 1));
    if (key == "constants") {
      for (const auto& c : split_list(rest)) {
        if (!valid_ident(c) || c == "h") fail(pos, "invalid constant name '" + c + "'");
        p.signature.constants.insert(c);
      }
    } else if (key == "variables") {
      for (const auto& v : split_list(rest)) {
        if (!valid_ident(v) || v == "h") fail(pos, "invalid variable name '" + v + "'");
        p.signature.variables.insert(v);
      }
    } else if (key == "free") {
      for (const auto& item : split_list(rest)) {
        auto slash = item.find('/');
        if (slash == std::string::npos) fail(pos, "free symbol needs an arity: '" + item + "'");
        std::string name = trim(item.substr(0, slash));
        std::string arity = trim(item.substr(slash + 1));
        if (!valid_ident(name) || name == "h") fail(pos, "invalid free symbol '" + name + "'");
        if (arity.empty() || !std::all_of(arity.begin(), arity.end(), ::isdigit))
          fail(pos, "invalid arity for '" + name + "'");
        p.signature.free_arity[name] = std::stoi(arity);
      }
    }
  }
  for (const auto& v : p.signature.variables)
    if (p.signature.constants.count(v)) throw ParseError("'" + v + "' declared as both", 0);

  auto atom_of = [&](const std::string& name, std::size_t pos) {
    if (!valid_ident(name)) fail(pos, "invalid identifier '" + name + "'");
    return p.signature.is_constant(name) ? Atom{AtomKind::constant, name}
                                         : Atom{AtomKind::variable, name};
  };

  for (const auto& [pos, line] : lines) {
    auto colon = line.find(':');
    std::string key = colon == std::string::npos ? "" : trim(line.substr(0, colon));
    if (key == "constants" || key == "variables" || key == "free") continue;
    std::string rest = colon == std::string::npos ? "" : trim(line.substr(colon + 1));
    if (key == "restrict") {
      auto at = rest.find(" notin ");
      if (at == std::string::npos) fail(pos, "expected 'restrict: c notin x'");
      Atom c = atom_of(trim(rest.substr(0, at)), pos);
      Atom x = atom_of(trim(rest.substr(at + 7)), pos);
      if (!c.is_constant() || !x.is_variable())
        fail(pos, "restriction needs a constant and a variable");
      p.restrictions.push_back({c.name, x.name});
    } else if (key == "neq") {
      auto at = rest.find("!=");
      if (at == std::string::npos) fail(pos, "expected 'neq: x != y'");
      Atom x = atom_of(trim(rest.substr(0, at)), pos);
      Atom y = atom_of(trim(rest.substr(at + 2)), pos);
      if (!x.is_variable()) std::swap(x, y);
      if (!x.is_variable()) fail(pos, "disequality needs a variable");
      p.disequalities.push_back({x.name, y});
    } else if (!key.empty()) {
      fail(pos, "unknown directive '" + key + "'");
    } else {
      Mode mode = Mode::symmetric;
      auto at = line.find("=^");
      std::size_t width = 2;
      if (at != std::string::npos) {
        mode = Mode::asymmetric;
      } else if ((at = line.find("=\xE2\x86\x93")) != std::string::npos) {  // =↓
        mode = Mode::asymmetric;
        width = 4;
      } else if ((at = line.find("=?")) != std::string::npos) {
      } else if ((at = line.find('=')) != std::string::npos) {
        width = 1;
      } else {
        fail(pos, "expected an equation");
      }
      try {
        Term lhs = parse_term(line.substr(0, at), p.signature);
        Term rhs = parse_term(line.substr(at + width), p.signature);
        p.equations.push_back({std::move(lhs), std::move(rhs), mode});
      } catch (const ParseError& e) {
        throw ParseError(e.message(), pos + e.pos());
      }
    }
  }
  return p;
}

std::string to_string(const Equation& e) {
  return to_string(e.lhs) + (e.mode == Mode::asymmetric ? " =^ " : " = ") + to_string(e.rhs);
}

std::string to_string(const Problem& p) {
  std::ostringstream os;
  auto join = [&](const auto& items) {
    bool first = true;
    for (const auto& i : items) {
      if (!first) os << ", ";
      first = false;
      os << i;
    }
  };
  if (auto cs = p.constants(); !cs.empty()) {
    os << "constants: ";
    join(cs);
    os << '\n';
  }
  if (auto vs = p.variables(); !vs.empty()) {
    os << "variables: ";
    join(vs);
    os << '\n';
  }
  if (!p.signature.free_arity.empty()) {
    std::vector<std::string> items;
    for (const auto& [f, n] : p.signature.free_arity) items.push_back(f + "/" + std::to_string(n));
    os << "free: ";
    join(items);
    os << '\n';
  }
  for (const auto& e : p.equations) os << to_string(e) << '\n';
  for (const auto& r : p.restrictions) os << "restrict: " << r.constant << " notin " << r.variable << '\n';
  for (const auto& d : p.disequalities) os << "neq: " << d.variable << " != " << d.rhs.name << '\n';
  return os.str();
}

std::string fresh_name(const std::string& stem, const std::set<std::string>& used) {
  if (!used.count(stem)) return stem;
  for (int i = 1;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

}  // namespace acunh
