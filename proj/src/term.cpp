#include "acunh/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace acunh {

struct Term::Node {
  Kind kind = Kind::zero;
  Atom atom;
  std::string symbol;
  std::vector<Term> kids;
  std::size_t size = 1;
};

Term::Term() {
  static const auto zero_node = std::make_shared<const Node>();
  node_ = zero_node;
}

Term Term::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::atom;
  n->atom = std::move(a);
  return Term(std::move(n));
}

Term Term::var(std::string name) { return atom({AtomKind::variable, std::move(name)}); }
Term Term::constant(std::string name) { return atom({AtomKind::constant, std::move(name)}); }

Term Term::h(Term t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::h;
  n->size = 1 + t.size();
  n->kids.push_back(std::move(t));
  return Term(std::move(n));
}

Term Term::h_pow(Term t, int times) {
  for (int i = 0; i < times; ++i) t = h(std::move(t));
  return t;
}

Term Term::plus(std::vector<Term> summands) {
  if (summands.empty()) return zero();
  if (summands.size() == 1) return std::move(summands.front());
  auto n = std::make_shared<Node>();
  n->kind = Kind::plus;
  for (const auto& s : summands) n->size += s.size();
  n->kids = std::move(summands);
  return Term(std::move(n));
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::app;
  n->symbol = std::move(symbol);
  for (const auto& s : args) n->size += s.size();
  n->kids = std::move(args);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const Atom& Term::atom() const { return node_->atom; }
const Term& Term::child() const { return node_->kids.front(); }
std::span<const Term> Term::children() const { return node_->kids; }
const std::string& Term::symbol() const { return node_->symbol; }
std::size_t Term::size() const { return node_->size; }

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Term::Kind::zero:
      return std::strong_ordering::equal;
    case Term::Kind::atom:
      return a.atom() <=> b.atom();
    case Term::Kind::app:
      if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
      [[fallthrough]];
    case Term::Kind::h:
    case Term::Kind::plus: {
      const auto& ak = a.node_->kids;
      const auto& bk = b.node_->kids;
      return std::lexicographical_compare_three_way(ak.begin(), ak.end(), bk.begin(),
                                                    bk.end());
    }
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------

CanonicalTerm CanonicalTerm::from_monomials(std::vector<Monomial> ms) {
  std::sort(ms.begin(), ms.end());
  CanonicalTerm out;
  for (std::size_t i = 0; i < ms.size();) {
    std::size_t j = i;
    while (j < ms.size() && ms[j] == ms[i]) ++j;
    if ((j - i) % 2 == 1) out.monomials_.push_back(ms[i]);
    i = j;
  }
  return out;
}

int CanonicalTerm::degree() const {
  return monomials_.empty() ? -1 : monomials_.back().degree;
}

CanonicalTerm CanonicalTerm::operator+(const CanonicalTerm& o) const {
  CanonicalTerm out;
  std::set_symmetric_difference(monomials_.begin(), monomials_.end(), o.monomials_.begin(),
                                o.monomials_.end(), std::back_inserter(out.monomials_));
  return out;
}

CanonicalTerm CanonicalTerm::shifted(int by) const {
  CanonicalTerm out = *this;
  for (auto& m : out.monomials_) m.degree += by;
  return out;
}

bool CanonicalTerm::contains(const Monomial& m) const {
  return std::binary_search(monomials_.begin(), monomials_.end(), m);
}

Term CanonicalTerm::to_term() const {
  std::vector<Term> parts;
  parts.reserve(monomials_.size());
  for (const auto& m : monomials_) parts.push_back(m.to_term());
  return Term::plus(std::move(parts));
}

// ---------------------------------------------------------------------------

Substitution::Substitution(std::initializer_list<std::pair<const std::string, Term>> init) {
  for (const auto& [k, v] : init) bind(k, v);
}

void Substitution::bind(const std::string& var, Term t) {
  if (t.is_variable() && t.atom().name == var) {
    bindings_.erase(var);
    return;
  }
  bindings_.insert_or_assign(var, std::move(t));
}

const Term* Substitution::find(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Substitution::image(const std::string& var) const {
  if (const Term* t = find(var)) return *t;
  return Term::var(var);
}

bool Signature::is_constant(const std::string& name) const {
  if (variables.count(name)) return false;
  if (!constants.empty()) return constants.count(name) > 0;
  return !name.empty() && name[0] >= 'a' && name[0] <= 'e';
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Term parse_all() {
    Term t = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return t;
  }

  Term parse_sum() {
    std::vector<Term> parts;
    parts.push_back(parse_primary());
    while (accept('+')) parts.push_back(parse_primary());
    return Term::plus(std::move(parts));
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_])))
      fail("expected identifier");
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept(std::string_view s) {
    skip_ws();
    if (text_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

 private:
  Term parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept('(')) {
      Term t = parse_sum();
      expect(')');
      return t;
    }
    if (text_[pos_] == '0' &&
        (pos_ + 1 >= text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      return Term::zero();
    }
    std::size_t ident_pos = pos_;
    std::string id = parse_ident();
    if (id == "h") {
      int power = 1;
      if (accept('^')) {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected exponent after '^'");
        power = std::stoi(std::string(text_.substr(start, pos_ - start)));
      }
      expect('(');
      Term inner = parse_sum();
      expect(')');
      return Term::h_pow(std::move(inner), power);
    }
    if (accept('(')) {
      std::vector<Term> args;
      if (!accept(')')) {
        args.push_back(parse_sum());
        while (accept(',')) args.push_back(parse_sum());
        expect(')');
      }
      auto it = sig_.free_arity.find(id);
      if (it != sig_.free_arity.end() && it->second != static_cast<int>(args.size()))
        throw ParseError("symbol '" + id + "' expects " + std::to_string(it->second) +
                             " argument(s), got " + std::to_string(args.size()),
                         ident_pos);
      if (it == sig_.free_arity.end() && !sig_.free_arity.empty())
        throw ParseError("undeclared free symbol '" + id + "'", ident_pos);
      return Term::app(std::move(id), std::move(args));
    }
    return sig_.is_constant(id) ? Term::constant(id) : Term::var(id);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

void print(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::zero:
      os << '0';
      return;
    case Term::Kind::atom:
      os << t.atom().name;
      return;
    case Term::Kind::h: {
      int power = 0;
      const Term* cur = &t;
      while (cur->kind() == Term::Kind::h) {
        ++power;
        cur = &cur->child();
      }
      os << 'h';
      if (power > 1) os << '^' << power;
      os << '(';
      print(os, *cur);
      os << ')';
      return;
    }
    case Term::Kind::plus: {
      bool first = true;
      for (const auto& c : t.children()) {
        if (!first) os << " + ";
        first = false;
        print(os, c);
      }
      return;
    }
    case Term::Kind::app: {
      os << t.symbol() << '(';
      bool first = true;
      for (const auto& c : t.children()) {
        if (!first) os << ", ";
        first = false;
        print(os, c);
      }
      os << ')';
      return;
    }
  }
}

}  // namespace

Term parse_term(std::string_view text, const Signature& sig) {
  return Parser(text, sig).parse_all();
}

Substitution parse_substitution(std::string_view text, const Signature& sig) {
  std::string buf(text);
  // Accept the unicode maps-to arrow as an alias.
  for (std::size_t p; (p = buf.find("\xE2\x86\xA6")) != std::string::npos;) buf.replace(p, 3, "->");
  Parser p(buf, sig);
  Substitution out;
  bool braces = p.accept('{');
  if (!(braces && p.accept('}')) && !p.at_end()) {
    do {
      std::string var = p.parse_ident();
      if (!p.accept("->") && !p.accept(":=")) p.fail("expected '->'");
      out.bind(var, p.parse_sum());
    } while (p.accept(','));
    if (braces) p.expect('}');
  }
  if (!p.at_end()) p.fail("trailing input");
  return out;
}

std::string to_string(const Term& t) {
  std::ostringstream os;
  print(os, t);
  return os.str();
}

std::string to_string(const CanonicalTerm& t) { return to_string(t.to_term()); }
std::string to_string(const Monomial& m) { return to_string(m.to_term()); }

std::string to_string(const Substitution& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [k, v] : s.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << k << " -> ";
    print(os, v);
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void collect_mset(const Term& t, int shift, std::vector<Monomial>& out) {
  switch (t.kind()) {
    case Term::Kind::zero:
      return;
    case Term::Kind::atom:
      out.push_back({shift, t});
      return;
    case Term::Kind::h:
      collect_mset(t.child(), shift + 1, out);
      return;
    case Term::Kind::plus:
      for (const auto& c : t.children()) collect_mset(c, shift, out);
      return;
    case Term::Kind::app: {
      std::vector<Term> args;
      for (const auto& c : t.children()) args.push_back(canonicalize(c).to_term());
      out.push_back({shift, Term::app(t.symbol(), std::move(args))});
      return;
    }
  }
}

}  // namespace

CanonicalTerm canonicalize(const Term& t) {
  std::vector<Monomial> ms;
  collect_mset(t, 0, ms);
  return CanonicalTerm::from_monomials(std::move(ms));
}

std::vector<Monomial> mset(const Term& t) {
  std::vector<Monomial> out;
  collect_mset(t, 0, out);
  std::sort(out.begin(), out.end());
  return out;
}

int degree(const Term& t) { return canonicalize(t).degree(); }

Term apply(const Term& t, const Substitution& s) {
  if (s.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::zero:
      return t;
    case Term::Kind::atom:
      if (t.atom().is_variable())
        if (const Term* img = s.find(t.atom().name)) return *img;
      return t;
    case Term::Kind::h:
      return Term::h(apply(t.child(), s));
    case Term::Kind::plus:
    case Term::Kind::app: {
      std::vector<Term> kids;
      for (const auto& c : t.children()) kids.push_back(apply(c, s));
      return t.kind() == Term::Kind::plus ? Term::plus(std::move(kids))
                                          : Term::app(t.symbol(), std::move(kids));
    }
  }
  return t;
}

bool equal_mod_acunh(const Term& s, const Term& t) { return canonicalize(s) == canonicalize(t); }

Substitution normalized(const Substitution& s) {
  Substitution out;
  for (const auto& [k, v] : s.bindings()) out.bind(k, canonicalize(v).to_term());
  return out;
}

Substitution compose(const Substitution& a, const Substitution& b) {
  Substitution out;
  for (const auto& [k, v] : a.bindings()) out.bind(k, apply(v, b));
  for (const auto& [k, v] : b.bindings())
    if (!a.binds(k)) out.bind(k, v);
  return out;
}

bool equal_mod_acunh(const Substitution& a, const Substitution& b) {
  std::set<std::string> keys;
  for (const auto& [k, v] : a.bindings()) keys.insert(k);
  for (const auto& [k, v] : b.bindings()) keys.insert(k);
  for (const auto& k : keys)
    if (!equal_mod_acunh(a.image(k), b.image(k))) return false;
  return true;
}

void collect_atoms(const Term& t, std::set<Atom>& out) {
  switch (t.kind()) {
    case Term::Kind::zero:
      return;
    case Term::Kind::atom:
      out.insert(t.atom());
      return;
    case Term::Kind::h:
      collect_atoms(t.child(), out);
      return;
    case Term::Kind::plus:
    case Term::Kind::app:
      for (const auto& c : t.children()) collect_atoms(c, out);
      return;
  }
}

std::set<std::string> variables_of(const Term& t) {
  std::set<Atom> atoms;
  collect_atoms(t, atoms);
  std::set<std::string> out;
  for (const auto& a : atoms)
    if (a.is_variable()) out.insert(a.name);
  return out;
}

std::set<std::string> constants_of(const Term& t) {
  std::set<Atom> atoms;
  collect_atoms(t, atoms);
  std::set<std::string> out;
  for (const auto& a : atoms)
    if (a.is_constant()) out.insert(a.name);
  return out;
}

bool has_free_symbols(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::zero:
    case Term::Kind::atom:
      return false;
    case Term::Kind::h:
      return has_free_symbols(t.child());
    case Term::Kind::plus:
      for (const auto& c : t.children())
        if (has_free_symbols(c)) return true;
      return false;
    case Term::Kind::app:
      return true;
  }
  return false;
}

}  // namespace acunh
