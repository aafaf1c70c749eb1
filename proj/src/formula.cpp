#include "janaka/formula.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "janaka/error.hpp"

namespace janaka {

PropositionSet::PropositionSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::InvalidArgument, "proposition set is empty");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    bool ok = !n.empty() && n[0] >= 'a' && n[0] <= 'z' && n != "true";
    for (char c : n) ok = ok && (std::islower(static_cast<unsigned char>(c)) ||
                                 std::isdigit(static_cast<unsigned char>(c)) || c == '_');
    if (!ok) throw Error(ErrorCode::InvalidArgument, "bad proposition name '" + n + "'");
    if (!seen.insert(n).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate proposition '" + n + "'");
  }
}

std::optional<std::size_t> PropositionSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

int arity(Op op) noexcept {
  switch (op) {
    case Op::True:
    case Op::Atom: return 0;
    case Op::Not:
    case Op::Next:
    case Op::Finally:
    case Op::Globally: return 1;
    default: return 2;
  }
}
bool is_binary(Op op) noexcept { return arity(op) == 2; }
bool is_unary(Op op) noexcept { return arity(op) == 1; }
bool is_temporal(Op op) noexcept {
  return op == Op::Next || op == Op::Finally || op == Op::Globally || op == Op::Until;
}

std::string_view op_symbol(Op op) noexcept {
  switch (op) {
    case Op::True: return "true";
    case Op::Atom: return "";
    case Op::Not: return "!";
    case Op::And: return "&";
    case Op::Or: return "|";
    case Op::Implies: return "->";
    case Op::Until: return "U";
    case Op::Next: return "X";
    case Op::Finally: return "F";
    case Op::Globally: return "G";
  }
  return "";
}

struct Formula::Node {
  Op op;
  std::string name;
  std::optional<Formula> l;
  std::optional<Formula> r;
  int depth = 1;
  std::size_t size = 1;
};

Op Formula::op() const noexcept { return node_->op; }
const std::string& Formula::name() const noexcept { return node_->name; }
int Formula::depth() const noexcept { return node_->depth; }
std::size_t Formula::size() const noexcept { return node_->size; }

Formula Formula::make(Op op, std::string name, std::optional<Formula> l,
                      std::optional<Formula> r) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  int d = 0;
  std::size_t s = 1;
  if (l) { d = std::max(d, l->depth()); s += l->size(); }
  if (r) { d = std::max(d, r->depth()); s += r->size(); }
  // a negated atom is a leaf for depth purposes
  if (op == Op::Not && l && (l->op() == Op::Atom || l->op() == Op::True))
    n->depth = 1;
  else
    n->depth = d + 1;
  n->size = s;
  n->l = std::move(l);
  n->r = std::move(r);
  return Formula(std::move(n));
}

Formula Formula::truth() { return make(Op::True, "", std::nullopt, std::nullopt); }
Formula Formula::atom(std::string name) {
  return make(Op::Atom, std::move(name), std::nullopt, std::nullopt);
}
Formula Formula::negation(Formula c) { return make(Op::Not, "", std::move(c), std::nullopt); }
Formula Formula::conj(Formula l, Formula r) { return binary(Op::And, std::move(l), std::move(r)); }
Formula Formula::disj(Formula l, Formula r) { return binary(Op::Or, std::move(l), std::move(r)); }
Formula Formula::implies(Formula l, Formula r) {
  return binary(Op::Implies, std::move(l), std::move(r));
}
Formula Formula::until(Formula l, Formula r) {
  return binary(Op::Until, std::move(l), std::move(r));
}
Formula Formula::next(Formula c) { return unary(Op::Next, std::move(c)); }
Formula Formula::finally(Formula c) { return unary(Op::Finally, std::move(c)); }
Formula Formula::globally(Formula c) { return unary(Op::Globally, std::move(c)); }

Formula Formula::unary(Op op, Formula child) {
  if (!is_unary(op)) throw Error(ErrorCode::InvalidArgument, "operator is not unary");
  return make(op, "", std::move(child), std::nullopt);
}

Formula Formula::binary(Op op, Formula l, Formula r) {
  if (!is_binary(op)) throw Error(ErrorCode::InvalidArgument, "operator is not binary");
  return make(op, "", std::move(l), std::move(r));
}

const Formula& Formula::left() const {
  if (!node_->l) throw Error(ErrorCode::InvalidArgument, "formula node has no children");
  return *node_->l;
}

const Formula& Formula::right() const {
  if (!node_->r) throw Error(ErrorCode::InvalidArgument, "formula node has no right child");
  return *node_->r;
}

bool Formula::is_literal() const noexcept {
  Op o = op();
  if (o == Op::Atom || o == Op::True) return true;
  if (o != Op::Not) return false;
  Op c = node_->l->op();
  return c == Op::Atom || c == Op::True;
}

static int compare(const Formula& a, const Formula& b) {
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  if (a.op() == Op::Atom) {
    int c = a.name().compare(b.name());
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  int n = arity(a.op());
  if (n >= 1) {
    if (int c = compare(a.left(), b.left())) return c;
  }
  if (n == 2) return compare(a.right(), b.right());
  return 0;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return compare(a, b) == 0;
}
bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(std::string_view text, const PropositionSet* props) : s_(text), props_(props) {}

  Formula run() {
    skip();
    if (pos_ == s_.size()) throw Error(ErrorCode::EmptyInput, "formula text is empty");
    Formula f = implies();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorCode::SyntaxError, msg, pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Formula implies() {
    Formula l = disjunction();
    if (eat("->")) return Formula::implies(l, implies());
    return l;
  }

  Formula disjunction() {
    Formula l = conjunction();
    while (eat("|")) l = Formula::disj(l, conjunction());
    return l;
  }

  Formula conjunction() {
    Formula l = until();
    while (eat("&")) l = Formula::conj(l, until());
    return l;
  }

  Formula until() {
    Formula l = unary();
    if (eat("U")) return Formula::until(l, until());
    return l;
  }

  Formula unary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    switch (c) {
      case '!': ++pos_; return Formula::negation(unary());
      case 'G': ++pos_; return Formula::globally(unary());
      case 'F': ++pos_; return Formula::finally(unary());
      case 'X': ++pos_; return Formula::next(unary());
      case '(': {
        ++pos_;
        Formula f = implies();
        if (!eat(")")) fail("expected ')'");
        return f;
      }
      default: break;
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::islower(static_cast<unsigned char>(s_[pos_])) ||
              std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "true") return Formula::truth();
      if (props_ && !props_->contains(name))
        throw Error(ErrorCode::UnknownAtom, "unknown atom '" + name + "'", start);
      return Formula::atom(std::move(name));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  const PropositionSet* props_;
  std::size_t pos_ = 0;
};

void format_into(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::Atom: out += f.name(); return;
    case Op::Not:
      out += '!';
      format_into(f.child(), out);
      return;
    case Op::Next:
    case Op::Finally:
    case Op::Globally:
      out += op_symbol(f.op());
      out += '(';
      format_into(f.child(), out);
      out += ')';
      return;
    default:
      out += '(';
      format_into(f.left(), out);
      out += ' ';
      out += op_symbol(f.op());
      out += ' ';
      format_into(f.right(), out);
      out += ')';
      return;
  }
}

Formula nnf(const Formula& f, bool neg) {
  switch (f.op()) {
    case Op::True:
    case Op::Atom: return neg ? Formula::negation(f) : f;
    case Op::Not: return nnf(f.child(), !neg);
    case Op::And:
      return neg ? Formula::disj(nnf(f.left(), true), nnf(f.right(), true))
                 : Formula::conj(nnf(f.left(), false), nnf(f.right(), false));
    case Op::Or:
      return neg ? Formula::conj(nnf(f.left(), true), nnf(f.right(), true))
                 : Formula::disj(nnf(f.left(), false), nnf(f.right(), false));
    case Op::Implies:
      return neg ? Formula::conj(nnf(f.left(), false), nnf(f.right(), true))
                 : Formula::implies(nnf(f.left(), false), nnf(f.right(), false));
    case Op::Next: return Formula::next(nnf(f.child(), neg));
    case Op::Finally:
      return neg ? Formula::globally(nnf(f.child(), true)) : Formula::finally(nnf(f.child(), false));
    case Op::Globally:
      return neg ? Formula::finally(nnf(f.child(), true)) : Formula::globally(nnf(f.child(), false));
    case Op::Until:
      if (neg)
        throw Error(ErrorCode::UnsupportedNegation,
                    "negated until has no NNF without a release operator: " + format_formula(f));
      return Formula::until(nnf(f.left(), false), nnf(f.right(), false));
  }
  return f;
}

void collect_atoms(const Formula& f, std::vector<std::string>& out) {
  if (f.op() == Op::Atom) {
    if (std::find(out.begin(), out.end(), f.name()) == out.end()) out.push_back(f.name());
    return;
  }
  int n = arity(f.op());
  if (n >= 1) collect_atoms(f.left(), out);
  if (n == 2) collect_atoms(f.right(), out);
}

}  // namespace

Formula parse_formula(std::string_view text, const PropositionSet& props) {
  return Parser(text, &props).run();
}

Formula parse_formula_unchecked(std::string_view text) { return Parser(text, nullptr).run(); }

std::string format_formula(const Formula& f) {
  std::string out;
  format_into(f, out);
  return out;
}

Formula to_nnf(const Formula& f) { return nnf(f, false); }

bool is_nnf(const Formula& f) noexcept {
  if (f.op() == Op::Not) return f.is_literal();
  int n = arity(f.op());
  if (n >= 1 && !is_nnf(f.left())) return false;
  if (n == 2 && !is_nnf(f.right())) return false;
  return true;
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::vector<std::string> out;
  collect_atoms(f, out);
  return out;
}

bool is_propositional(const Formula& f) noexcept {
  if (is_temporal(f.op())) return false;
  int n = arity(f.op());
  if (n >= 1 && !is_propositional(f.left())) return false;
  if (n == 2 && !is_propositional(f.right())) return false;
  return true;
}

}  // namespace janaka
