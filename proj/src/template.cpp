#include "janaka/template.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <random>

#include "janaka/error.hpp"

namespace janaka {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Random: return "random";
    case Strategy::WithGF: return "withgf";
    case Strategy::GTemp: return "gtemp";
  }
  return "random";
}

Strategy strategy_from_string(const std::string& s) {
  std::string l;
  for (char c : s) l += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (l == "random") return Strategy::Random;
  if (l == "withgf" || l == "with-gf" || l == "with_gf") return Strategy::WithGF;
  if (l == "gtemp" || l == "g-temp" || l == "g_temp") return Strategy::GTemp;
  throw Error(ErrorCode::InvalidArgument, "unknown template strategy '" + s + "'");
}

const std::vector<Op>& binary_ops() {
  static const std::vector<Op> v{Op::And, Op::Or, Op::Implies, Op::Until};
  return v;
}
const std::vector<Op>& unary_ops() {
  static const std::vector<Op> v{Op::Globally, Op::Finally, Op::Next};
  return v;
}
const std::vector<Op>& all_ops() {
  static const std::vector<Op> v{Op::And,      Op::Or,      Op::Implies, Op::Until,
                                 Op::Globally, Op::Finally, Op::Next};
  return v;
}

static int op_rank(Op op) {
  const auto& a = all_ops();
  auto it = std::find(a.begin(), a.end(), op);
  return it == a.end() ? 100 : static_cast<int>(it - a.begin());
}

static std::vector<Op> canonical_ops(std::vector<Op> ops) {
  std::sort(ops.begin(), ops.end(), [](Op a, Op b) { return op_rank(a) < op_rank(b); });
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  return ops;
}

int Template::hole_count() const {
  int n = 0;
  for (int i : holes()) (void)i, ++n;
  return n;
}

std::vector<int> Template::holes() const {
  std::vector<int> out;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    if (i < 0) continue;
    const auto& n = nodes[i];
    if (n.is_hole()) out.push_back(i);
    stack.push_back(n.right);
    stack.push_back(n.left);
  }
  return out;
}

static int node_depth(const Template& t, int i) {
  if (i < 0) return 0;
  const auto& n = t.nodes[i];
  if (n.kind == TemplateNode::Kind::SubtreeHole) return n.max_depth;
  if (n.kind == TemplateNode::Kind::Fixed && n.label.is_literal()) return 1;
  return 1 + std::max(node_depth(t, n.left), node_depth(t, n.right));
}

int Template::depth() const { return node_depth(*this, root); }

static int add_formula(Template& t, const Formula& f) {
  TemplateNode n;
  if (f.is_literal()) {
    bool neg = f.op() == Op::Not;
    const Formula& a = neg ? f.child() : f;
    n.label = SlotLabel{a.op(), a.op() == Op::Atom ? a.name() : std::string(), neg};
  } else {
    n.label = SlotLabel{f.op(), {}, false};
    n.left = add_formula(t, f.left());
    if (is_binary(f.op())) n.right = add_formula(t, f.right());
  }
  t.nodes.push_back(n);
  return static_cast<int>(t.nodes.size()) - 1;
}

Template template_from_formula(const Formula& f) {
  Template t;
  t.source = f;
  t.root = add_formula(t, f);
  return t;
}

// ---------------------------------------------------------------------------
// text form

static std::string ops_text(const std::vector<Op>& ops) {
  std::string s = "{";
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (i) s += ',';
    s += op_symbol(ops[i]);
  }
  return s + "}";
}

static void format_node(const Template& t, int i, std::string& out) {
  const auto& n = t.nodes[i];
  switch (n.kind) {
    case TemplateNode::Kind::SubtreeHole:
      out += '?' + std::to_string(n.max_depth);
      return;
    case TemplateNode::Kind::Fixed:
      if (n.label.is_literal()) {
        out += to_string(n.label);
      } else if (n.label.op == Op::Not) {
        out += '!';
        format_node(t, n.left, out);
      } else if (is_unary(n.label.op)) {
        out += op_symbol(n.label.op);
        out += '(';
        format_node(t, n.left, out);
        out += ')';
      } else {
        out += '(';
        format_node(t, n.left, out);
        out += ' ';
        out += op_symbol(n.label.op);
        out += ' ';
        format_node(t, n.right, out);
        out += ')';
      }
      return;
    case TemplateNode::Kind::LabelHole: {
      bool any_unary = std::any_of(n.ops.begin(), n.ops.end(), is_unary);
      bool any_binary = std::any_of(n.ops.begin(), n.ops.end(), is_binary);
      if (!any_binary) {
        out += '?';
        if (n.ops != unary_ops()) out += ops_text(n.ops);
        out += '(';
        format_node(t, n.left, out);
        out += ')';
        return;
      }
      out += '(';
      format_node(t, n.left, out);
      out += " ?";
      if (any_unary || n.ops != binary_ops()) out += ops_text(n.ops);
      out += ' ';
      format_node(t, n.right, out);
      out += ')';
      return;
    }
  }
}

std::string format_template(const Template& t) {
  std::string out;
  format_node(t, t.root, out);
  return out;
}

namespace {

class TemplateParser {
 public:
  TemplateParser(std::string_view s, const PropositionSet& props, Template& t)
      : s_(s), props_(props), t_(t) {}

  int run() {
    skip();
    if (pos_ == s_.size()) throw Error(ErrorCode::EmptyInput, "template text is empty");
    int r = node();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& m) { throw Error(ErrorCode::SyntaxError, m, pos_); }
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
  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }
  int push(TemplateNode n) {
    t_.nodes.push_back(std::move(n));
    return static_cast<int>(t_.nodes.size()) - 1;
  }

  std::vector<Op> opset() {
    std::vector<Op> ops;
    expect("{");
    do {
      skip();
      bool found = false;
      for (Op op : all_ops()) {
        if (eat(op_symbol(op))) {
          ops.push_back(op);
          found = true;
          break;
        }
      }
      if (!found) fail("expected an operator in hole set");
    } while (eat(","));
    expect("}");
    return canonical_ops(ops);
  }

  int node() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '?') {
      ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        int k = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
          k = k * 10 + (s_[pos_++] - '0');
        if (k < 1) fail("hole depth must be at least 1");
        TemplateNode n;
        n.kind = TemplateNode::Kind::SubtreeHole;
        n.max_depth = k;
        return push(n);
      }
      TemplateNode n;
      n.kind = TemplateNode::Kind::LabelHole;
      skip();
      n.ops = (pos_ < s_.size() && s_[pos_] == '{') ? opset() : unary_ops();
      if (std::any_of(n.ops.begin(), n.ops.end(), is_binary)) fail("prefix label hole with binary operators");
      expect("(");
      n.left = node();
      expect(")");
      return push(n);
    }
    if (c == '(') {
      ++pos_;
      int l = node();
      TemplateNode n;
      n.left = l;
      skip();
      if (eat("?")) {
        n.kind = TemplateNode::Kind::LabelHole;
        skip();
        n.ops = (pos_ < s_.size() && s_[pos_] == '{') ? opset() : binary_ops();
      } else {
        bool found = false;
        for (Op op : binary_ops()) {
          if (eat(op_symbol(op))) {
            n.label = SlotLabel{op, {}, false};
            found = true;
            break;
          }
        }
        if (!found) fail("expected a binary operator");
      }
      n.right = node();
      expect(")");
      if (n.kind == TemplateNode::Kind::LabelHole &&
          std::any_of(n.ops.begin(), n.ops.end(), is_unary)) {
        auto& r = t_.nodes[n.right];
        if (r.kind != TemplateNode::Kind::SubtreeHole)
          fail("a label hole with unary operators needs a subtree hole on the right");
        r.optional = true;
      }
      return push(n);
    }
    if (c == '!') {
      ++pos_;
      int child = node();
      TemplateNode n;
      const auto& ch = t_.nodes[child];
      if (ch.kind == TemplateNode::Kind::Fixed && ch.label.is_literal() && !ch.label.negated) {
        n.label = ch.label;
        n.label.negated = true;
        t_.nodes.pop_back();
        return push(n);
      }
      n.label = SlotLabel{Op::Not, {}, false};
      n.left = child;
      return push(n);
    }
    if (c == 'G' || c == 'F' || c == 'X') {
      ++pos_;
      TemplateNode n;
      n.label = SlotLabel{c == 'G' ? Op::Globally : c == 'F' ? Op::Finally : Op::Next, {}, false};
      expect("(");
      n.left = node();
      expect(")");
      return push(n);
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::islower(static_cast<unsigned char>(s_[pos_])) ||
                                  std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      TemplateNode n;
      if (name == "true") {
        n.label = SlotLabel{Op::True, {}, false};
      } else {
        if (!props_.contains(name))
          throw Error(ErrorCode::UnknownAtom, "unknown atom '" + name + "'", start);
        n.label = SlotLabel{Op::Atom, name, false};
      }
      return push(n);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  const PropositionSet& props_;
  Template& t_;
  std::size_t pos_ = 0;
};

Formula fixed_formula(const Template& t, int i) {
  const auto& n = t.nodes[i];
  if (n.is_hole()) throw Error(ErrorCode::InvalidArgument, "template still has holes");
  if (n.label.is_literal()) {
    Formula a = n.label.op == Op::True ? Formula::truth() : Formula::atom(n.label.atom);
    return n.label.negated ? Formula::negation(a) : a;
  }
  if (n.label.op == Op::Not) return Formula::negation(fixed_formula(t, n.left));
  if (is_unary(n.label.op)) return Formula::unary(n.label.op, fixed_formula(t, n.left));
  return Formula::binary(n.label.op, fixed_formula(t, n.left), fixed_formula(t, n.right));
}

}  // namespace

Template parse_template(std::string_view text, const PropositionSet& props) {
  Template t;
  t.root = TemplateParser(text, props, t).run();
  if (t.hole_count() == 0) t.source = fixed_formula(t, t.root);
  return t;
}

// ---------------------------------------------------------------------------
// generation

static std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {

bool eligible(const TemplateNode& n, Strategy s) {
  if (n.kind != TemplateNode::Kind::Fixed) return false;
  if (n.label.op == Op::True) return false;
  if (s == Strategy::WithGF && (n.label.op == Op::Globally || n.label.op == Op::Finally))
    return false;
  return true;
}

void apply_rule(Template& t, int i, int d) {
  TemplateNode& n = t.nodes[i];
  if (n.label.is_literal()) {
    n.kind = TemplateNode::Kind::SubtreeHole;
    n.max_depth = d;
    return;
  }
  n.kind = TemplateNode::Kind::LabelHole;
  if (is_binary(n.label.op)) {
    n.ops = binary_ops();
    return;
  }
  n.ops = all_ops();
  TemplateNode h;
  h.kind = TemplateNode::Kind::SubtreeHole;
  h.max_depth = d;
  h.optional = true;
  t.nodes.push_back(h);
  t.nodes[i].right = static_cast<int>(t.nodes.size()) - 1;
}

std::vector<int> bfs_order(const Template& t, int start) {
  std::vector<int> order;
  std::deque<int> q{start};
  while (!q.empty()) {
    int i = q.front();
    q.pop_front();
    order.push_back(i);
    if (t.nodes[i].left >= 0) q.push_back(t.nodes[i].left);
    if (t.nodes[i].right >= 0) q.push_back(t.nodes[i].right);
  }
  return order;
}

}  // namespace

std::vector<Template> make_templates(const Formula& f, const TemplateOptions& opt) {
  if (opt.d < 1) throw Error(ErrorCode::InvalidArgument, "hole depth d must be at least 1");
  if (!(opt.hole_prob > 0 && opt.hole_prob <= 1))
    throw Error(ErrorCode::InvalidArgument, "hole probability must lie in (0,1]");
  if (opt.count < 1) throw Error(ErrorCode::InvalidArgument, "template count must be at least 1");
  if (f.depth() > opt.max_source_depth)
    throw Error(ErrorCode::DepthExceeded, "source formula depth " + std::to_string(f.depth()) +
                                              " exceeds the bound " +
                                              std::to_string(opt.max_source_depth));

  const Template base = template_from_formula(f);
  std::vector<Template> out;
  for (int k = 0; k < opt.count; ++k) {
    const std::uint64_t seed = splitmix64(opt.seed ^ splitmix64(static_cast<std::uint64_t>(k) + 1));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    Template t;
    for (int attempt = 0;; ++attempt) {
      t = base;
      int start = t.root;
      if (opt.strategy == Strategy::GTemp) {
        TemplateNode w;
        w.kind = TemplateNode::Kind::LabelHole;
        w.ops = {Op::Globally, Op::Finally};
        w.left = t.root;
        t.nodes.push_back(w);
        t.root = static_cast<int>(t.nodes.size()) - 1;
      }
      int placed = 0;
      for (int i : bfs_order(t, start)) {
        if (!eligible(t.nodes[i], opt.strategy)) continue;
        if (coin(rng) < opt.hole_prob) {
          apply_rule(t, i, opt.d);
          ++placed;
        }
      }
      if (t.hole_count() > 0) break;
      if (attempt + 1 >= opt.zero_hole_retries) {
        std::vector<int> cand;
        for (int i : bfs_order(t, start))
          if (eligible(t.nodes[i], opt.strategy)) cand.push_back(i);
        if (cand.empty()) throw Error(ErrorCode::NoTemplates, "no node can take a hole");
        std::uniform_int_distribution<std::size_t> pick(0, cand.size() - 1);
        apply_rule(t, cand[pick(rng)], opt.d);
        break;
      }
      (void)placed;
    }
    t.source = f;
    t.strategy = opt.strategy;
    t.seed = seed;
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// fillings

double subtree_library_size(int k, std::size_t props) {
  double lits = 2.0 * static_cast<double>(props);
  double n = lits;
  for (int level = 2; level <= k; ++level) n = lits + 3.0 * n + 4.0 * n * n;
  return n;
}

std::vector<Formula> subtree_library(int k, const PropositionSet& props) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "hole depth must be at least 1");
  std::vector<Formula> lits;
  for (const auto& a : props.names()) {
    lits.push_back(Formula::atom(a));
    lits.push_back(Formula::negation(Formula::atom(a)));
  }
  std::vector<Formula> cur = lits;
  for (int level = 2; level <= k; ++level) {
    std::vector<Formula> next;
    next.reserve(static_cast<std::size_t>(subtree_library_size(level, props.size())));
    for (Op op : binary_ops())
      for (const auto& a : cur)
        for (const auto& b : cur) next.push_back(Formula::binary(op, a, b));
    for (Op op : unary_ops())
      for (const auto& a : cur) next.push_back(Formula::unary(op, a));
    next.insert(next.end(), lits.begin(), lits.end());
    cur = std::move(next);
  }
  return cur;
}

namespace {

std::vector<Formula> node_options(const Template& t, int i, const PropositionSet& props) {
  const auto& n = t.nodes[i];
  std::vector<Formula> out;
  if (n.kind == TemplateNode::Kind::SubtreeHole) return subtree_library(n.max_depth, props);
  if (n.kind == TemplateNode::Kind::Fixed && n.label.is_literal()) return {fixed_formula(t, i)};
  std::vector<Op> ops = n.kind == TemplateNode::Kind::Fixed ? std::vector<Op>{n.label.op} : n.ops;
  auto left = node_options(t, n.left, props);
  std::vector<Formula> right;
  bool need_right = std::any_of(ops.begin(), ops.end(), is_binary);
  if (need_right) right = node_options(t, n.right, props);
  for (Op op : ops) {
    if (is_binary(op)) {
      for (const auto& l : left)
        for (const auto& r : right) out.push_back(Formula::binary(op, l, r));
    } else if (op == Op::Not) {
      for (const auto& l : left) out.push_back(Formula::negation(l));
    } else {
      for (const auto& l : left) out.push_back(Formula::unary(op, l));
    }
  }
  return out;
}

double node_count(const Template& t, int i, std::size_t props) {
  const auto& n = t.nodes[i];
  if (n.kind == TemplateNode::Kind::SubtreeHole) return subtree_library_size(n.max_depth, props);
  if (n.kind == TemplateNode::Kind::Fixed && n.label.is_literal()) return 1;
  std::vector<Op> ops = n.kind == TemplateNode::Kind::Fixed ? std::vector<Op>{n.label.op} : n.ops;
  double l = node_count(t, n.left, props);
  double r = n.right >= 0 ? node_count(t, n.right, props) : 0;
  double total = 0;
  for (Op op : ops) total += is_binary(op) ? l * r : l;
  return total;
}

}  // namespace

std::vector<Filling> enumerate_fillings(const Template& t, const PropositionSet& props) {
  std::vector<Filling> out;
  const int d = t.depth();
  for (auto& f : node_options(t, t.root, props)) {
    IndexedTree tree = tree_index(f, d);
    out.push_back(Filling{std::move(f), std::move(tree)});
  }
  return out;
}

double count_fillings(const Template& t, std::size_t props) { return node_count(t, t.root, props); }

}  // namespace janaka
