#include "janaka/indexed_tree.hpp"

#include "janaka/error.hpp"

namespace janaka {

std::string to_string(const SlotLabel& l) {
  if (l.op == Op::True) return l.negated ? "!true" : "true";
  if (l.op == Op::Atom) return (l.negated ? "!" : "") + l.atom;
  return std::string(op_symbol(l.op));
}

IndexedTree::IndexedTree(int depth) : depth_(depth) {
  if (depth < 1 || depth > 20) throw Error(ErrorCode::InvalidArgument, "tree depth out of range");
  slots_.resize(static_cast<std::size_t>(1) << depth);
}

std::string IndexedTree::violation() const {
  const int n = slot_count();
  if (!slots_[1]) return "root slot is unused";
  for (int i = 1; i <= n; ++i) {
    const bool has_children = 2 * i <= n;
    const auto* l = has_children ? &slots_[2 * i] : nullptr;
    const auto* r = has_children ? &slots_[2 * i + 1] : nullptr;
    const std::string at = "slot " + std::to_string(i) + ": ";
    if (!slots_[i]) {
      if (has_children && (*l || *r)) return at + "unused slot has a labeled child";
      continue;
    }
    const SlotLabel& lab = *slots_[i];
    if (lab.is_literal()) {
      if (has_children && (*l || *r)) return at + "literal slot has a labeled child";
      continue;
    }
    if (!has_children) return at + "operator at leaf level";
    if (is_binary(lab.op)) {
      if (!*l || !*r) return at + "binary slot needs two labeled children";
    } else {
      if (!*l) return at + "unary slot needs a labeled left child";
      if (*r) return at + "unary slot has a labeled right child";
    }
  }
  return {};
}

static Formula decode_at(const IndexedTree& t, int i) {
  const SlotLabel& lab = *t.at(i);
  if (lab.is_literal()) {
    Formula a = lab.op == Op::True ? Formula::truth() : Formula::atom(lab.atom);
    return lab.negated ? Formula::negation(a) : a;
  }
  if (is_binary(lab.op)) return Formula::binary(lab.op, decode_at(t, 2 * i), decode_at(t, 2 * i + 1));
  return Formula::unary(lab.op, decode_at(t, 2 * i));
}

Formula IndexedTree::decode() const {
  if (auto v = violation(); !v.empty()) throw Error(ErrorCode::InvalidArgument, v);
  return decode_at(*this, 1);
}

static void embed(const Formula& f, IndexedTree& t, int i) {
  if (f.is_literal()) {
    bool neg = f.op() == Op::Not;
    const Formula& a = neg ? f.child() : f;
    t.set(i, SlotLabel{a.op(), a.op() == Op::Atom ? a.name() : std::string(), neg});
    return;
  }
  t.set(i, SlotLabel{f.op(), {}, false});
  embed(f.left(), t, 2 * i);
  if (is_binary(f.op())) embed(f.right(), t, 2 * i + 1);
}

IndexedTree tree_index(const Formula& f, int d) {
  if (f.depth() > d)
    throw Error(ErrorCode::DepthExceeded, "formula depth " + std::to_string(f.depth()) +
                                              " exceeds tree depth " + std::to_string(d));
  IndexedTree t(d);
  embed(f, t, 1);
  return t;
}

}  // namespace janaka
