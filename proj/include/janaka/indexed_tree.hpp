#pragma once

#include <optional>
#include <string>
#include <vector>

#include "janaka/formula.hpp"

namespace janaka {

/// Label of one slot: an operator, or a literal (op == Atom/True, possibly negated).
struct SlotLabel {
  Op op = Op::Atom;
  std::string atom;
  bool negated = false;

  bool is_literal() const noexcept { return op == Op::Atom || op == Op::True; }
  friend bool operator==(const SlotLabel&, const SlotLabel&) = default;
};

std::string to_string(const SlotLabel& l);

/// Complete binary tree of depth d stored in heap order: root at 1, children
/// of i at 2i and 2i+1. Index 0 is never used.
class IndexedTree {
 public:
  explicit IndexedTree(int depth);

  int depth() const noexcept { return depth_; }
  int slot_count() const noexcept { return (1 << depth_) - 1; }
  const std::optional<SlotLabel>& at(int i) const { return slots_.at(i); }
  void set(int i, std::optional<SlotLabel> label) { slots_.at(i) = std::move(label); }

  /// Empty when all structural rules hold, else a description of the first violation.
  std::string violation() const;
  bool valid() const { return violation().empty(); }
  Formula decode() const;

 private:
  int depth_;
  std::vector<std::optional<SlotLabel>> slots_;
};

/// Embeds f into a tree of depth d. Unary children go to the left slot.
IndexedTree tree_index(const Formula& f, int d);

}  // namespace janaka
