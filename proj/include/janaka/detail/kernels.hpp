#pragma once

// Column kernels shared by the evaluators and the repair engine. A column
// holds one node's value at every position of every trace of a sample, as
// an interval [lo, hi]. Exact columns have lo == hi; interval columns give
// bounds over every way the unknown parts of a partial formula could be
// filled in. Both go through the same arithmetic so exact results agree
// bit for bit wherever they are computed.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "janaka/formula.hpp"
#include "janaka/semantics.hpp"
#include "janaka/trace.hpp"

namespace janaka::detail {

struct Label {
  Op op = Op::Atom;
  int atom = -1;  // index into the proposition set for Op::Atom
  bool neg = false;

  bool is_literal() const noexcept { return op == Op::Atom || op == Op::True; }
  friend bool operator==(const Label&, const Label&) = default;
};

struct Layout {
  std::vector<std::size_t> offset;  // start of each trace; offset.back() == total
  std::size_t total = 0;

  explicit Layout(const Sample& s);
  std::size_t traces() const { return offset.size() - 1; }
  std::size_t length(std::size_t k) const { return offset[k + 1] - offset[k]; }
};

struct Column {
  std::vector<double> lo, hi;
  std::vector<std::uint8_t> dec;  // robust decisiveness, exact columns only

  void resize(std::size_t n, bool with_dec) {
    lo.resize(n);
    hi.resize(n);
    if (with_dec) dec.resize(n);
  }
};

/// Computes `out` for a node labeled `label` from its child columns. Unused
/// children may be null. With `with_dec`, inputs must be exact and carry dec.
void eval_node(const SemanticsParams& p, const Label& label, const Sample& s, const Layout& lay,
               const Column* a, const Column* b, Column& out, bool with_dec = false);

/// Post-order node list; the root is last.
struct Program {
  struct Node {
    Label label;
    int l = -1, r = -1;
  };
  std::vector<Node> nodes;
};

/// Robust programs reject non-literal negation with NotInNNF.
Program compile(const Formula& f, const PropositionSet& props, SemanticsKind kind);

/// Root column of an exact evaluation.
Column run(const Program& prog, const SemanticsParams& p, const Sample& s, const Layout& lay,
           bool with_dec);

}  // namespace janaka::detail
