#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "janaka/formula.hpp"
#include "janaka/indexed_tree.hpp"

namespace janaka {

enum class Strategy { Random, WithGF, GTemp };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

/// Operator classes used by the hole rules.
const std::vector<Op>& binary_ops();  // & | -> U
const std::vector<Op>& unary_ops();   // G F X
const std::vector<Op>& all_ops();     // & | -> U G F X

struct TemplateNode {
  enum class Kind { Fixed, LabelHole, SubtreeHole };
  Kind kind = Kind::Fixed;
  SlotLabel label;          // Fixed
  std::vector<Op> ops;      // LabelHole, canonical order
  int max_depth = 0;        // SubtreeHole
  bool optional = false;    // SubtreeHole dropped when the parent takes a unary label
  int left = -1, right = -1;

  bool is_hole() const noexcept { return kind != Kind::Fixed; }
};

struct Template {
  std::vector<TemplateNode> nodes;
  int root = -1;
  Formula source = Formula::truth();
  Strategy strategy = Strategy::Random;
  std::uint64_t seed = 0;

  int hole_count() const;
  /// Depth of the deepest formula any filling can produce.
  int depth() const;
  /// Hole node indices in pre-order (root first, left before right).
  std::vector<int> holes() const;
};

/// Zero-hole template wrapping f.
Template template_from_formula(const Formula& f);

/// Text form: the formula grammar plus "?k" (subtree hole of depth <= k),
/// "?(A)" / "?{G,F}(A)" (unary label hole), "(A ? B)" / "(A ?{&,|} B)"
/// (binary label hole). A label hole whose set mixes unary and binary
/// operators is written "(A ?{...} ?k)"; its right hole is optional.
std::string format_template(const Template& t);
Template parse_template(std::string_view text, const PropositionSet& props);

struct TemplateOptions {
  int d = 2;
  Strategy strategy = Strategy::Random;
  double hole_prob = 0.2;
  std::uint64_t seed = 1;
  int count = 4;
  /// Sources deeper than this raise DepthExceeded.
  int max_source_depth = 12;
  int zero_hole_retries = 16;
};

std::vector<Template> make_templates(const Formula& f, const TemplateOptions& opt);

/// Every formula of depth <= k over the hole alphabet (operators & | -> U
/// G F X, literals p and !p), operators before literals, in declared order.
std::vector<Formula> subtree_library(int k, const PropositionSet& props);
/// Size of subtree_library(k, props) without building it.
double subtree_library_size(int k, std::size_t props);

struct Filling {
  Formula formula;
  IndexedTree tree;
};

/// All fillings of t, in deterministic order (first hole most significant).
std::vector<Filling> enumerate_fillings(const Template& t, const PropositionSet& props);
/// Number of fillings, without building them.
double count_fillings(const Template& t, std::size_t props);

}  // namespace janaka
