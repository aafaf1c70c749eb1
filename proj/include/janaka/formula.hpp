#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace janaka {

/// Ordered set of atom names. Order is stable and drives every
/// deterministic enumeration (literal order, trace serialization).
class PropositionSet {
 public:
  PropositionSet() = default;
  explicit PropositionSet(std::vector<std::string> names);

  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::string& operator[](std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  friend bool operator==(const PropositionSet&, const PropositionSet&) = default;

 private:
  std::vector<std::string> names_;
};

enum class Op : std::uint8_t {
  True,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Until,
  Next,
  Finally,
  Globally,
};

int arity(Op op) noexcept;
bool is_binary(Op op) noexcept;
bool is_unary(Op op) noexcept;
bool is_temporal(Op op) noexcept;
/// Concrete-syntax token: "&", "|", "->", "U", "G", "F", "X", "!", "true".
std::string_view op_symbol(Op op) noexcept;

/// Immutable LTL syntax tree with shared structure. Copies are cheap.
class Formula {
 public:
  static Formula truth();
  static Formula atom(std::string name);
  static Formula negation(Formula child);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula implies(Formula l, Formula r);
  static Formula until(Formula l, Formula r);
  static Formula next(Formula child);
  static Formula finally(Formula child);
  static Formula globally(Formula child);
  static Formula unary(Op op, Formula child);
  static Formula binary(Op op, Formula l, Formula r);

  Op op() const noexcept;
  /// Atom name; empty for non-atoms.
  const std::string& name() const noexcept;
  const Formula& left() const;
  const Formula& right() const;
  /// The only child of a unary node.
  const Formula& child() const { return left(); }

  /// Atom or negated atom (including `true` / `!true`).
  bool is_literal() const noexcept;
  /// Leaves (atoms, negated atoms) have depth 1.
  int depth() const noexcept;
  /// Number of AST nodes; a negated atom counts as two.
  std::size_t size() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, std::string name, std::optional<Formula> l,
                      std::optional<Formula> r);

  std::shared_ptr<const Node> node_;
};

/// Parses the fully-parenthesized or precedence-based concrete syntax.
/// Precedence: unary > U > & > | > ->; U and -> associate to the right.
/// `true` is reserved and need not be declared in `props`.
Formula parse_formula(std::string_view text, const PropositionSet& props);
/// Same grammar, no atom check.
Formula parse_formula_unchecked(std::string_view text);

/// Canonical fully parenthesized text, e.g. "G((p -> X(q)))".
std::string format_formula(const Formula& f);

/// Pushes negation onto atoms. Throws UnsupportedNegation on !(a U b).
Formula to_nnf(const Formula& f);
bool is_nnf(const Formula& f) noexcept;
/// Distinct atom names in order of first occurrence (left to right).
std::vector<std::string> atoms_of(const Formula& f);
/// True iff no temporal operator occurs.
bool is_propositional(const Formula& f) noexcept;

}  // namespace janaka
