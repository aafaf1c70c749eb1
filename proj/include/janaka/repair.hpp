#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "janaka/formula.hpp"
#include "janaka/semantics.hpp"
#include "janaka/template.hpp"
#include "janaka/trace.hpp"

namespace janaka {

/// True when f should be rejected: a binary node with identical children,
/// x | !x or x & !x, F directly under F or G directly under G, or G/F over a
/// propositional tautology. Checked at every node.
bool is_trivial(const Formula& f);
/// True iff a propositional formula holds under every assignment.
bool is_tautology(const Formula& f);

struct SearchBudget {
  double time_limit_s = 60.0;
  /// 0 means unlimited.
  long long node_limit = 0;
  int threads = 1;
};

struct PruneEvent {
  int template_index;
  /// Option index per hole (pre-order), -1 where still open.
  std::vector<int> choices;
  double bound;
  double incumbent;
};

struct RepairOptions {
  bool filter_trivial = true;
  /// Only accept fillings that every trace satisfies.
  bool require_sat = false;
  /// Largest subtree-hole library accepted before giving up with InvalidArgument.
  double max_library = 250000;
  std::function<void(const PruneEvent&)> on_prune;
};

struct TraceScore {
  double score = 0.0;
  bool sat = false;
};

struct RepairOutcome {
  std::optional<Formula> best;
  int template_index = -1;
  /// Sum of root scores over the sample, and its mean.
  double total = -std::numeric_limits<double>::infinity();
  double fitness = -std::numeric_limits<double>::infinity();
  std::vector<TraceScore> per_trace;
  bool all_sat = false;
  long long explored = 0;  // complete fillings scored
  long long nodes = 0;     // search nodes visited
  long long pruned = 0;
  double elapsed_s = 0.0;
  bool threshold_met = false;
  bool budget_expired = false;
  /// Incumbent totals in the order they were found.
  std::vector<double> incumbents;
  std::size_t templates_searched = 0;
};

/// Subtree-hole libraries with their exact columns over one sample.
class LibraryCache;

/// One template bound to a sample: exact scoring and admissible upper
/// bounds for partial fillings. Exposed for testing and tooling.
class RepairProblem {
 public:
  RepairProblem(const Template& t, const Sample& s, const SemanticsParams& p,
                const RepairOptions& opt = {});
  RepairProblem(const Template& t, const Sample& s, const SemanticsParams& p,
                const RepairOptions& opt, std::shared_ptr<LibraryCache> cache);
  ~RepairProblem();
  RepairProblem(RepairProblem&&) noexcept;

  /// Number of holes, in pre-order.
  int holes() const;
  int options(int hole) const;
  /// Holes that only exist when their parent label is binary.
  bool optional_hole(int hole) const;
  /// True when the hole has no effect under these choices.
  bool inactive(int hole, const std::vector<int>& choices) const;

  /// Upper bound of the sample total over all completions of `choices`
  /// (-1 marks an open hole). Exact when every active hole is chosen.
  double bound(const std::vector<int>& choices);
  double evaluate(const std::vector<int>& choices);
  Formula formula(const std::vector<int>& choices) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

RepairOutcome repair(const Sample& s, const std::vector<Template>& templates,
                     const SemanticsParams& p, double kappa, const SearchBudget& budget,
                     const RepairOptions& opt = {});

}  // namespace janaka
