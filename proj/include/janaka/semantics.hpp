#pragma once

#include <string>
#include <vector>

#include "janaka/formula.hpp"
#include "janaka/trace.hpp"

namespace janaka {

enum class SemanticsKind { Robust, Discounted };

std::string to_string(SemanticsKind k);
SemanticsKind semantics_from_string(const std::string& s);

struct SemanticsParams {
  double alpha = 0.9;
  double beta = 0.9;
  double gamma = 0.1;
  SemanticsKind kind = SemanticsKind::Robust;

  /// Throws InvalidArgument unless 0 < alpha <= 1, 0 < beta <= 1, 0 <= gamma < 1.
  void validate() const;
};

struct Valuation {
  double value = 0.0;
  /// False when some inconclusive (gamma) branch influenced the value.
  bool decisive = true;
};

/// Robust valuation at position 0. f must be in NNF (NotInNNF otherwise).
Valuation robust_value(const Formula& f, const Trace& w, const PropositionSet& props,
                       const SemanticsParams& p);
/// Discounted valuation at position 0, in [0,1]. General negation allowed.
Valuation discounted_value(const Formula& f, const Trace& w, const PropositionSet& props,
                           const SemanticsParams& p);
/// Dispatches on p.kind.
Valuation valuate(const Formula& f, const Trace& w, const PropositionSet& props,
                  const SemanticsParams& p);

/// Per-trace values in sample order.
std::vector<double> trace_values(const Formula& f, const Sample& s, const SemanticsParams& p);
/// Sum of per-trace values, accumulated in sample order.
double sample_total(const Formula& f, const Sample& s, const SemanticsParams& p);
/// Mean valuation over the sample's traces.
double sample_fitness(const Formula& f, const Sample& s, const SemanticsParams& p);

struct SatReport {
  bool all = true;
  std::vector<bool> per_trace;
};
SatReport satisfies_all(const Formula& f, const Sample& s);

/// Robust scoring needs NNF; this applies to_nnf for Robust and returns f
/// unchanged for Discounted.
Formula prepare_for(const Formula& f, SemanticsKind kind);

}  // namespace janaka
