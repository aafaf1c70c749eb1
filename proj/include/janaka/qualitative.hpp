#pragma once

#include "janaka/formula.hpp"
#include "janaka/trace.hpp"

namespace janaka {

/// Finite-trace satisfaction at position 0. X is a strong next and U needs
/// a witness inside the trace. Atoms are looked up in `props`.
bool eval_qualitative(const Formula& f, const Trace& w, const PropositionSet& props);

/// Satisfaction at every position 0..|w|-1 (result[t] = w[t..] |= f).
std::vector<bool> eval_qualitative_all(const Formula& f, const Trace& w,
                                       const PropositionSet& props);

}  // namespace janaka
