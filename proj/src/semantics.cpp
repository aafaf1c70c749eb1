#include "janaka/semantics.hpp"

#include "janaka/detail/kernels.hpp"
#include "janaka/error.hpp"
#include "janaka/qualitative.hpp"

namespace janaka {

std::string to_string(SemanticsKind k) {
  return k == SemanticsKind::Robust ? "robust" : "discounted";
}

SemanticsKind semantics_from_string(const std::string& s) {
  if (s == "robust") return SemanticsKind::Robust;
  if (s == "discounted") return SemanticsKind::Discounted;
  throw Error(ErrorCode::InvalidArgument, "unknown semantics '" + s + "'");
}

void SemanticsParams::validate() const {
  if (!(alpha > 0 && alpha <= 1)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1]");
  if (!(beta > 0 && beta <= 1)) throw Error(ErrorCode::InvalidArgument, "beta must lie in (0,1]");
  if (!(gamma >= 0 && gamma < 1)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in [0,1)");
}

namespace {

Valuation single(const Formula& f, const Trace& w, const PropositionSet& props,
                 const SemanticsParams& p) {
  p.validate();
  if (w.states.empty()) throw Error(ErrorCode::EmptyTrace, "trace has no states");
  Sample s{props, {w}};
  detail::Layout lay(s);
  auto prog = detail::compile(f, props, p.kind);
  auto col = detail::run(prog, p, s, lay, true);
  return {col.lo[0], col.dec[0] != 0};
}

}  // namespace

Valuation robust_value(const Formula& f, const Trace& w, const PropositionSet& props,
                       const SemanticsParams& p) {
  SemanticsParams q = p;
  q.kind = SemanticsKind::Robust;
  return single(f, w, props, q);
}

Valuation discounted_value(const Formula& f, const Trace& w, const PropositionSet& props,
                           const SemanticsParams& p) {
  SemanticsParams q = p;
  q.kind = SemanticsKind::Discounted;
  return single(f, w, props, q);
}

Valuation valuate(const Formula& f, const Trace& w, const PropositionSet& props,
                  const SemanticsParams& p) {
  return single(f, w, props, p);
}

std::vector<double> trace_values(const Formula& f, const Sample& s, const SemanticsParams& p) {
  p.validate();
  if (s.traces.empty()) throw Error(ErrorCode::EmptySample, "sample has no traces");
  for (const auto& t : s.traces)
    if (t.states.empty()) throw Error(ErrorCode::EmptyTrace, "sample contains an empty trace");
  detail::Layout lay(s);
  auto prog = detail::compile(f, s.props, p.kind);
  auto col = detail::run(prog, p, s, lay, false);
  std::vector<double> out(s.traces.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = col.lo[lay.offset[k]];
  return out;
}

double sample_total(const Formula& f, const Sample& s, const SemanticsParams& p) {
  double sum = 0.0;
  for (double v : trace_values(f, s, p)) sum += v;
  return sum;
}

double sample_fitness(const Formula& f, const Sample& s, const SemanticsParams& p) {
  return sample_total(f, s, p) / static_cast<double>(s.traces.size());
}

SatReport satisfies_all(const Formula& f, const Sample& s) {
  SatReport r;
  for (const auto& t : s.traces) {
    bool ok = eval_qualitative(f, t, s.props);
    r.per_trace.push_back(ok);
    r.all = r.all && ok;
  }
  return r;
}

Formula prepare_for(const Formula& f, SemanticsKind kind) {
  return kind == SemanticsKind::Robust ? to_nnf(f) : f;
}

}  // namespace janaka
