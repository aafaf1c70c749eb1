#include "janaka/qualitative.hpp"

#include "janaka/error.hpp"

namespace janaka {

namespace {

std::vector<char> sat(const Formula& f, const Trace& w, const PropositionSet& props) {
  const std::size_t n = w.size();
  std::vector<char> out(n, 0);
  switch (f.op()) {
    case Op::True:
      out.assign(n, 1);
      break;
    case Op::Atom: {
      auto idx = props.index_of(f.name());
      if (!idx) throw Error(ErrorCode::UnknownAtom, "unknown atom '" + f.name() + "'");
      for (std::size_t t = 0; t < n; ++t) out[t] = w.holds(t, *idx);
      break;
    }
    case Op::Not: {
      auto a = sat(f.child(), w, props);
      for (std::size_t t = 0; t < n; ++t) out[t] = !a[t];
      break;
    }
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      auto a = sat(f.left(), w, props);
      auto b = sat(f.right(), w, props);
      for (std::size_t t = 0; t < n; ++t) {
        if (f.op() == Op::And) out[t] = a[t] && b[t];
        else if (f.op() == Op::Or) out[t] = a[t] || b[t];
        else out[t] = !a[t] || b[t];
      }
      break;
    }
    case Op::Next: {
      auto a = sat(f.child(), w, props);
      for (std::size_t t = 0; t + 1 < n; ++t) out[t] = a[t + 1];
      break;
    }
    case Op::Finally: {
      auto a = sat(f.child(), w, props);
      char acc = 0;
      for (std::size_t t = n; t-- > 0;) out[t] = acc = acc || a[t];
      break;
    }
    case Op::Globally: {
      auto a = sat(f.child(), w, props);
      char acc = 1;
      for (std::size_t t = n; t-- > 0;) out[t] = acc = acc && a[t];
      break;
    }
    case Op::Until: {
      auto a = sat(f.left(), w, props);
      auto b = sat(f.right(), w, props);
      char acc = 0;
      for (std::size_t t = n; t-- > 0;) out[t] = acc = b[t] || (a[t] && acc);
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<bool> eval_qualitative_all(const Formula& f, const Trace& w,
                                       const PropositionSet& props) {
  if (w.states.empty()) throw Error(ErrorCode::EmptyTrace, "trace has no states");
  auto v = sat(f, w, props);
  return std::vector<bool>(v.begin(), v.end());
}

bool eval_qualitative(const Formula& f, const Trace& w, const PropositionSet& props) {
  if (w.states.empty()) throw Error(ErrorCode::EmptyTrace, "trace has no states");
  return sat(f, w, props)[0] != 0;
}

}  // namespace janaka
