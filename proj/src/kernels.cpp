#include "janaka/detail/kernels.hpp"

#include <algorithm>
#include <limits>

#include "janaka/error.hpp"

namespace janaka::detail {

Layout::Layout(const Sample& s) {
  offset.reserve(s.traces.size() + 1);
  offset.push_back(0);
  for (const auto& t : s.traces) {
    total += t.size();
    offset.push_back(total);
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ctx {
  const SemanticsParams& p;
  const Trace& w;
  std::size_t n;
  const double* al;
  const double* ah;
  const double* bl;
  const double* bh;
  const std::uint8_t* ad;
  const std::uint8_t* bd;
  double* lo;
  double* hi;
  std::uint8_t* dec;
};

void robust(const Label& lab, Ctx& c) {
  const double alpha = c.p.alpha, beta = c.p.beta, gamma = c.p.gamma;
  const std::size_t n = c.n;
  switch (lab.op) {
    case Op::True:
    case Op::Atom:
      for (std::size_t t = 0; t < n; ++t) {
        bool v = lab.op == Op::True || c.w.holds(t, lab.atom);
        c.lo[t] = c.hi[t] = (v != lab.neg) ? 1.0 : -1.0;
        if (c.dec) c.dec[t] = 1;
      }
      return;
    case Op::Not:
      throw Error(ErrorCode::NotInNNF, "robust semantics needs negation on atoms only");
    case Op::And:
      for (std::size_t t = 0; t < n; ++t) {
        c.hi[t] = (c.ah[t] >= 0 && c.bh[t] >= 0) ? beta * c.ah[t] * c.bh[t] : -1.0;
        c.lo[t] = (c.al[t] < 0 || c.bl[t] < 0) ? -1.0 : beta * c.al[t] * c.bl[t];
        if (c.dec) c.dec[t] = c.ad[t] && c.bd[t];
      }
      return;
    case Op::Or:
      for (std::size_t t = 0; t < n; ++t) {
        double hi = -kInf, lo = kInf;
        if (c.ah[t] >= 0 && c.bh[t] >= 0) {
          hi = std::max(hi, beta * ((c.ah[t] + c.bh[t]) / 2));
          lo = std::min(lo, beta * ((std::max(c.al[t], 0.0) + std::max(c.bl[t], 0.0)) / 2));
        }
        if (c.al[t] < 0 || c.bl[t] < 0) {
          hi = std::max(hi, beta * std::max(c.ah[t], c.bh[t]));
          lo = std::min(lo, beta * std::max(c.al[t], c.bl[t]));
        }
        c.hi[t] = hi;
        c.lo[t] = lo;
        if (c.dec) c.dec[t] = c.ad[t] && c.bd[t];
      }
      return;
    case Op::Implies:
      for (std::size_t t = 0; t < n; ++t) {
        double hi = -kInf, lo = kInf;
        if (c.al[t] < 0 && c.bh[t] >= 0) {
          hi = std::max(hi, beta * ((-c.al[t] + c.bh[t]) / 2));
          lo = std::min(lo, beta * ((-std::min(c.ah[t], 0.0) + std::max(c.bl[t], 0.0)) / 2));
        }
        if (c.ah[t] >= 0 || c.bl[t] < 0) {
          hi = std::max(hi, beta * std::max(-c.al[t], c.bh[t]));
          lo = std::min(lo, beta * std::max(-c.ah[t], c.bl[t]));
        }
        c.hi[t] = hi;
        c.lo[t] = lo;
        if (c.dec) c.dec[t] = c.ad[t] && c.bd[t];
      }
      return;
    case Op::Next:
      for (std::size_t t = 0; t < n; ++t) {
        if (t + 1 < n) {
          c.hi[t] = c.ah[t + 1] >= 0 ? c.ah[t + 1] : -1.0;
          c.lo[t] = c.al[t + 1] < 0 ? -1.0 : c.al[t + 1];
          if (c.dec) c.dec[t] = c.ad[t + 1];
        } else {
          c.hi[t] = c.lo[t] = gamma;
          if (c.dec) c.dec[t] = 0;
        }
      }
      return;
    case Op::Globally: {
      // value = beta * sum_i alpha^i a(t+i) if a >= 0 on the whole suffix, else -beta
      bool poss = true, sure = true;
      double sh = 0.0, sl = 0.0;
      std::uint8_t d = 1;
      for (std::size_t t = n; t-- > 0;) {
        poss = poss && c.ah[t] >= 0;
        sure = sure && c.al[t] >= 0;
        sh = c.ah[t] + alpha * sh;
        sl = std::max(c.al[t], 0.0) + alpha * sl;
        c.hi[t] = poss ? beta * sh : -beta;
        c.lo[t] = sure ? beta * sl : -beta;
        if (c.dec) c.dec[t] = d = (c.ad[t] && d);
      }
      return;
    }
    case Op::Finally: {
      // W(t) = a(t) if a(t) >= 0 else alpha * W(t+1); W(|w|) = gamma; value beta * W
      double wh = gamma, wl = gamma;
      std::uint8_t d = 0;
      for (std::size_t t = n; t-- > 0;) {
        double h = -kInf, l = kInf;
        if (c.ah[t] >= 0) {
          h = c.ah[t];
          l = std::max(c.al[t], 0.0);
        }
        if (c.al[t] < 0) {
          h = std::max(h, alpha * wh);
          l = std::min(l, alpha * wl);
        }
        wh = h;
        wl = l;
        c.hi[t] = beta * wh;
        c.lo[t] = beta * wl;
        if (c.dec) c.dec[t] = d = (c.al[t] >= 0 ? c.ad[t] : (c.ad[t] && d));
      }
      return;
    }
    case Op::Until: {
      // V(t) = b(t) if b(t) >= 0; -1 if a(t) < 0; -1 if V(t+1) < 0; else alpha * V(t+1).
      // V(|w|) = gamma.
      double vh = gamma, vl = gamma;
      std::uint8_t d = 0;
      for (std::size_t t = n; t-- > 0;) {
        double h = -kInf, l = kInf;
        if (c.bh[t] >= 0) {
          h = c.bh[t];
          l = std::max(c.bl[t], 0.0);
        }
        if (c.bl[t] < 0) {
          if (c.al[t] < 0) {
            h = std::max(h, -1.0);
            l = std::min(l, -1.0);
          }
          if (c.ah[t] >= 0) {
            if (vl < 0) {
              h = std::max(h, -1.0);
              l = std::min(l, -1.0);
            }
            if (vh >= 0) {
              h = std::max(h, alpha * vh);
              l = std::min(l, alpha * std::max(vl, 0.0));
            }
          }
        }
        vh = h;
        vl = l;
        c.hi[t] = vh;
        c.lo[t] = vl;
        if (c.dec) {
          if (c.bl[t] >= 0) d = c.bd[t];
          else d = c.bd[t] && c.ad[t] && (c.al[t] >= 0 ? d : 1);
          c.dec[t] = d;
        }
      }
      return;
    }
  }
}

void discounted(const Label& lab, Ctx& c) {
  const double alpha = c.p.alpha, beta = c.p.beta;
  const std::size_t n = c.n;
  if (c.dec) std::fill(c.dec, c.dec + n, 1);
  switch (lab.op) {
    case Op::True:
    case Op::Atom:
      for (std::size_t t = 0; t < n; ++t) {
        bool v = lab.op == Op::True || c.w.holds(t, lab.atom);
        c.lo[t] = c.hi[t] = (v != lab.neg) ? 1.0 : 0.0;
      }
      return;
    case Op::Not:
      for (std::size_t t = 0; t < n; ++t) {
        c.hi[t] = 1.0 - c.al[t];
        c.lo[t] = 1.0 - c.ah[t];
      }
      return;
    case Op::And:
      for (std::size_t t = 0; t < n; ++t) {
        c.hi[t] = beta * std::min(c.ah[t], c.bh[t]);
        c.lo[t] = beta * std::min(c.al[t], c.bl[t]);
      }
      return;
    case Op::Or:
      for (std::size_t t = 0; t < n; ++t) {
        c.hi[t] = beta * std::max(c.ah[t], c.bh[t]);
        c.lo[t] = beta * std::max(c.al[t], c.bl[t]);
      }
      return;
    case Op::Implies:
      for (std::size_t t = 0; t < n; ++t) {
        c.hi[t] = beta * std::max(1.0 - c.al[t], c.bh[t]);
        c.lo[t] = beta * std::max(1.0 - c.ah[t], c.bl[t]);
      }
      return;
    case Op::Next:
      for (std::size_t t = 0; t < n; ++t) {
        c.hi[t] = t + 1 < n ? alpha * c.ah[t + 1] : 0.0;
        c.lo[t] = t + 1 < n ? alpha * c.al[t + 1] : 0.0;
      }
      return;
    case Op::Globally: {
      // M(t) = max(1 - a(t), alpha * M(t+1)); M(|w|) = 0; value beta * (1 - M)
      double m_small = 0.0, m_big = 0.0;
      for (std::size_t t = n; t-- > 0;) {
        m_small = std::max(1.0 - c.ah[t], alpha * m_small);
        m_big = std::max(1.0 - c.al[t], alpha * m_big);
        c.hi[t] = beta * (1.0 - m_small);
        c.lo[t] = beta * (1.0 - m_big);
      }
      return;
    }
    case Op::Finally: {
      double mh = 0.0, ml = 0.0;
      for (std::size_t t = n; t-- > 0;) {
        mh = std::max(c.ah[t], alpha * mh);
        ml = std::max(c.al[t], alpha * ml);
        c.hi[t] = beta * mh;
        c.lo[t] = beta * ml;
      }
      return;
    }
    case Op::Until: {
      // u(t) = max(b(t), min(a(t), alpha * u(t+1))); u(|w|) = 0
      double uh = 0.0, ul = 0.0;
      for (std::size_t t = n; t-- > 0;) {
        uh = std::max(c.bh[t], std::min(c.ah[t], alpha * uh));
        ul = std::max(c.bl[t], std::min(c.al[t], alpha * ul));
        c.hi[t] = uh;
        c.lo[t] = ul;
      }
      return;
    }
  }
}

}  // namespace

void eval_node(const SemanticsParams& p, const Label& label, const Sample& s, const Layout& lay,
               const Column* a, const Column* b, Column& out, bool with_dec) {
  out.resize(lay.total, with_dec);
  for (std::size_t k = 0; k < lay.traces(); ++k) {
    const std::size_t o = lay.offset[k];
    Ctx c{p,
          s.traces[k],
          lay.length(k),
          a ? a->lo.data() + o : nullptr,
          a ? a->hi.data() + o : nullptr,
          b ? b->lo.data() + o : nullptr,
          b ? b->hi.data() + o : nullptr,
          (with_dec && a) ? a->dec.data() + o : nullptr,
          (with_dec && b) ? b->dec.data() + o : nullptr,
          out.lo.data() + o,
          out.hi.data() + o,
          with_dec ? out.dec.data() + o : nullptr};
    if (p.kind == SemanticsKind::Robust) robust(label, c);
    else discounted(label, c);
  }
}

namespace {

int compile_into(const Formula& f, const PropositionSet& props, SemanticsKind kind, Program& prog) {
  Program::Node node;
  if (f.is_literal()) {
    bool neg = f.op() == Op::Not;
    const Formula& a = neg ? f.child() : f;
    node.label.op = a.op();
    node.label.neg = neg;
    if (a.op() == Op::Atom) {
      auto idx = props.index_of(a.name());
      if (!idx) throw Error(ErrorCode::UnknownAtom, "unknown atom '" + a.name() + "'");
      node.label.atom = static_cast<int>(*idx);
    }
  } else {
    if (f.op() == Op::Not && kind == SemanticsKind::Robust)
      throw Error(ErrorCode::NotInNNF, "formula is not in negation normal form: " + format_formula(f));
    node.label.op = f.op();
    node.l = compile_into(f.left(), props, kind, prog);
    if (is_binary(f.op())) node.r = compile_into(f.right(), props, kind, prog);
  }
  prog.nodes.push_back(node);
  return static_cast<int>(prog.nodes.size()) - 1;
}

}  // namespace

Program compile(const Formula& f, const PropositionSet& props, SemanticsKind kind) {
  Program prog;
  compile_into(f, props, kind, prog);
  return prog;
}

Column run(const Program& prog, const SemanticsParams& p, const Sample& s, const Layout& lay,
           bool with_dec) {
  std::vector<Column> cols(prog.nodes.size());
  for (std::size_t i = 0; i < prog.nodes.size(); ++i) {
    const auto& nd = prog.nodes[i];
    eval_node(p, nd.label, s, lay, nd.l >= 0 ? &cols[nd.l] : nullptr,
              nd.r >= 0 ? &cols[nd.r] : nullptr, cols[i], with_dec);
    // children are consumed exactly once in a tree; free them early
    if (nd.l >= 0) cols[nd.l] = Column{};
    if (nd.r >= 0) cols[nd.r] = Column{};
  }
  return std::move(cols.back());
}

}  // namespace janaka::detail
