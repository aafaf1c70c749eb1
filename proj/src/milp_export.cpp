#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "janaka/error.hpp"
#include "janaka/milp.hpp"

namespace janaka {

namespace {

constexpr double kSignEps = 1e-7;

struct Lin {
  std::vector<std::pair<std::string, double>> terms;
  double c = 0.0;

  Lin() = default;
  Lin(double k) : c(k) {}  // NOLINT: constants read naturally in the encodings below
  static Lin v(const std::string& name, double coef = 1.0) {
    Lin l;
    l.terms.emplace_back(name, coef);
    return l;
  }
  Lin& operator+=(const Lin& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    c += o.c;
    return *this;
  }
  Lin operator*(double k) const {
    Lin l = *this;
    for (auto& t : l.terms) t.second *= k;
    l.c *= k;
    return l;
  }
};
Lin operator+(Lin a, const Lin& b) { return a += b; }
Lin operator-(const Lin& a, const Lin& b) { return a + b * -1.0; }

struct Quad {
  double coef;
  std::string a, b;
};

/// Activation literal: binary `var` must equal 1 (or 0 when !positive).
struct Act {
  std::string var;
  bool positive = true;
};

std::string num(double v) {
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    std::ostringstream o;
    o << static_cast<long long>(v);
    return o.str();
  }
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

class Writer {
 public:
  std::string var(const std::string& name, double lo, double hi, bool binary = false) {
    if (bounds_.count(name)) return name;
    bounds_[name] = {lo, hi};
    order_.push_back(name);
    if (binary) binaries_.push_back(name);
    return name;
  }
  std::string bin(const std::string& name) { return var(name, 0, 1, true); }
  bool has(const std::string& name) const { return bounds_.count(name) != 0; }

  std::pair<double, double> range(const Lin& e, const std::vector<Quad>& q = {}) const {
    double lo = e.c, hi = e.c;
    for (const auto& [n, k] : e.terms) {
      auto [l, h] = bounds_.at(n);
      lo += std::min(k * l, k * h);
      hi += std::max(k * l, k * h);
    }
    for (const auto& t : q) {
      auto [al, ah] = bounds_.at(t.a);
      auto [bl, bh] = bounds_.at(t.b);
      double c[4] = {al * bl, al * bh, ah * bl, ah * bh};
      double mn = *std::min_element(c, c + 4), mx = *std::max_element(c, c + 4);
      lo += std::min(t.coef * mn, t.coef * mx);
      hi += std::max(t.coef * mn, t.coef * mx);
    }
    return {lo, hi};
  }

  void row(Lin e, const char* sense, double rhs, const std::vector<Quad>& q = {}) {
    // merge duplicate terms
    std::map<std::string, double> merged;
    std::vector<std::string> seq;
    for (const auto& [n, k] : e.terms) {
      if (!merged.count(n)) seq.push_back(n);
      merged[n] += k;
    }
    rhs -= e.c;
    std::ostringstream o;
    o << " r" << ++rows_ << ":";
    bool any = false;
    for (const auto& n : seq) {
      double k = merged[n];
      if (k == 0) continue;
      o << (k < 0 ? " - " : (any ? " + " : " ")) << num(std::fabs(k)) << ' ' << n;
      any = true;
    }
    if (!q.empty()) {
      ++quad_rows_;
      o << (any ? " + [" : " [");
      bool first = true;
      for (const auto& t : q) {
        o << (t.coef < 0 ? " - " : (first ? " " : " + ")) << num(std::fabs(t.coef)) << ' ' << t.a
          << " * " << t.b;
        first = false;
      }
      o << " ]";
      any = true;
    }
    if (!any) {
      if (seq.empty()) return;
      o << " 0 " << seq.front();
    }
    o << ' ' << sense << ' ' << num(rhs) << '\n';
    body_ << o.str();
  }

  /// e == 0 whenever every activation literal holds.
  void eq_if(const Lin& e, const std::vector<Act>& acts, const std::vector<Quad>& q = {}) {
    if (acts.empty()) {
      row(e, "=", 0, q);
      return;
    }
    auto [lo, hi] = range(e, q);
    // slack S = sum over acts of (1 - x) or x; zero exactly when all hold
    Lin slack;
    for (const auto& a : acts) {
      if (a.positive) slack += Lin(1.0) - Lin::v(a.var);
      else slack += Lin::v(a.var);
    }
    if (hi > 0) row(e - slack * hi, "<=", 0, q);
    if (lo < 0) row(e - slack * lo, ">=", 0, q);
  }

  std::string max_of(const std::string& name, const Lin& a, const Lin& b) {
    auto [al, ah] = range(a);
    auto [bl, bh] = range(b);
    std::string m = var(name, std::max(al, bl), std::max(ah, bh));
    std::string z = bin("z_" + name);
    row(Lin::v(m) - a, ">=", 0);
    row(Lin::v(m) - b, ">=", 0);
    row(Lin::v(m) - a - Lin::v(z, std::max(0.0, bh - al)), "<=", 0);
    row(Lin::v(m) - b + Lin::v(z, std::max(0.0, ah - bl)), "<=", std::max(0.0, ah - bl));
    return m;
  }

  std::string min_of(const std::string& name, const Lin& a, const Lin& b) {
    auto [al, ah] = range(a);
    auto [bl, bh] = range(b);
    std::string m = var(name, std::min(al, bl), std::min(ah, bh));
    std::string z = bin("z_" + name);
    row(Lin::v(m) - a, "<=", 0);
    row(Lin::v(m) - b, "<=", 0);
    row(Lin::v(m) - a + Lin::v(z, std::max(0.0, ah - bl)), ">=", 0);
    row(Lin::v(m) - b - Lin::v(z, std::max(0.0, bh - al)), ">=", -std::max(0.0, bh - al));
    return m;
  }

  std::string band(const std::string& name, const std::vector<Act>& in) {
    std::string w = bin(name);
    Lin sum;
    for (const auto& a : in) {
      Lin lit = a.positive ? Lin::v(a.var) : Lin(1.0) - Lin::v(a.var);
      row(Lin::v(w) - lit, "<=", 0);
      sum += lit;
    }
    row(Lin::v(w) - sum, ">=", 1.0 - static_cast<double>(in.size()));
    return w;
  }

  std::string bor(const std::string& name, const std::vector<Act>& in) {
    std::string w = bin(name);
    Lin sum;
    for (const auto& a : in) {
      Lin lit = a.positive ? Lin::v(a.var) : Lin(1.0) - Lin::v(a.var);
      row(Lin::v(w) - lit, ">=", 0);
      sum += lit;
    }
    row(Lin::v(w) - sum, "<=", 0);
    return w;
  }

  /// s = 1 iff v >= 0 (negative values are taken to be at most -eps).
  std::string sign(const std::string& name, const std::string& v) {
    auto [lo, hi] = bounds_.at(v);
    std::string s = bin(name);
    if (lo < 0) row(Lin::v(v) + Lin::v(s, lo), ">=", lo);
    row(Lin::v(v) - Lin::v(s, hi + kSignEps), "<=", -kSignEps);
    return s;
  }

  std::string finish(const Lin& objective, MilpStats& st) const {
    std::ostringstream o;
    o << "\\ hole-filling model\nMaximize\n obj:";
    bool any = false;
    for (const auto& [n, k] : objective.terms) {
      o << (k < 0 ? " - " : (any ? " + " : " ")) << num(std::fabs(k)) << ' ' << n;
      any = true;
    }
    o << "\nSubject To\n" << body_.str() << "Bounds\n";
    for (const auto& n : order_) {
      auto [lo, hi] = bounds_.at(n);
      if (lo == hi) o << ' ' << n << " = " << num(lo) << '\n';
      else o << ' ' << num(lo) << " <= " << n << " <= " << num(hi) << '\n';
    }
    o << "Binaries\n";
    for (const auto& n : binaries_) o << ' ' << n << '\n';
    o << "End\n";
    st.rows = rows_;
    st.quadratic_rows = quad_rows_;
    for (const auto& n : order_) {
      bool b = std::find(binaries_.begin(), binaries_.end(), n) != binaries_.end();
      if (b && n.rfind("x_", 0) == 0) ++st.label_binaries;
      else if (b) ++st.aux_binaries;
      else ++st.continuous;
      if (n.rfind("y_", 0) == 0) ++st.score_vars;
    }
    return o.str();
  }

 private:
  std::map<std::string, std::pair<double, double>> bounds_;
  std::vector<std::string> order_, binaries_;
  std::ostringstream body_;
  std::size_t rows_ = 0, quad_rows_ = 0;
};

enum class SlotKind { None, Fixed, LabelHole, SubtreeRoot, SubtreeInner };

struct Slot {
  SlotKind kind = SlotKind::None;
  std::vector<SlotLabel> labels;  // one entry for Fixed
  bool optional = false;
  int remaining = 1;  // depth of the deepest subtree this slot can root
};

std::string label_name(const SlotLabel& l) {
  switch (l.op) {
    case Op::Atom: return (l.negated ? "n_" : "p_") + l.atom;
    case Op::True: return l.negated ? "nt" : "t";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "imp";
    case Op::Until: return "U";
    case Op::Next: return "X";
    case Op::Finally: return "F";
    case Op::Globally: return "G";
    case Op::Not: return "not";
  }
  return "?";
}

class Encoder {
 public:
  Encoder(const Template& t, const Sample& s, const SemanticsParams& p, int d)
      : t_(t), s_(s), p_(p) {
    depth_ = std::max(d, t.depth());
    if (depth_ > 16) throw Error(ErrorCode::UnsupportedForExport, "template too deep to index");
    slots_.resize(static_cast<std::size_t>(1) << depth_);
    place(t.root, 1);
    for (const auto& tr : s.traces) max_len_ = std::max(max_len_, tr.size());
    for (int i = static_cast<int>(slots_.size()) - 1; i >= 1; --i) {
      auto& sl = slots_[i];
      if (sl.kind == SlotKind::None) continue;
      if (2 * i < static_cast<int>(slots_.size())) {
        int r = 0;
        if (slots_[2 * i].kind != SlotKind::None) r = std::max(r, slots_[2 * i].remaining);
        if (slots_[2 * i + 1].kind != SlotKind::None) r = std::max(r, slots_[2 * i + 1].remaining);
        sl.remaining = 1 + r;
      }
    }
  }

  MilpExport run() {
    MilpExport out;
    const int n = static_cast<int>(slots_.size());
    // label binaries first, so they lead the Binaries section
    for (int i = 1; i < n; ++i) {
      if (!variable(i)) continue;
      for (const auto& l : slots_[i].labels) w_.bin(x(i, l));
    }
    structure();
    for (int i = n - 1; i >= 1; --i)
      if (slots_[i].kind != SlotKind::None) slot(i);
    Lin obj;
    for (std::size_t k = 0; k < s_.traces.size(); ++k) obj += Lin::v(y(k, 1, 0));
    out.lp = w_.finish(obj, out.stats);
    return out;
  }

 private:
  bool robust() const { return p_.kind == SemanticsKind::Robust; }
  bool variable(int i) const {
    auto k = slots_[i].kind;
    return k == SlotKind::LabelHole || k == SlotKind::SubtreeRoot || k == SlotKind::SubtreeInner;
  }
  static std::string x(int i, const SlotLabel& l) { return "x_" + std::to_string(i) + "_" + label_name(l); }
  static std::string y(std::size_t k, int i, std::size_t t) {
    return "y_" + std::to_string(k) + "_" + std::to_string(i) + "_" + std::to_string(t);
  }
  static std::string tag(const char* what, int i, const SlotLabel& l, std::size_t k, std::size_t t) {
    return std::string(what) + "_" + std::to_string(i) + "_" + label_name(l) + "_" + std::to_string(k) +
           "_" + std::to_string(t);
  }

  void place(int node, int i) {
    if (i >= static_cast<int>(slots_.size()))
      throw Error(ErrorCode::UnsupportedForExport, "template exceeds the indexed depth");
    const auto& nd = t_.nodes[node];
    Slot& sl = slots_[i];
    switch (nd.kind) {
      case TemplateNode::Kind::Fixed:
        if (nd.label.op == Op::Not && robust())
          throw Error(ErrorCode::UnsupportedForExport,
                      "robust export needs negation on atoms only");
        sl.kind = SlotKind::Fixed;
        sl.labels = {nd.label};
        break;
      case TemplateNode::Kind::LabelHole:
        sl.kind = SlotKind::LabelHole;
        for (Op op : nd.ops) sl.labels.push_back(SlotLabel{op, {}, false});
        break;
      case TemplateNode::Kind::SubtreeHole:
        subtree(i, nd.max_depth, true, nd.optional);
        return;
    }
    if (nd.left >= 0) place(nd.left, 2 * i);
    if (nd.right >= 0) place(nd.right, 2 * i + 1);
  }

  void subtree(int i, int k, bool root, bool optional) {
    if (i >= static_cast<int>(slots_.size()))
      throw Error(ErrorCode::UnsupportedForExport, "hole exceeds the indexed depth");
    Slot& sl = slots_[i];
    sl.kind = root ? SlotKind::SubtreeRoot : SlotKind::SubtreeInner;
    sl.optional = optional;
    if (k > 1)
      for (Op op : all_ops()) sl.labels.push_back(SlotLabel{op, {}, false});
    for (const auto& a : s_.props.names()) {
      sl.labels.push_back(SlotLabel{Op::Atom, a, false});
      sl.labels.push_back(SlotLabel{Op::Atom, a, true});
    }
    if (k > 1) {
      subtree(2 * i, k - 1, false, false);
      subtree(2 * i + 1, k - 1, false, false);
    }
  }

  /// Sum of label binaries at slot i whose label passes `pred`.
  template <class Pred>
  Lin sum_x(int i, Pred pred) const {
    Lin l;
    for (const auto& lab : slots_[i].labels)
      if (pred(lab)) l += Lin::v(x(i, lab));
    return l;
  }

  Lin used(int i) const {
    if (!variable(i) || slots_[i].kind == SlotKind::LabelHole) return Lin(1.0);
    return sum_x(i, [](const SlotLabel&) { return true; });
  }

  void structure() {
    const int n = static_cast<int>(slots_.size());
    for (int i = 1; i < n; ++i) {
      const Slot& sl = slots_[i];
      if (sl.kind == SlotKind::LabelHole) w_.row(used_all(i), "=", 1);
      if (sl.kind == SlotKind::SubtreeRoot) {
        if (!sl.optional) {
          w_.row(used_all(i), "=", 1);
        } else {
          int par = i / 2;
          w_.row(used_all(i) - sum_x(par, [](const SlotLabel& l) { return is_binary(l.op); }), "=", 0);
        }
      }
      if ((sl.kind == SlotKind::SubtreeRoot || sl.kind == SlotKind::SubtreeInner) && 2 * i < n &&
          slots_[2 * i].kind == SlotKind::SubtreeInner) {
        w_.row(used_all(2 * i) - sum_x(i, [](const SlotLabel& l) { return !l.is_literal(); }), "=", 0);
        w_.row(used_all(2 * i + 1) - sum_x(i, [](const SlotLabel& l) { return is_binary(l.op); }), "=",
               0);
      }
    }
  }

  Lin used_all(int i) const {
    return sum_x(i, [](const SlotLabel&) { return true; });
  }

  double robust_bound(int r) const {
    double g = 0.0, a = 1.0;
    for (std::size_t k = 0; k < max_len_; ++k) {
      g += a;
      a *= p_.alpha;
    }
    double b = 1.0;
    for (int level = 2; level <= r; ++level)
      b = std::max({1.0, p_.gamma, p_.beta * b * b, p_.beta * g * b, b});
    return b;
  }

  void slot(int i) {
    const Slot& sl = slots_[i];
    const double lo = robust() ? -1.0 : 0.0;
    const double hi = robust() ? robust_bound(sl.remaining) : 1.0;
    for (std::size_t k = 0; k < s_.traces.size(); ++k)
      for (std::size_t t = 0; t < s_.traces[k].size(); ++t) {
        std::string v = w_.var(y(k, i, t), lo, hi);
        if (sl.kind == SlotKind::SubtreeRoot || sl.kind == SlotKind::SubtreeInner) {
          // an unused slot scores 0
          Lin u = used(i);
          w_.row(Lin::v(v) - u * hi, "<=", 0);
          if (lo < 0) w_.row(Lin::v(v) - u * lo, ">=", 0);
        }
      }
    for (const auto& lab : sl.labels) {
      std::vector<Act> gate;
      if (variable(i)) gate.push_back(Act{x(i, lab), true});
      for (std::size_t k = 0; k < s_.traces.size(); ++k) {
        if (robust()) robust_label(i, lab, gate, k);
        else discounted_label(i, lab, gate, k);
      }
    }
    if (robust())
      for (std::size_t k = 0; k < s_.traces.size(); ++k)
        for (std::size_t t = s_.traces[k].size(); t-- > 0;)
          w_.sign("s_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(t), y(k, i, t));
  }

  double literal_value(const SlotLabel& lab, std::size_t k, std::size_t t) const {
    bool v = lab.op == Op::True || s_.traces[k].holds(t, *s_.props.index_of(lab.atom));
    v = v != lab.negated;
    if (robust()) return v ? 1.0 : -1.0;
    return v ? 1.0 : 0.0;
  }

  void discounted_label(int i, const SlotLabel& lab, const std::vector<Act>& gate, std::size_t k) {
    const std::size_t n = s_.traces[k].size();
    const double alpha = p_.alpha, beta = p_.beta;
    auto a = [&](std::size_t t) { return Lin::v(y(k, 2 * i, t)); };
    auto b = [&](std::size_t t) { return Lin::v(y(k, 2 * i + 1, t)); };
    auto out = [&](std::size_t t) { return Lin::v(y(k, i, t)); };
    if (lab.is_literal()) {
      for (std::size_t t = 0; t < n; ++t) w_.eq_if(out(t) - Lin(literal_value(lab, k, t)), gate);
      return;
    }
    switch (lab.op) {
      case Op::Not:
        for (std::size_t t = 0; t < n; ++t) w_.eq_if(out(t) - (Lin(1.0) - a(t)), gate);
        return;
      case Op::And:
      case Op::Or:
      case Op::Implies:
        for (std::size_t t = 0; t < n; ++t) {
          std::string name = tag("m", i, lab, k, t);
          std::string m = lab.op == Op::And  ? w_.min_of(name, a(t), b(t))
                          : lab.op == Op::Or ? w_.max_of(name, a(t), b(t))
                                             : w_.max_of(name, Lin(1.0) - a(t), b(t));
          w_.eq_if(out(t) - Lin::v(m, beta), gate);
        }
        return;
      case Op::Next:
        for (std::size_t t = 0; t < n; ++t)
          w_.eq_if(t + 1 < n ? out(t) - a(t + 1) * alpha : out(t), gate);
        return;
      case Op::Finally:
      case Op::Globally: {
        const bool g = lab.op == Op::Globally;
        std::string next;
        for (std::size_t t = n; t-- > 0;) {
          Lin here = g ? Lin(1.0) - a(t) : a(t);
          std::string name = tag(g ? "mg" : "mf", i, lab, k, t);
          std::string m;
          if (t + 1 == n) {
            auto [l, h] = w_.range(here);
            m = w_.var(name, l, h);
            w_.row(Lin::v(m) - here, "=", 0);
          } else {
            m = w_.max_of(name, here, Lin::v(next, alpha));
          }
          next = m;
          w_.eq_if(g ? out(t) - (Lin(1.0) - Lin::v(m)) * beta : out(t) - Lin::v(m, beta), gate);
        }
        return;
      }
      case Op::Until: {
        std::string next;
        for (std::size_t t = n; t-- > 0;) {
          std::string u;
          if (t + 1 == n) {
            u = w_.var(tag("u", i, lab, k, t), 0, 1);
            w_.row(Lin::v(u) - b(t), "=", 0);
          } else {
            std::string c = w_.min_of(tag("c", i, lab, k, t), a(t), Lin::v(next, alpha));
            u = w_.max_of(tag("u", i, lab, k, t), b(t), Lin::v(c));
          }
          next = u;
          w_.eq_if(out(t) - Lin::v(u), gate);
        }
        return;
      }
      default:
        throw Error(ErrorCode::UnsupportedForExport, "unexpected label in export");
    }
  }

  std::string sgn(int i, std::size_t k, std::size_t t) const {
    return "s_" + std::to_string(i) + "_" + std::to_string(k) + "_" + std::to_string(t);
  }

  static std::vector<Act> with(std::vector<Act> g, std::initializer_list<Act> more) {
    g.insert(g.end(), more.begin(), more.end());
    return g;
  }

  void robust_label(int i, const SlotLabel& lab, const std::vector<Act>& gate, std::size_t k) {
    const std::size_t n = s_.traces[k].size();
    const double alpha = p_.alpha, beta = p_.beta, gamma = p_.gamma;
    auto a = [&](std::size_t t) { return Lin::v(y(k, 2 * i, t)); };
    auto b = [&](std::size_t t) { return Lin::v(y(k, 2 * i + 1, t)); };
    auto out = [&](std::size_t t) { return Lin::v(y(k, i, t)); };
    auto sa = [&](std::size_t t) { return sgn(2 * i, k, t); };
    auto sb = [&](std::size_t t) { return sgn(2 * i + 1, k, t); };
    if (lab.is_literal()) {
      for (std::size_t t = 0; t < n; ++t) w_.eq_if(out(t) - Lin(literal_value(lab, k, t)), gate);
      return;
    }
    switch (lab.op) {
      case Op::And:
        for (std::size_t t = 0; t < n; ++t) {
          std::string both = w_.band(tag("w", i, lab, k, t), {{sa(t)}, {sb(t)}});
          w_.eq_if(out(t), with(gate, {{both}}), {Quad{-beta, y(k, 2 * i, t), y(k, 2 * i + 1, t)}});
          w_.eq_if(out(t) - Lin(-1.0), with(gate, {{both, false}}));
        }
        return;
      case Op::Or:
        for (std::size_t t = 0; t < n; ++t) {
          std::string both = w_.band(tag("w", i, lab, k, t), {{sa(t)}, {sb(t)}});
          std::string m = w_.max_of(tag("m", i, lab, k, t), a(t), b(t));
          w_.eq_if(out(t) - (a(t) + b(t)) * (beta / 2), with(gate, {{both}}));
          w_.eq_if(out(t) - Lin::v(m, beta), with(gate, {{both, false}}));
        }
        return;
      case Op::Implies:
        for (std::size_t t = 0; t < n; ++t) {
          std::string c = w_.band(tag("w", i, lab, k, t), {{sa(t), false}, {sb(t)}});
          std::string m = w_.max_of(tag("m", i, lab, k, t), a(t) * -1.0, b(t));
          w_.eq_if(out(t) - (b(t) - a(t)) * (beta / 2), with(gate, {{c}}));
          w_.eq_if(out(t) - Lin::v(m, beta), with(gate, {{c, false}}));
        }
        return;
      case Op::Next:
        for (std::size_t t = 0; t < n; ++t) {
          if (t + 1 < n) {
            w_.eq_if(out(t) - a(t + 1), with(gate, {{sa(t + 1)}}));
            w_.eq_if(out(t) - Lin(-1.0), with(gate, {{sa(t + 1), false}}));
          } else {
            w_.eq_if(out(t) - Lin(gamma), gate);
          }
        }
        return;
      case Op::Globally: {
        const double bmax = robust_bound(slots_[2 * i].remaining);
        std::string all_next, sum_next;
        double g = 0.0;
        for (std::size_t t = n; t-- > 0;) {
          g = 1.0 + alpha * g;
          std::string all = t + 1 == n ? w_.band(tag("A", i, lab, k, t), {{sa(t)}})
                                       : w_.band(tag("A", i, lab, k, t), {{sa(t)}, {all_next}});
          std::string sum = w_.var(tag("S", i, lab, k, t), -g * bmax, g * bmax);
          Lin rhs = a(t);
          if (t + 1 < n) rhs += Lin::v(sum_next, alpha);
          w_.row(Lin::v(sum) - rhs, "=", 0);
          w_.eq_if(out(t) - Lin::v(sum, beta), with(gate, {{all}}));
          w_.eq_if(out(t) - Lin(-beta), with(gate, {{all, false}}));
          all_next = all;
          sum_next = sum;
        }
        return;
      }
      case Op::Finally: {
        const double wmax = std::max(robust_bound(slots_[2 * i].remaining), gamma);
        std::string wnext;
        for (std::size_t t = n; t-- > 0;) {
          std::string wv = w_.var(tag("W", i, lab, k, t), -1.0, wmax);
          w_.eq_if(Lin::v(wv) - a(t), {{sa(t)}});
          Lin later = t + 1 < n ? Lin::v(wnext, alpha) : Lin(alpha * gamma);
          w_.eq_if(Lin::v(wv) - later, {{sa(t), false}});
          w_.eq_if(out(t) - Lin::v(wv, beta), gate);
          wnext = wv;
        }
        return;
      }
      case Op::Until: {
        const double vmax = std::max(robust_bound(slots_[2 * i + 1].remaining), gamma);
        std::string vnext, oknext;
        for (std::size_t t = n; t-- > 0;) {
          std::string q = t + 1 == n ? w_.band(tag("q", i, lab, k, t), {{sa(t)}})
                                     : w_.band(tag("q", i, lab, k, t), {{sa(t)}, {oknext}});
          std::string ok = w_.bor(tag("ok", i, lab, k, t), {{sb(t)}, {q}});
          std::string v = w_.var(tag("V", i, lab, k, t), -1.0, vmax);
          Lin later = t + 1 < n ? Lin::v(vnext, alpha) : Lin(alpha * gamma);
          w_.eq_if(Lin::v(v) - b(t), {{sb(t)}});
          w_.eq_if(Lin::v(v) - later, {{sb(t), false}, {q}});
          w_.eq_if(Lin::v(v) - Lin(-1.0), {{sb(t), false}, {q, false}});
          w_.eq_if(out(t) - Lin::v(v), gate);
          vnext = v;
          oknext = ok;
        }
        return;
      }
      default:
        throw Error(ErrorCode::UnsupportedForExport, "unexpected label in robust export");
    }
  }

  const Template& t_;
  const Sample& s_;
  SemanticsParams p_;
  int depth_ = 1;
  std::size_t max_len_ = 0;
  std::vector<Slot> slots_;
  Writer w_;
};

}  // namespace

MilpExport export_milp(const Template& t, const Sample& s, const SemanticsParams& p, int d) {
  p.validate();
  if (s.traces.empty()) throw Error(ErrorCode::EmptySample, "sample has no traces");
  return Encoder(t, s, p, d).run();
}

}  // namespace janaka
