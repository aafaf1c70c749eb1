#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "janaka/error.hpp"
#include "janaka/milp.hpp"

namespace janaka {

int LpModel::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '\\') break;  // comment
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      ++i;
      if (i < line.size() && line[i] == '=') {
        op += '=';
        ++i;
      }
      if (op == "=<") op = "<=";
      if (op == "=>") op = ">=";
      if (op == "<") op = "<=";
      if (op == ">") op = ">=";
      out.push_back(op);
      continue;
    }
    if (c == '+' || c == '-' || c == ':' || c == '[' || c == ']' || c == '*' || c == '^') {
      out.emplace_back(1, c);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
           std::string_view("<>=+-:[]*^\\").find(line[j]) == std::string_view::npos)
      ++j;
    // numbers in scientific notation carry a sign after 'e'
    if (j < line.size() && (line[j] == '+' || line[j] == '-') && j > i &&
        (line[j - 1] == 'e' || line[j - 1] == 'E') && std::isdigit(static_cast<unsigned char>(line[i]))) {
      ++j;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
    }
    out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_number(const std::string& s, double& v) {
  if (s == "inf" || s == "infinity" || s == "Inf" || s == "Infinity") {
    v = kInf;
    return true;
  }
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.');
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

class Reader {
 public:
  LpModel m;

  int var(const std::string& name) {
    auto it = idx_.find(name);
    if (it != idx_.end()) return it->second;
    int i = static_cast<int>(m.names.size());
    idx_[name] = i;
    m.names.push_back(name);
    m.lo.push_back(0.0);
    m.hi.push_back(kInf);
    m.binary.push_back(0);
    return i;
  }

  // Parses "[+-] [coef] name ..." from toks[pos...] until a sense token or end.
  std::vector<LpModel::Term> expr(const std::vector<std::string>& toks, std::size_t& pos, double& constant) {
    std::vector<LpModel::Term> terms;
    double sign = 1.0;
    double coef = 1.0;
    bool have_coef = false;
    while (pos < toks.size()) {
      const std::string& t = toks[pos];
      if (t == "<=" || t == ">=" || t == "=") break;
      if (t == "[") throw Error(ErrorCode::UnsupportedForExport, "quadratic rows are not supported by the enumerator");
      ++pos;
      if (t == "+") continue;
      if (t == "-") {
        sign = -sign;
        continue;
      }
      double v;
      if (is_number(t, v)) {
        if (have_coef) {  // a bare constant followed by another number
          constant += sign * coef;
          sign = 1.0;
        }
        coef = v;
        have_coef = true;
        continue;
      }
      terms.push_back({var(t), sign * coef});
      sign = 1.0;
      coef = 1.0;
      have_coef = false;
    }
    if (have_coef) constant += sign * coef;
    return terms;
  }

  void parse(std::string_view text) {
    enum class Sec { None, Obj, Rows, Bounds, Bin, Gen } sec = Sec::None;
    std::vector<std::string> pending;
    std::istringstream in{std::string(text)};
    std::string line;
    auto flush_row = [&] {
      if (pending.empty()) return;
      std::size_t pos = 0;
      LpModel::Row r;
      if (pending.size() > 1 && pending[1] == ":") {
        r.name = pending[0];
        pos = 2;
      }
      double c = 0.0;
      r.terms = expr(pending, pos, c);
      if (pos >= pending.size()) throw Error(ErrorCode::SyntaxError, "row without a sense: " + r.name);
      const std::string& s = pending[pos++];
      r.sense = s == "<=" ? 'L' : s == ">=" ? 'G' : 'E';
      double rhs_sign = 1.0;
      if (pos < pending.size() && pending[pos] == "-") {
        rhs_sign = -1.0;
        ++pos;
      } else if (pos < pending.size() && pending[pos] == "+") {
        ++pos;
      }
      double v;
      if (pos >= pending.size() || !is_number(pending[pos], v))
        throw Error(ErrorCode::SyntaxError, "row without a right-hand side: " + r.name);
      r.rhs = rhs_sign * v - c;
      m.rows.push_back(std::move(r));
      pending.clear();
    };
    while (std::getline(in, line)) {
      auto toks = tokenize(line);
      if (toks.empty()) continue;
      std::string head = lower(toks[0]);
      if (head == "maximize" || head == "maximum" || head == "max" || head == "minimize" ||
          head == "minimum" || head == "min") {
        flush_row();
        m.maximize = head.rfind("max", 0) == 0;
        sec = Sec::Obj;
        toks.erase(toks.begin());
        if (toks.empty()) continue;
      } else if (head == "subject" || head == "such" || head == "st" || head == "s.t.") {
        flush_row();
        sec = Sec::Rows;
        continue;
      } else if (head == "bounds" || head == "bound") {
        flush_row();
        sec = Sec::Bounds;
        continue;
      } else if (head == "binaries" || head == "binary" || head == "bin") {
        flush_row();
        sec = Sec::Bin;
        continue;
      } else if (head == "generals" || head == "general" || head == "gen") {
        flush_row();
        sec = Sec::Gen;
        continue;
      } else if (head == "end") {
        flush_row();
        break;
      }
      switch (sec) {
        case Sec::Obj: {
          std::size_t pos = 0;
          if (toks.size() > 1 && toks[1] == ":") pos = 2;
          double c = 0.0;
          auto t = expr(toks, pos, c);
          m.objective.insert(m.objective.end(), t.begin(), t.end());
          m.objective_constant += c;
          break;
        }
        case Sec::Rows: {
          // a row may span lines; it ends once the right-hand side is read
          pending.insert(pending.end(), toks.begin(), toks.end());
          auto it = std::find_if(pending.begin(), pending.end(),
                                 [](const std::string& s) { return s == "<=" || s == ">=" || s == "="; });
          if (it != pending.end() && std::distance(it, pending.end()) >= 2) {
            double v;
            auto last = pending.back();
            if (is_number(last, v)) flush_row();
          }
          break;
        }
        case Sec::Bounds: bound_line(toks); break;
        case Sec::Bin:
          for (const auto& n : toks) {
            int i = var(n);
            if (!m.binary[i]) {
              m.binary[i] = 1;
              m.binary_order.push_back(i);
            }
            m.lo[i] = std::max(m.lo[i], 0.0);
            m.hi[i] = std::min(m.hi[i], 1.0);
          }
          break;
        case Sec::Gen:
          throw Error(ErrorCode::UnsupportedForExport, "general integers are not supported");
        case Sec::None: break;
      }
    }
    flush_row();
  }

  void bound_line(const std::vector<std::string>& toks) {
    // join signs with the following number
    std::vector<std::string> t;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if ((toks[i] == "-" || toks[i] == "+") && i + 1 < toks.size()) {
        t.push_back(toks[i] == "-" ? "-" + toks[i + 1] : toks[i + 1]);
        ++i;
      } else {
        t.push_back(toks[i]);
      }
    }
    auto num = [](const std::string& s, double& v) {
      if (!s.empty() && s[0] == '-') {
        if (!is_number(s.substr(1), v)) return false;
        v = -v;
        return true;
      }
      return is_number(s, v);
    };
    double a, b;
    if (t.size() == 2 && lower(t[1]) == "free") {
      int i = var(t[0]);
      m.lo[i] = -kInf;
      m.hi[i] = kInf;
      return;
    }
    if (t.size() == 5 && num(t[0], a) && num(t[4], b)) {
      int i = var(t[2]);
      m.lo[i] = a;
      m.hi[i] = b;
      return;
    }
    if (t.size() == 3) {
      if (num(t[2], b)) {
        int i = var(t[0]);
        if (t[1] == "<=") m.hi[i] = b;
        else if (t[1] == ">=") m.lo[i] = b;
        else m.lo[i] = m.hi[i] = b;
        return;
      }
      if (num(t[0], a)) {
        int i = var(t[2]);
        if (t[1] == "<=") m.lo[i] = a;
        else if (t[1] == ">=") m.hi[i] = a;
        else m.lo[i] = m.hi[i] = a;
        return;
      }
    }
    throw Error(ErrorCode::SyntaxError, "unreadable bound line");
  }

 private:
  std::unordered_map<std::string, int> idx_;
};

class Enumerator {
 public:
  Enumerator(const LpModel& m, long long node_limit) : m_(m), limit_(node_limit) {
    lo_ = m.lo;
    hi_ = m.hi;
    rows_of_.resize(m.names.size());
    for (std::size_t r = 0; r < m.rows.size(); ++r)
      for (const auto& t : m.rows[r].terms) rows_of_[t.var].push_back(static_cast<int>(r));
  }

  LpSolveResult run(const std::string& prefix) {
    for (int v : m_.binary_order) {
      if (m_.names[v].rfind(prefix, 0) == 0) decisions_.push_back(v);
      else aux_.push_back(v);
    }
    std::deque<int> all;
    for (std::size_t r = 0; r < m_.rows.size(); ++r) all.push_back(static_cast<int>(r));
    if (propagate(all)) dec(0);
    res_.nodes = nodes_;
    return res_;
  }

 private:
  struct Change {
    int var;
    double lo, hi;
  };

  bool set_bounds(int v, double lo, double hi, std::deque<int>& q) {
    if (m_.binary[v]) {
      lo = std::ceil(lo - 1e-6);
      hi = std::floor(hi + 1e-6);
    }
    const double tol = 1e-9 * (1.0 + std::max(std::fabs(lo_[v]), std::fabs(hi_[v])));
    bool tighter_lo = lo > lo_[v] + tol;
    bool tighter_hi = hi < hi_[v] - tol;
    if (!tighter_lo && !tighter_hi) return true;
    trail_.push_back({v, lo_[v], hi_[v]});
    if (tighter_lo) lo_[v] = lo;
    if (tighter_hi) hi_[v] = hi;
    if (lo_[v] > hi_[v] + 1e-7 * (1.0 + std::fabs(hi_[v]))) return false;
    if (lo_[v] > hi_[v]) lo_[v] = hi_[v];
    for (int r : rows_of_[v]) q.push_back(r);
    return true;
  }

  bool propagate(std::deque<int>& q) {
    long long budget = 200 * static_cast<long long>(m_.rows.size()) + 1000;
    while (!q.empty()) {
      if (--budget < 0) break;
      const auto& row = m_.rows[q.front()];
      q.pop_front();
      double minact = 0, maxact = 0;
      for (const auto& t : row.terms) {
        minact += t.coef > 0 ? t.coef * lo_[t.var] : t.coef * hi_[t.var];
        maxact += t.coef > 0 ? t.coef * hi_[t.var] : t.coef * lo_[t.var];
      }
      const double tol = 1e-7 * (1.0 + std::fabs(row.rhs));
      if ((row.sense == 'L' || row.sense == 'E') && minact > row.rhs + tol) return false;
      if ((row.sense == 'G' || row.sense == 'E') && maxact < row.rhs - tol) return false;
      if (!std::isfinite(minact) && !std::isfinite(maxact)) continue;
      for (const auto& t : row.terms) {
        double nlo = lo_[t.var], nhi = hi_[t.var];
        if ((row.sense == 'L' || row.sense == 'E') && std::isfinite(minact)) {
          double own = t.coef > 0 ? t.coef * lo_[t.var] : t.coef * hi_[t.var];
          double lim = (row.rhs - (minact - own)) / t.coef;
          if (t.coef > 0) nhi = std::min(nhi, lim);
          else nlo = std::max(nlo, lim);
        }
        if ((row.sense == 'G' || row.sense == 'E') && std::isfinite(maxact)) {
          double own = t.coef > 0 ? t.coef * hi_[t.var] : t.coef * lo_[t.var];
          double lim = (row.rhs - (maxact - own)) / t.coef;
          if (t.coef > 0) nlo = std::max(nlo, lim);
          else nhi = std::min(nhi, lim);
        }
        if (!set_bounds(t.var, nlo, nhi, q)) return false;
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto c = trail_.back();
      trail_.pop_back();
      lo_[c.var] = c.lo;
      hi_[c.var] = c.hi;
    }
  }

  bool fix(int v, double val) {
    std::deque<int> q;
    if (!set_bounds(v, val, val, q)) return false;
    return propagate(q);
  }

  void tick() {
    if (++nodes_ > limit_) throw Error(ErrorCode::BudgetExhausted, "LP enumeration node limit reached");
  }

  void dec(std::size_t k) {
    tick();
    if (k == decisions_.size()) {
      ++res_.decisions;
      if (auto obj = aux(0)) {
        if (!res_.feasible || *obj > res_.objective) res_.objective = *obj;
        res_.feasible = true;
      }
      return;
    }
    int v = decisions_[k];
    if (lo_[v] == hi_[v]) {
      dec(k + 1);
      return;
    }
    for (double val : {1.0, 0.0}) {
      std::size_t mark = trail_.size();
      if (fix(v, val)) dec(k + 1);
      undo(mark);
    }
  }

  std::optional<double> aux(std::size_t k) {
    tick();
    if (k == aux_.size()) return leaf();
    int v = aux_[k];
    if (lo_[v] == hi_[v]) return aux(k + 1);
    for (double val : {0.0, 1.0}) {
      std::size_t mark = trail_.size();
      std::optional<double> r;
      if (fix(v, val)) r = aux(k + 1);
      undo(mark);
      if (r) return r;
    }
    return std::nullopt;
  }

  std::optional<double> leaf() {
    // every variable should be pinned by now; check the rows at the midpoint
    std::vector<double> x(lo_.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (hi_[i] - lo_[i] > 1e-6 * (1.0 + std::fabs(hi_[i]))) {
        bool used = !rows_of_[i].empty();
        for (const auto& t : m_.objective) used = used || t.var == static_cast<int>(i);
        if (used) return std::nullopt;
      }
      x[i] = std::isfinite(lo_[i]) && std::isfinite(hi_[i]) ? 0.5 * (lo_[i] + hi_[i])
             : std::isfinite(lo_[i])                        ? lo_[i]
                                                            : hi_[i];
    }
    for (const auto& row : m_.rows) {
      double act = 0;
      for (const auto& t : row.terms) act += t.coef * x[t.var];
      const double tol = 1e-6 * (1.0 + std::fabs(row.rhs));
      if ((row.sense == 'L' || row.sense == 'E') && act > row.rhs + tol) return std::nullopt;
      if ((row.sense == 'G' || row.sense == 'E') && act < row.rhs - tol) return std::nullopt;
    }
    double obj = m_.objective_constant;
    for (const auto& t : m_.objective) obj += t.coef * x[t.var];
    return m_.maximize ? obj : -obj;
  }

  const LpModel& m_;
  long long limit_;
  long long nodes_ = 0;
  std::vector<double> lo_, hi_;
  std::vector<std::vector<int>> rows_of_;
  std::vector<int> decisions_, aux_;
  std::vector<Change> trail_;
  LpSolveResult res_;
};

}  // namespace

LpModel parse_lp(std::string_view text) {
  Reader r;
  r.parse(text);
  return std::move(r.m);
}

LpSolveResult solve_lp_enumerate(const LpModel& m, const std::string& decision_prefix,
                                 long long node_limit) {
  Enumerator e(m, node_limit);
  auto res = e.run(decision_prefix);
  if (!m.maximize) res.objective = -res.objective;
  return res;
}

}  // namespace janaka
