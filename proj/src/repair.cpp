#include "janaka/repair.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "janaka/detail/kernels.hpp"
#include "janaka/error.hpp"

namespace janaka {

using detail::Column;
using detail::Layout;

// ---------------------------------------------------------------------------
// triviality

namespace {

bool is_negation_of(const Formula& a, const Formula& b) {
  return a.op() == Op::Not && a.child() == b;
}

void collect_props(const Formula& f, std::vector<std::string>& out) {
  if (f.op() == Op::Atom) {
    if (std::find(out.begin(), out.end(), f.name()) == out.end()) out.push_back(f.name());
    return;
  }
  int n = arity(f.op());
  if (n >= 1) collect_props(f.left(), out);
  if (n == 2) collect_props(f.right(), out);
}

bool prop_eval(const Formula& f, const std::vector<std::string>& atoms, std::uint64_t bits) {
  switch (f.op()) {
    case Op::True: return true;
    case Op::Atom: {
      auto it = std::find(atoms.begin(), atoms.end(), f.name());
      return (bits >> (it - atoms.begin())) & 1u;
    }
    case Op::Not: return !prop_eval(f.child(), atoms, bits);
    case Op::And: return prop_eval(f.left(), atoms, bits) && prop_eval(f.right(), atoms, bits);
    case Op::Or: return prop_eval(f.left(), atoms, bits) || prop_eval(f.right(), atoms, bits);
    case Op::Implies: return !prop_eval(f.left(), atoms, bits) || prop_eval(f.right(), atoms, bits);
    default: throw Error(ErrorCode::InvalidArgument, "temporal operator in propositional check");
  }
}

}  // namespace

bool is_tautology(const Formula& f) {
  if (!is_propositional(f)) return false;
  std::vector<std::string> atoms;
  collect_props(f, atoms);
  if (atoms.size() > 20) return false;
  for (std::uint64_t bits = 0; bits < (1ull << atoms.size()); ++bits)
    if (!prop_eval(f, atoms, bits)) return false;
  return true;
}

bool is_trivial(const Formula& f) {
  const Op op = f.op();
  if (is_binary(op)) {
    const Formula& l = f.left();
    const Formula& r = f.right();
    if (l == r) return true;
    if ((op == Op::And || op == Op::Or) && (is_negation_of(l, r) || is_negation_of(r, l)))
      return true;
    return is_trivial(l) || is_trivial(r);
  }
  if (is_unary(op)) {
    const Formula& c = f.child();
    if ((op == Op::Finally || op == Op::Globally) && c.op() == op) return true;
    if ((op == Op::Finally || op == Op::Globally) && is_tautology(c)) return true;
    return is_trivial(c);
  }
  return false;
}

// ---------------------------------------------------------------------------
// libraries

class LibraryCache {
 public:
  struct Lib {
    std::vector<Formula> formulas;
    std::vector<Column> cols;
    Column hull;
  };

  LibraryCache(const Sample& s, const SemanticsParams& p, bool filter, double max_lib)
      : s_(s), p_(p), lay_(s), filter_(filter), max_lib_(max_lib) {}

  const Lib& get(int k) {
    std::lock_guard<std::mutex> lock(m_);
    auto it = libs_.find(k);
    if (it != libs_.end()) return *it->second;
    const double size = subtree_library_size(k, s_.props.size());
    if (size > max_lib_)
      throw Error(ErrorCode::InvalidArgument,
                  "subtree hole of depth " + std::to_string(k) + " over " +
                      std::to_string(s_.props.size()) + " atoms has " +
                      std::to_string(static_cast<long long>(size)) +
                      " fillings, above the library limit");
    auto lib = std::make_unique<Lib>();
    for (auto& f : subtree_library(k, s_.props)) {
      if (filter_ && is_trivial(f)) continue;
      auto prog = detail::compile(f, s_.props, p_.kind);
      lib->cols.push_back(detail::run(prog, p_, s_, lay_, false));
      lib->formulas.push_back(std::move(f));
    }
    lib->hull = lib->cols.front();
    for (const auto& c : lib->cols)
      for (std::size_t i = 0; i < lay_.total; ++i) {
        lib->hull.lo[i] = std::min(lib->hull.lo[i], c.lo[i]);
        lib->hull.hi[i] = std::max(lib->hull.hi[i], c.hi[i]);
      }
    auto& ref = *lib;
    libs_.emplace(k, std::move(lib));
    return ref;
  }

 private:
  const Sample& s_;
  SemanticsParams p_;
  Layout lay_;
  bool filter_;
  double max_lib_;
  std::mutex m_;
  std::map<int, std::unique_ptr<Lib>> libs_;
};

// ---------------------------------------------------------------------------
// problem

struct RepairProblem::Impl {
  Template tmpl;
  const Sample& s;
  SemanticsParams p;
  Layout lay;
  std::shared_ptr<LibraryCache> cache;

  std::vector<int> hole_nodes;
  std::vector<int> hole_of_node;
  std::vector<int> parent;
  std::vector<int> post;
  std::vector<const LibraryCache::Lib*> lib;  // per hole, null for label holes
  std::vector<int> parent_hole;               // per hole: enclosing label hole for optional holes
  std::vector<detail::Label> fixed_label;     // per node
  std::vector<Column> own;
  std::vector<const Column*> cur;
  std::vector<int> choice;
  Column scratch;

  Impl(const Template& t, const Sample& sample, const SemanticsParams& params,
       std::shared_ptr<LibraryCache> c)
      : tmpl(t), s(sample), p(params), lay(sample), cache(std::move(c)) {
    const int n = static_cast<int>(tmpl.nodes.size());
    hole_of_node.assign(n, -1);
    parent.assign(n, -1);
    fixed_label.resize(n);
    own.resize(n);
    cur.assign(n, nullptr);
    hole_nodes = tmpl.holes();
    for (std::size_t h = 0; h < hole_nodes.size(); ++h) hole_of_node[hole_nodes[h]] = static_cast<int>(h);
    build_post(tmpl.root);
    for (int i : post) {
      const auto& nd = tmpl.nodes[i];
      if (nd.left >= 0) parent[nd.left] = i;
      if (nd.right >= 0) parent[nd.right] = i;
      if (nd.kind == TemplateNode::Kind::Fixed) fixed_label[i] = to_label(nd.label);
      if (nd.kind == TemplateNode::Kind::Fixed && nd.label.op == Op::Not &&
          p.kind == SemanticsKind::Robust)
        throw Error(ErrorCode::NotInNNF, "robust repair needs a template in negation normal form");
    }
    lib.assign(hole_nodes.size(), nullptr);
    parent_hole.assign(hole_nodes.size(), -1);
    for (std::size_t h = 0; h < hole_nodes.size(); ++h) {
      const auto& nd = tmpl.nodes[hole_nodes[h]];
      if (nd.kind == TemplateNode::Kind::SubtreeHole) lib[h] = &cache->get(nd.max_depth);
      if (nd.optional && parent[hole_nodes[h]] >= 0)
        parent_hole[h] = hole_of_node[parent[hole_nodes[h]]];
    }
    choice.assign(hole_nodes.size(), -1);
    full();
  }

  void build_post(int i) {
    if (i < 0) return;
    build_post(tmpl.nodes[i].left);
    build_post(tmpl.nodes[i].right);
    post.push_back(i);
  }

  detail::Label to_label(const SlotLabel& l) const {
    detail::Label out;
    out.op = l.op;
    out.neg = l.negated;
    if (l.op == Op::Atom) {
      auto idx = s.props.index_of(l.atom);
      if (!idx) throw Error(ErrorCode::UnknownAtom, "unknown atom '" + l.atom + "'");
      out.atom = static_cast<int>(*idx);
    }
    return out;
  }

  int option_count(int h) const {
    const auto& nd = tmpl.nodes[hole_nodes[h]];
    return nd.kind == TemplateNode::Kind::SubtreeHole ? static_cast<int>(lib[h]->formulas.size())
                                                      : static_cast<int>(nd.ops.size());
  }

  bool inactive(int h, const std::vector<int>& ch) const {
    int ph = parent_hole[h];
    if (ph < 0 || ch[ph] < 0) return false;
    const auto& pn = tmpl.nodes[hole_nodes[ph]];
    return is_unary(pn.ops[ch[ph]]);
  }

  void eval_op(Op op, int i, Column& out) {
    const auto& nd = tmpl.nodes[i];
    detail::Label lab;
    lab.op = op;
    detail::eval_node(p, lab, s, lay, cur[nd.left], is_binary(op) ? cur[nd.right] : nullptr, out);
  }

  void compute(int i) {
    const auto& nd = tmpl.nodes[i];
    switch (nd.kind) {
      case TemplateNode::Kind::Fixed:
        detail::eval_node(p, fixed_label[i], s, lay, nd.left >= 0 ? cur[nd.left] : nullptr,
                          nd.right >= 0 ? cur[nd.right] : nullptr, own[i]);
        cur[i] = &own[i];
        return;
      case TemplateNode::Kind::SubtreeHole: {
        int h = hole_of_node[i];
        cur[i] = choice[h] >= 0 ? &lib[h]->cols[choice[h]] : &lib[h]->hull;
        return;
      }
      case TemplateNode::Kind::LabelHole: {
        int h = hole_of_node[i];
        if (choice[h] >= 0) {
          eval_op(nd.ops[choice[h]], i, own[i]);
        } else {
          eval_op(nd.ops[0], i, own[i]);
          for (std::size_t k = 1; k < nd.ops.size(); ++k) {
            eval_op(nd.ops[k], i, scratch);
            for (std::size_t x = 0; x < lay.total; ++x) {
              own[i].lo[x] = std::min(own[i].lo[x], scratch.lo[x]);
              own[i].hi[x] = std::max(own[i].hi[x], scratch.hi[x]);
            }
          }
        }
        cur[i] = &own[i];
        return;
      }
    }
  }

  void full() {
    for (int i : post) compute(i);
  }

  void upward(int i) {
    for (; i >= 0; i = parent[i]) compute(i);
  }

  double total_hi() const {
    const Column& r = *cur[tmpl.root];
    double sum = 0.0;
    for (std::size_t k = 0; k < lay.traces(); ++k) sum += r.hi[lay.offset[k]];
    return sum;
  }

  double total_lo() const {
    const Column& r = *cur[tmpl.root];
    double sum = 0.0;
    for (std::size_t k = 0; k < lay.traces(); ++k) sum += r.lo[lay.offset[k]];
    return sum;
  }

  void set(int h, int o) {
    choice[h] = o;
    upward(hole_nodes[h]);
  }

  Formula build(int i, const std::vector<int>& ch) const {
    const auto& nd = tmpl.nodes[i];
    switch (nd.kind) {
      case TemplateNode::Kind::SubtreeHole: {
        int h = hole_of_node[i];
        if (ch[h] < 0) throw Error(ErrorCode::InvalidArgument, "open hole in filling");
        return lib[h]->formulas[ch[h]];
      }
      case TemplateNode::Kind::LabelHole: {
        int h = hole_of_node[i];
        if (ch[h] < 0) throw Error(ErrorCode::InvalidArgument, "open hole in filling");
        Op op = nd.ops[ch[h]];
        if (is_binary(op)) return Formula::binary(op, build(nd.left, ch), build(nd.right, ch));
        return Formula::unary(op, build(nd.left, ch));
      }
      case TemplateNode::Kind::Fixed: {
        const SlotLabel& l = nd.label;
        if (l.is_literal()) {
          Formula a = l.op == Op::True ? Formula::truth() : Formula::atom(l.atom);
          return l.negated ? Formula::negation(a) : a;
        }
        if (l.op == Op::Not) return Formula::negation(build(nd.left, ch));
        if (is_binary(l.op)) return Formula::binary(l.op, build(nd.left, ch), build(nd.right, ch));
        return Formula::unary(l.op, build(nd.left, ch));
      }
    }
    throw Error(ErrorCode::InvalidArgument, "bad template node");
  }
};

RepairProblem::RepairProblem(const Template& t, const Sample& s, const SemanticsParams& p,
                             const RepairOptions& opt)
    : RepairProblem(t, s, p, opt,
                    std::make_shared<LibraryCache>(s, p, opt.filter_trivial, opt.max_library)) {}

RepairProblem::RepairProblem(const Template& t, const Sample& s, const SemanticsParams& p,
                             const RepairOptions&, std::shared_ptr<LibraryCache> cache)
    : impl_(std::make_unique<Impl>(t, s, p, std::move(cache))) {}

RepairProblem::~RepairProblem() = default;
RepairProblem::RepairProblem(RepairProblem&&) noexcept = default;

int RepairProblem::holes() const { return static_cast<int>(impl_->hole_nodes.size()); }
int RepairProblem::options(int hole) const { return impl_->option_count(hole); }
bool RepairProblem::optional_hole(int hole) const { return impl_->parent_hole[hole] >= 0; }
bool RepairProblem::inactive(int hole, const std::vector<int>& choices) const {
  return impl_->inactive(hole, choices);
}

double RepairProblem::bound(const std::vector<int>& choices) {
  impl_->choice = choices;
  impl_->full();
  return impl_->total_hi();
}

double RepairProblem::evaluate(const std::vector<int>& choices) {
  for (int h = 0; h < holes(); ++h)
    if (choices[h] < 0 && !impl_->inactive(h, choices))
      throw Error(ErrorCode::InvalidArgument, "evaluate needs every active hole chosen");
  impl_->choice = choices;
  impl_->full();
  return impl_->total_lo();
}

Formula RepairProblem::formula(const std::vector<int>& choices) const {
  return impl_->build(impl_->tmpl.root, choices);
}

// ---------------------------------------------------------------------------
// search

namespace {

using Clock = std::chrono::steady_clock;

struct Incumbent {
  bool has = false;
  double total = 0;
  std::size_t size = 0;
  std::string text;
  std::optional<Formula> formula;
  int tmpl = -1;
};

bool better(double total, std::size_t size, const std::string& text, const Incumbent& inc) {
  if (!inc.has) return true;
  if (total != inc.total) return total > inc.total;
  if (size != inc.size) return size < inc.size;
  return text < inc.text;
}

struct Shared {
  std::mutex m;
  std::atomic<double> inc_total{-std::numeric_limits<double>::infinity()};
  Incumbent best;
  std::vector<double> history;
  std::atomic<long long> nodes{0}, explored{0}, pruned{0};
  std::atomic<bool> expired{false};
  Clock::time_point deadline;
  long long node_limit = 0;
  const RepairOptions* opt = nullptr;
};

class Searcher {
 public:
  Searcher(RepairProblem::Impl& pr, RepairProblem::Impl* sat, Shared& sh, int tmpl_index)
      : pr_(pr), sat_(sat), sh_(sh), tmpl_(tmpl_index), need_(static_cast<double>(pr.s.size()) - 0.5) {}

  void run() { dfs(0); }

 private:
  bool out_of_budget() {
    if (sh_.expired.load(std::memory_order_relaxed)) return true;
    long long n = ++sh_.nodes;
    if ((sh_.node_limit > 0 && n > sh_.node_limit) || ((n & 255) == 0 && Clock::now() > sh_.deadline)) {
      sh_.expired = true;
      return true;
    }
    return false;
  }

  void leaf() {
    ++sh_.explored;
    double total = pr_.total_lo();
    if (total < sh_.inc_total.load()) return;
    if (sat_ && sat_->total_lo() < need_) return;
    Formula f = pr_.build(pr_.tmpl.root, pr_.choice);
    if (sh_.opt->filter_trivial && is_trivial(f)) return;
    std::string text = format_formula(f);
    std::lock_guard<std::mutex> lock(sh_.m);
    if (!better(total, f.size(), text, sh_.best)) return;
    sh_.best = Incumbent{true, total, f.size(), std::move(text), f, tmpl_};
    sh_.inc_total = total;
    sh_.history.push_back(total);
  }

  void dfs(std::size_t level) {
    if (out_of_budget()) return;
    if (level == pr_.hole_nodes.size()) {
      leaf();
      return;
    }
    const int h = static_cast<int>(level);
    if (pr_.inactive(h, pr_.choice)) {
      dfs(level + 1);
      return;
    }
    const int n = pr_.option_count(h);
    std::vector<std::pair<double, int>> cand;
    cand.reserve(n);
    for (int o = 0; o < n; ++o) {
      if (sat_) {
        // a trace that no completion can satisfy rules the option out
        sat_->set(h, o);
        if (sat_->total_hi() < need_) {
          ++sh_.pruned;
          continue;
        }
      }
      pr_.set(h, o);
      cand.emplace_back(pr_.total_hi(), o);
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const double inc = sh_.inc_total.load();
      if (cand[i].first < inc) {
        sh_.pruned += static_cast<long long>(cand.size() - i);
        if (sh_.opt->on_prune) {
          for (std::size_t j = i; j < cand.size(); ++j) {
            std::vector<int> ch = pr_.choice;
            ch[h] = cand[j].second;
            std::lock_guard<std::mutex> lock(sh_.m);
            sh_.opt->on_prune(PruneEvent{tmpl_, std::move(ch), cand[j].first, inc});
          }
        }
        break;
      }
      pr_.set(h, cand[i].second);
      if (sat_) sat_->set(h, cand[i].second);
      dfs(level + 1);
      if (sh_.expired) break;
    }
    pr_.set(h, -1);
    if (sat_) sat_->set(h, -1);
  }

  RepairProblem::Impl& pr_;
  RepairProblem::Impl* sat_;
  Shared& sh_;
  int tmpl_;
  double need_;
};

}  // namespace

RepairOutcome repair(const Sample& s, const std::vector<Template>& templates,
                     const SemanticsParams& p, double kappa, const SearchBudget& budget,
                     const RepairOptions& opt) {
  const auto start = Clock::now();
  p.validate();
  if (s.traces.empty()) throw Error(ErrorCode::EmptySample, "sample has no traces");
  if (templates.empty()) throw Error(ErrorCode::NoTemplates, "no templates to repair");
  if (budget.time_limit_s <= 0 || budget.threads < 1 || budget.node_limit < 0)
    throw Error(ErrorCode::InvalidArgument, "search budget must be positive");

  // drop duplicate templates, keeping the first occurrence
  std::vector<int> keep;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < templates.size(); ++i)
    if (seen.insert(format_template(templates[i])).second) keep.push_back(static_cast<int>(i));

  auto cache = std::make_shared<LibraryCache>(s, p, opt.filter_trivial, opt.max_library);
  // discounted scores with alpha = beta = 1 are exactly 0/1 satisfaction
  const SemanticsParams qual{1.0, 1.0, 0.0, SemanticsKind::Discounted};
  std::shared_ptr<LibraryCache> sat_cache;
  if (opt.require_sat) sat_cache = std::make_shared<LibraryCache>(s, qual, opt.filter_trivial, opt.max_library);
  Shared sh;
  sh.opt = &opt;
  sh.node_limit = budget.node_limit;
  sh.deadline = start + std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(budget.time_limit_s));

  std::atomic<std::size_t> next{0};
  std::mutex err_m;
  std::exception_ptr err;
  auto worker = [&] {
    try {
      for (;;) {
        std::size_t k = next++;
        if (k >= keep.size() || sh.expired) return;
        RepairProblem::Impl impl(templates[keep[k]], s, p, cache);
        std::optional<RepairProblem::Impl> sat;
        if (sat_cache) sat.emplace(templates[keep[k]], s, qual, sat_cache);
        Searcher(impl, sat ? &*sat : nullptr, sh, keep[k]).run();
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_m);
      if (!err) err = std::current_exception();
      sh.expired = true;
    }
  };
  const int threads = std::min<int>(budget.threads, static_cast<int>(keep.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);

  RepairOutcome out;
  out.templates_searched = std::min(next.load(), keep.size());
  out.explored = sh.explored;
  out.nodes = sh.nodes;
  out.pruned = sh.pruned;
  out.budget_expired = sh.expired;
  out.incumbents = sh.history;
  if (sh.best.has) {
    out.best = sh.best.formula;
    out.template_index = sh.best.tmpl;
    auto vals = trace_values(*out.best, s, p);
    auto sat = satisfies_all(*out.best, s);
    double total = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      total += vals[i];
      out.per_trace.push_back({vals[i], sat.per_trace[i]});
    }
    out.all_sat = sat.all;
    out.total = total;
    out.fitness = sample_fitness(*out.best, s, p);
    if (total != sh.best.total)
      throw std::logic_error("repair incumbent total disagrees with direct evaluation");
    out.threshold_met = out.fitness >= kappa;
  }
  out.elapsed_s = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

}  // namespace janaka
