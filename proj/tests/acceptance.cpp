// Prints one PASS/FAIL line per acceptance criterion. Exit status is 0 once
// every check has run; with --strict it is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "janaka/error.hpp"
#include "janaka/milp.hpp"
#include "janaka/pipeline.hpp"
#include "janaka/qualitative.hpp"
#include "oracle.hpp"

using namespace janaka;
namespace fs = std::filesystem;

namespace {

struct Line {
  bool pass;
  std::string detail;
};

int failures = 0;

void run(const std::string& name, double limit_s, const std::function<Line()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Line r{false, ""};
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && s >= limit_s) {
    r.pass = false;
    r.detail += "; over the " + std::to_string(static_cast<int>(limit_s)) + " s limit";
  }
  if (!r.pass) ++failures;
  std::printf("[%s] %s: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.c_str(), s);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string source_dir() {
  if (const char* e = std::getenv("JANAKA_SOURCE_DIR")) return e;
  return JANAKA_SOURCE_DIR;
}

std::vector<std::string> atoms_for(std::size_t n) {
  std::vector<std::string> all{"p", "q", "r", "s"};
  return {all.begin(), all.begin() + static_cast<long>(n)};
}

Line discounted_equivalence() {
  std::mt19937_64 rng(101);
  SemanticsParams p{1.0, 1.0, 0.0, SemanticsKind::Discounted};
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    auto atoms = atoms_for(1 + rng() % 4);
    PropositionSet ps(atoms);
    Formula f = oracle::random_formula(rng, atoms, 4, false);
    Trace w = oracle::random_trace(rng, atoms.size(), 1, 12);
    double v = discounted_value(f, w, ps, p).value;
    bool q = eval_qualitative(f, w, ps);
    if (!((v == 0.0 || v == 1.0) && (v == 1.0) == q)) ++bad;
  }
  return {bad == 0, fmt("%d of 1000 instances disagree", bad)};
}

Line robust_sign() {
  std::mt19937_64 rng(202);
  SemanticsParams p{1.0, 1.0, 0.1, SemanticsKind::Robust};
  int decisive = 0, bad = 0, drawn = 0;
  while (decisive < 1000) {
    ++drawn;
    auto atoms = atoms_for(1 + rng() % 4);
    PropositionSet ps(atoms);
    Formula f = oracle::random_formula(rng, atoms, 4, true);
    Trace w = oracle::random_trace(rng, atoms.size(), 1, 12);
    auto v = robust_value(f, w, ps, p);
    if (!v.decisive) continue;
    ++decisive;
    bool q = eval_qualitative(f, w, ps);
    if (!(q ? v.value > 0 : v.value < 0)) ++bad;
  }
  return {bad == 0, fmt("%d of 1000 decisive instances disagree (%d drawn)", bad, drawn)};
}

Line robust_discount_power() {
  PropositionSet q({"q"});
  Trace w = make_trace(q, {{}, {}, {}, {}, {}, {}, {}, {"q"}, {}, {"q"}});
  double worst = 0;
  for (double a : {0.5, 0.9}) {
    double v = robust_value(parse_formula("F q", q), w, q, SemanticsParams{a, 1.0, 0.1}).value;
    worst = std::max(worst, std::abs(v - std::pow(a, 7)));
  }
  return {worst <= 1e-12, fmt("max |F q - a^7| = %.3g", worst)};
}

Line discounted_f_g_powers() {
  PropositionSet p({"p"});
  double worst = 0;
  for (double a : {0.5, 0.9}) {
    SemanticsParams sp{a, 1.0, 0.0, SemanticsKind::Discounted};
    for (int n = 1; n <= 3; ++n) {
      std::vector<std::vector<std::string>> f(n, std::vector<std::string>{}), g(n, {"p"});
      f.push_back({"p"});
      g.push_back({});
      double fv = discounted_value(parse_formula("F p", p), make_trace(p, f), p, sp).value;
      double gv = discounted_value(parse_formula("G p", p), make_trace(p, g), p, sp).value;
      worst = std::max({worst, std::abs(fv - std::pow(a, n)), std::abs(gv - (1 - std::pow(a, n)))});
    }
  }
  return {worst <= 1e-12, fmt("max deviation %.3g over n = 1..3, a in {0.5, 0.9}", worst)};
}

Line repair_optimality() {
  std::mt19937_64 rng(303);
  int instances = 0, bad = 0;
  double fillings = 0, biggest = 0;
  const double cap = 20000;
  while (instances < 80) {
    auto atoms = atoms_for(1 + rng() % 3);
    PropositionSet ps(atoms);
    Formula src = oracle::random_formula(rng, atoms, 3, true);
    TemplateOptions to;
    to.d = 1 + static_cast<int>(rng() % 2);
    to.strategy = static_cast<Strategy>(rng() % 3);
    to.hole_prob = 0.4;
    to.seed = rng();
    to.count = 1;
    std::vector<Template> ts;
    try {
      ts = make_templates(src, to);
    } catch (const Error&) {
      continue;
    }
    if (ts.empty() || ts[0].hole_count() == 0 || ts[0].hole_count() > 3) continue;
    if (count_fillings(ts[0], ps.size()) > cap) continue;
    Sample s{ps, {}};
    int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) s.traces.push_back(oracle::random_trace(rng, ps.size(), 1, 8));
    ++instances;
    fillings += count_fillings(ts[0], ps.size());
    biggest = std::max(biggest, count_fillings(ts[0], ps.size()));
    for (SemanticsKind k : {SemanticsKind::Robust, SemanticsKind::Discounted}) {
      SemanticsParams p{0.9, 0.9, 0.1, k};
      const std::vector<Template>& use = ts;
      auto want = oracle::brute_force(use, s, p, true);
      SearchBudget b;
      b.time_limit_s = 120;
      auto got = repair(s, use, p, std::numeric_limits<double>::infinity(), b);
      bool ok = want.found == got.best.has_value() &&
                (!want.found || (std::abs(got.total - want.total) <= 1e-9 * std::max(1.0, std::abs(want.total)) &&
                                 format_formula(*got.best) == want.text));
      if (!ok) {
        ++bad;
        std::printf("  mismatch: %s  got %s %.12g  want %s %.12g\n", format_template(use[0]).c_str(),
                    got.best ? format_formula(*got.best).c_str() : "-", got.total, want.text.c_str(), want.total);
      }
    }
  }
  return {bad == 0, fmt("%d of %d instances x 2 semantics differ from brute force (%.0f fillings, largest %.0f)",
                        bad, instances, fillings, biggest)};
}

Line motivating() {
  fs::path dir = fs::path(source_dir()) / "fixtures" / "motivating";
  RunConfig cfg;
  cfg.trace_path = (dir / "traces.txt").string();
  cfg.explanation_path = (dir / "explanation.txt").string();
  cfg.fixture_dir = (dir / "responses").string();
  cfg.params = SemanticsParams{0.9, 0.9, 0.1, SemanticsKind::Robust};
  cfg.kappa = 2.0;
  cfg.strategy = Strategy::GTemp;
  cfg.n_candidates = 5;
  cfg.budget.time_limit_s = 50;
  Sample s = read_trace_file(cfg.trace_path);
  PropositionSet ps({"p", "q", "r", "s"});
  Formula truth = parse_formula("G(p -> X((q) U (r | s)))", ps);
  bool sample_ok = s.size() == 20 && satisfies_all(truth, s).all;

  RunReport r = janaka_run(cfg);
  Formula cand = parse_formula("F(p -> X(q U (r | s)))", ps);
  SemanticsParams rob = cfg.params, disc{0.9, 0.9, 0.1, SemanticsKind::Discounted};
  double cr = sample_fitness(prepare_for(cand, rob.kind), s, rob), cd = sample_fitness(cand, s, disc);
  if (!r.formula) return {false, "no formula returned"};
  const Formula& f = *r.formula;
  double fr = sample_fitness(prepare_for(f, rob.kind), s, rob), fd = sample_fitness(f, s, disc);
  bool a = satisfies_all(f, s).all;
  bool b_rob = fr > cr, b_disc = fd > cd;
  bool c = f.op() == Op::Globally;
  bool top = !r.candidates.empty() && r.candidates[0].formula == format_formula(cand);
  return {sample_ok && top && r.path == RunPath::Repaired && a && b_rob && b_disc && c,
          fmt("%s via %s; (a) sat=%d (b) robust %.4f > %.4f: %d, discounted %.4f > %.4f: %d (c) G-rooted=%d",
              format_formula(f).c_str(), to_string(r.path).c_str(), a, fr, cr, b_rob, fd, cd, b_disc, c)};
}

Line bench() {
  fs::path out = fs::current_path() / "acceptance_bench";
  auto rep = bench_run((fs::path(source_dir()) / "bench" / "suite").string(), out.string());
  int ok = 0;
  std::string bad;
  for (const auto& row : rep.rows) {
    bool good = row.error.empty() && row.repaired_sat && row.repaired_fit >= row.llm_fit;
    ok += good;
    if (!good) bad += " " + row.name;
  }
  bool pass = rep.rows.size() == 5 && ok == 5;
  return {pass, fmt("%d of %zu cases SAT with repaired FIT >= LLM FIT%s%s", ok, rep.rows.size(),
                    bad.empty() ? "" : "; failing:", bad.c_str())};
}

Line finite_language() {
  PropositionSet p({"p"});
  Formula fg = parse_formula("F G p", p), gf = parse_formula("G F p", p);
  int words = 0, bad = 0;
  for (int n = 1; n <= 6; ++n) {
    for (std::uint64_t bits = 0; bits < (1u << n); ++bits) {
      Trace w;
      for (int i = 0; i < n; ++i) w.states.push_back((bits >> i) & 1u);
      ++words;
      if (eval_qualitative(fg, w, p) != eval_qualitative(gf, w, p)) ++bad;
    }
  }
  return {bad == 0, fmt("%d disagreements over all %d words of length 1..6", bad, words)};
}

Line milp() {
  std::mt19937_64 rng(404);
  const PropositionSet ps({"p", "q"});
  SemanticsParams p{0.9, 0.9, 0.0, SemanticsKind::Discounted};
  int none = 0, one = 0, bad = 0;
  double worst = 0;
  while (none < 10 || one < 10) {
    Sample s{ps, {}};
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) s.traces.push_back(oracle::random_trace(rng, 2, 1, 5));
    Template t = template_from_formula(Formula::truth());
    if (none < 10) {
      t = template_from_formula(oracle::random_formula(rng, ps.names(), 3, false));
    } else {
      static const char* shapes[] = {"G(?1)", "F((p ?{&,|,->,U} q))", "?{G,F,X}((p -> q))", "(?1 U q)",
                                     "X((p ?{&,|} ?{G,F}(q)))", "(F(p) ?{&,|,->,U} G(q))", "?{G,F}(?1)",
                                     "G((?1 -> F(q)))", "((p U ?1) | q)", "F(?2)"};
      t = parse_template(shapes[one], ps);
    }
    SearchBudget b;
    RepairOptions ro;
    ro.filter_trivial = false;
    auto native = repair(s, {t}, p, std::numeric_limits<double>::infinity(), b, ro);
    auto lp = solve_lp_enumerate(parse_lp(export_milp(t, s, p, t.depth()).lp));
    double diff = lp.feasible && native.best ? std::abs(lp.objective - native.total) : INFINITY;
    worst = std::max(worst, diff);
    if (!(diff <= 1e-6)) ++bad;
    (t.hole_count() == 0 ? none : one)++;
  }
  return {bad == 0, fmt("%d of 20 instances differ (max |LP - native| = %.3g), enumerator path", bad, worst)};
}

Line determinism() {
  fs::path dir = fs::path(source_dir()) / "fixtures" / "motivating";
  RunConfig cfg;
  cfg.trace_path = (dir / "traces.txt").string();
  cfg.explanation_path = (dir / "explanation.txt").string();
  cfg.fixture_dir = (dir / "responses").string();
  cfg.kappa = 100;
  cfg.budget.time_limit_s = 1e6;
  cfg.budget.node_limit = 20000;
  std::string a = janaka_run(cfg).to_json(false).dump(2);
  std::string b = janaka_run(cfg).to_json(false).dump(2);
  return {a == b, fmt("reports of %zu bytes are %s", a.size(), a == b ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  run("discounted qualitative equivalence", 10, discounted_equivalence);
  run("robust sign agreement", 10, robust_sign);
  run("robust F q at index 7 equals a^7", 0, robust_discount_power);
  run("discounted F p = a^n and G p = 1 - a^n", 0, discounted_f_g_powers);
  run("repair optimality vs brute force", 300, repair_optimality);
  run("motivating example end to end", 60, motivating);
  run("bundled five-case suite", 600, bench);
  run("F G p and G F p finite-language equivalent", 0, finite_language);
  run("MILP export cross-validation", 0, milp);
  run("deterministic mine reports", 0, determinism);
  std::printf("acceptance: %d of 10 criteria passed\n", 10 - failures);
  return strict ? failures : 0;
}
