#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "janaka/error.hpp"
#include "janaka/pipeline.hpp"

using namespace janaka;
namespace fs = std::filesystem;

namespace {

const PropositionSet pq({"p", "q"});

Sample all_p() {
  return Sample{pq, {make_trace(pq, {{"p"}, {"p", "q"}, {"p"}}), make_trace(pq, {{"p"}, {"p"}}),
                     make_trace(pq, {{"p", "q"}, {"p"}, {"p"}, {"p"}})}};
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("janaka_unit_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("gate takes the llm-direct path when a candidate clears kappa") {
  RunConfig cfg;
  cfg.kappa = 0.5;
  cfg.n_candidates = 2;
  MockProvider m({"`G(p)`\n`F(q)`"});
  auto r = janaka_run(cfg, all_p(), "p always holds", m);
  CHECK(r.path == RunPath::LlmDirect);
  REQUIRE(r.formula.has_value());
  CHECK(format_formula(*r.formula) == "G(p)");
  CHECK_FALSE(r.repair.has_value());
  CHECK(r.repair_s == 0.0);
  CHECK(r.sat);
}

TEST_CASE("gate falls through to repair below kappa") {
  RunConfig cfg;
  cfg.kappa = 1.5;
  cfg.n_candidates = 1;
  cfg.strategy = Strategy::GTemp;
  cfg.budget.time_limit_s = 10;
  MockProvider m({"`F(p)`"});
  auto r = janaka_run(cfg, all_p(), "p always holds", m);
  CHECK(r.path != RunPath::LlmDirect);
  CHECK(r.repair.has_value());
  REQUIRE(r.formula.has_value());
  CHECK(r.fitness >= r.candidates[0].fitness);
}

TEST_CASE("unreachable kappa with a tiny budget fails with a best-so-far") {
  RunConfig cfg;
  cfg.kappa = 1e9;
  cfg.n_candidates = 1;
  cfg.budget.node_limit = 20;
  MockProvider m({"`F(p)`"});
  auto r = janaka_run(cfg, all_p(), "p always holds", m);
  CHECK(r.path == RunPath::Failed);
  CHECK(r.formula.has_value());
}

TEST_CASE("config validation") {
  RunConfig cfg;
  cfg.k = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = RunConfig{};
  cfg.hole_prob = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("run reports are deterministic modulo timings") {
  RunConfig cfg;
  cfg.kappa = 10;
  cfg.n_candidates = 1;
  cfg.budget.node_limit = 2000;
  cfg.budget.time_limit_s = 1e6;
  MockProvider a({"`F(p & q)`"}), b({"`F(p & q)`"});
  auto ra = janaka_run(cfg, all_p(), "x", a).to_json(false).dump(2);
  auto rb = janaka_run(cfg, all_p(), "x", b).to_json(false).dump(2);
  CHECK(ra == rb);
  CHECK(ra.find("total_s") == std::string::npos);
  CHECK(janaka_run(cfg, all_p(), "x", a).to_json(true).contains("timings"));
}

TEST_CASE("eval_formula examples") {
  SemanticsParams d{1.0, 1.0, 0.0, SemanticsKind::Discounted};
  auto r = eval_formula("G(p)", all_p(), d);
  REQUIRE(r.size() == 1);
  CHECK(r[0].fitness == 1.0);

  PropositionSet q({"q"});
  Sample s{q, {make_trace(q, {{}, {}, {}, {}, {}, {}, {}, {"q"}})}};
  SemanticsParams rb{0.9, 1.0, 0.1, SemanticsKind::Robust};
  auto f = eval_formula("F(q)", s, rb);
  CHECK(std::abs(f[0].fitness - std::pow(0.9, 7)) < 1e-12);

  Sample np{pq, {make_trace(pq, {{"p"}, {}})}};
  auto g = eval_formula("G(p)", np, SemanticsParams{0.9, 0.9, 0.1, SemanticsKind::Robust});
  CHECK(g[0].fitness == doctest::Approx(-0.9));
  CHECK_FALSE(g[0].rows[0].sat);

  CHECK(eval_formula("G(p)", np, rb, true).size() == 2);
  CHECK_THROWS_AS(eval_formula("G(p", np, rb), Error);
}

TEST_CASE("bench isolates failing cases") {
  fs::path suite = scratch("suite");
  write(suite / "a_good" / "case.json", R"j({"ground_truth": "G(p)", "props": ["p", "q"],
    "explanation": "p holds", "generate": {"count": 4, "min_len": 2, "max_len": 4, "seed": 3},
    "run": {"kappa": 0.5, "n_candidates": 1, "time_limit_s": 5}})j");
  write(suite / "a_good" / "responses" / "01.txt", "`G(p)`\n");
  write(suite / "b_unsat" / "case.json", R"j({"ground_truth": "p & !p", "props": ["p", "q"],
    "explanation": "never", "generate": {"count": 4, "min_len": 2, "max_len": 4, "budget": 500}})j");
  write(suite / "b_unsat" / "responses" / "01.txt", "`G(p)`\n");
  fs::path out = scratch("out");
  auto rep = bench_run(suite.string(), out.string());
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].error.empty());
  CHECK(rep.rows[0].path == "llm-direct");
  CHECK(rep.rows[0].claims_ok);
  CHECK(rep.rows[1].error_code == "BudgetExhausted");
  CHECK_FALSE(rep.rows[1].claims_ok);
  CHECK(fs::exists(out / "report.md"));
  CHECK(fs::exists(out / "report.json"));
  CHECK(rep.markdown().find("a_good") != std::string::npos);

  fs::path empty = scratch("empty_suite");
  CHECK_THROWS_AS(bench_run(empty.string(), ""), Error);
}
