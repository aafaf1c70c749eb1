#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "janaka/error.hpp"
#include "janaka/pipeline.hpp"

namespace janaka {

namespace fs = std::filesystem;
using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

// JSON has no infinities; unscorable candidates are written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string trim_copy(std::string s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (!std::isfinite(kappa)) throw Error(ErrorCode::InvalidArgument, "kappa must be finite");
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "d must be at least 1");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (!(hole_prob > 0.0 && hole_prob <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "hole_prob must lie in (0, 1]");
  if (templates_per_formula < 1) throw Error(ErrorCode::InvalidArgument, "templates must be at least 1");
  if (n_candidates < 1) throw Error(ErrorCode::InvalidArgument, "n_candidates must be at least 1");
  if (max_retries < 0) throw Error(ErrorCode::InvalidArgument, "max_retries must be non-negative");
  if (!(budget.time_limit_s > 0.0) || budget.threads < 1 || budget.node_limit < 0)
    throw Error(ErrorCode::InvalidArgument, "budget must be positive");
}

std::string to_string(RunPath p) {
  switch (p) {
    case RunPath::LlmDirect: return "llm-direct";
    case RunPath::Repaired: return "repaired";
    case RunPath::Failed: return "failed";
  }
  return "failed";
}

json RunReport::to_json(bool with_timings) const {
  json j;
  j["formula"] = formula ? json(format_formula(*formula)) : json(nullptr);
  j["path"] = to_string(path);
  j["fitness"] = number(fitness);
  j["sat"] = sat;
  j["candidates"] = json::array();
  for (const auto& c : candidates)
    j["candidates"].push_back({{"formula", c.formula}, {"fitness", number(c.fitness)}, {"sat", c.sat}});
  if (repair) {
    json r;
    r["fitness"] = number(repair->fitness);
    r["total"] = number(repair->total);
    r["per_trace"] = json::array();
    for (const auto& t : repair->per_trace) r["per_trace"].push_back({{"score", t.score}, {"sat", t.sat}});
    r["all_sat"] = repair->all_sat;
    r["explored"] = repair->explored;
    r["nodes"] = repair->nodes;
    r["pruned"] = repair->pruned;
    r["threshold_met"] = repair->threshold_met;
    r["budget_expired"] = repair->budget_expired;
    r["template"] = repair_template;
    r["strategy"] = repair_strategy;
    r["strategies_tried"] = strategies_tried;
    if (with_timings) r["elapsed"] = repair->elapsed_s;
    j["repair"] = r;
  } else {
    j["repair"] = nullptr;
  }
  const auto& c = config;
  j["params"] = {
      {"semantics", to_string(c.params.kind)},
      {"alpha", c.params.alpha},
      {"beta", c.params.beta},
      {"gamma", c.params.gamma},
      {"kappa", c.kappa},
      {"d", c.d},
      {"k", c.k},
      {"strategy", c.strategy ? json(to_string(*c.strategy)) : json("auto")},
      {"hole_prob", c.hole_prob},
      {"templates", c.templates_per_formula},
      {"provider", provider_id},
      {"model", c.provider == "http" ? c.http.model : std::string()},
      {"temperature", c.http.temperature},
      {"seed", c.seed},
      {"time_limit_s", c.budget.time_limit_s},
      {"node_limit", c.budget.node_limit},
      {"threads", c.budget.threads},
      {"n_candidates", c.n_candidates},
      {"mode", to_string(c.mode)},
      {"max_retries", c.max_retries},
      {"require_sat", c.require_sat},
  };
  j["provider_calls"] = provider_calls;
  if (with_timings) j["timings"] = {{"llm_s", llm_s}, {"repair_s", repair_s}, {"total_s", total_s}};
  j["notes"] = c.notes;
  return j;
}

std::unique_ptr<Provider> make_provider(const RunConfig& cfg) {
  if (cfg.provider == "mock") {
    if (cfg.fixture_dir.empty()) throw Error(ErrorCode::InvalidArgument, "mock provider needs a fixture directory");
    return MockProvider::from_directory(cfg.fixture_dir);
  }
  if (cfg.provider == "http") return std::make_unique<HttpChatProvider>(cfg.http);
  throw Error(ErrorCode::InvalidArgument, "unknown provider '" + cfg.provider + "'");
}

RunReport janaka_run(const RunConfig& cfg, const Sample& sample, const std::string& explanation,
                     Provider& provider) {
  cfg.validate();
  if (sample.traces.empty()) throw Error(ErrorCode::EmptySample, "sample has no traces");
  const auto t0 = Clock::now();
  RunReport rep;
  rep.config = cfg;
  rep.provider_id = provider.id();

  auto bundle = build_prompt(sample, explanation, cfg.mode, cfg.n_candidates);
  RequestOptions ropt;
  ropt.max_retries = cfg.max_retries;
  auto cands = request_candidates(provider, bundle, sample.props, ropt);
  rep.provider_calls = cands.calls;
  rep.llm_s = since(t0);

  auto scored = score_candidates(cands.formulas, sample, cfg.params);
  for (const auto& c : scored) rep.candidates.push_back({format_formula(c.formula), c.fitness, c.sat});

  const auto& best = scored.front();
  if (best.fitness >= cfg.kappa) {
    rep.formula = best.formula;
    rep.path = RunPath::LlmDirect;
    rep.fitness = best.fitness;
    rep.sat = best.sat;
    rep.total_s = since(t0);
    return rep;
  }

  std::vector<Formula> top;
  for (const auto& c : scored) {
    if (static_cast<int>(top.size()) >= cfg.k) break;
    if (!std::isfinite(c.fitness)) continue;
    top.push_back(prepare_for(c.formula, cfg.params.kind));
  }
  if (top.empty()) throw Error(ErrorCode::NoValidFormula, "no candidate can be scored under this semantics");

  std::vector<Strategy> order = cfg.strategy ? std::vector<Strategy>{*cfg.strategy}
                                             : std::vector<Strategy>{Strategy::GTemp, Strategy::Random,
                                                                     Strategy::WithGF};
  const auto r0 = Clock::now();
  const double deadline = cfg.budget.time_limit_s;
  for (Strategy st : order) {
    double left = deadline - since(r0);
    if (left <= 0.0 && rep.repair) break;
    std::vector<Template> templates;
    for (const auto& f : top) {
      TemplateOptions topt;
      topt.d = cfg.d;
      topt.strategy = st;
      topt.hole_prob = cfg.hole_prob;
      topt.seed = cfg.seed;
      topt.count = cfg.templates_per_formula;
      auto ts = make_templates(f, topt);
      templates.insert(templates.end(), ts.begin(), ts.end());
    }
    SearchBudget b = cfg.budget;
    b.time_limit_s = std::max(left, 1e-3);
    RepairOptions ro;
    ro.require_sat = cfg.require_sat;
    auto out = repair(sample, templates, cfg.params, cfg.kappa, b, ro);
    rep.strategies_tried.push_back(to_string(st));
    bool better = !rep.repair || (out.best && (!rep.repair->best || out.total > rep.repair->total));
    if (better) {
      rep.repair = out;
      rep.repair_strategy = to_string(st);
      rep.repair_template = out.template_index >= 0 ? format_template(templates[out.template_index]) : "";
    }
    if (rep.repair->threshold_met) break;
  }
  rep.repair_s = since(r0);

  const auto& out = *rep.repair;
  if (out.best) {
    rep.formula = out.best;
    rep.fitness = out.fitness;
    rep.sat = satisfies_all(*out.best, sample).all;
  } else {
    // nothing admissible found in time: fall back to the best candidate
    rep.formula = best.formula;
    rep.fitness = best.fitness;
    rep.sat = best.sat;
  }
  rep.path = out.threshold_met ? RunPath::Repaired : RunPath::Failed;
  rep.total_s = since(t0);
  return rep;
}

RunReport janaka_run(const RunConfig& cfg) {
  cfg.validate();
  Sample s = read_trace_file(cfg.trace_path);
  std::string expl = trim_copy(read_text(cfg.explanation_path));
  auto provider = make_provider(cfg);
  auto rep = janaka_run(cfg, s, expl, *provider);
  if (!cfg.output.empty()) write_atomic(cfg.output, rep.to_json().dump(2) + "\n");
  return rep;
}

std::vector<EvalResult> eval_formula(const std::string& text, const Sample& sample,
                                     const SemanticsParams& p, bool both) {
  p.validate();
  Formula f = parse_formula(text, sample.props);
  std::vector<SemanticsKind> kinds{p.kind};
  if (both) kinds = {SemanticsKind::Robust, SemanticsKind::Discounted};
  auto sat = satisfies_all(f, sample);
  std::vector<EvalResult> out;
  for (auto kind : kinds) {
    SemanticsParams q = p;
    q.kind = kind;
    Formula g = prepare_for(f, kind);
    EvalResult r{format_formula(f), kind, 0.0, 0.0, {}};
    for (std::size_t i = 0; i < sample.size(); ++i) {
      auto v = valuate(g, sample.traces[i], sample.props, q);
      r.rows.push_back({v.value, v.decisive, sat.per_trace[i]});
    }
    r.total = sample_total(g, sample, q);
    r.fitness = sample_fitness(g, sample, q);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

BenchCase load_bench_case(const std::string& dir) {
  json j;
  try {
    j = json::parse(read_text((fs::path(dir) / "case.json").string()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SyntaxError, "bad case.json in " + dir + ": " + e.what());
  }
  BenchCase c;
  c.name = j.value("name", fs::path(dir).filename().string());
  c.ground_truth = j.at("ground_truth").get<std::string>();
  c.props = j.at("props").get<std::vector<std::string>>();
  c.explanation = j.at("explanation").get<std::string>();
  const json g = j.value("generate", json::object());
  c.gen.count = g.value("count", 20);
  c.gen.min_len = g.value("min_len", 5);
  c.gen.max_len = g.value("max_len", 10);
  c.gen.seed = g.value("seed", std::uint64_t{1});
  c.gen.budget = g.value("budget", 200000L);
  const json r = j.value("run", json::object());
  RunConfig& rc = c.run;
  rc.params.kind = semantics_from_string(r.value("semantics", std::string("robust")));
  rc.params.alpha = r.value("alpha", rc.params.alpha);
  rc.params.beta = r.value("beta", rc.params.beta);
  rc.params.gamma = r.value("gamma", rc.params.gamma);
  rc.kappa = r.value("kappa", rc.kappa);
  rc.d = r.value("d", rc.d);
  rc.k = r.value("k", rc.k);
  if (r.contains("strategy") && !r["strategy"].is_null())
    rc.strategy = strategy_from_string(r["strategy"].get<std::string>());
  rc.hole_prob = r.value("hole_prob", rc.hole_prob);
  rc.templates_per_formula = r.value("templates", rc.templates_per_formula);
  rc.seed = r.value("seed", rc.seed);
  rc.budget.time_limit_s = r.value("time_limit_s", rc.budget.time_limit_s);
  rc.budget.threads = r.value("threads", rc.budget.threads);
  rc.n_candidates = r.value("n_candidates", rc.n_candidates);
  rc.require_sat = r.value("require_sat", rc.require_sat);
  rc.notes = r.value("notes", std::string());
  rc.provider = "mock";
  rc.fixture_dir = (fs::path(dir) / "responses").string();
  const json e = j.value("expect", json::object());
  c.expect_sat = e.value("sat", true);
  c.expect_improvement = e.value("improvement", true);
  return c;
}

namespace {

BenchRow run_case(const fs::path& dir, const fs::path& out) {
  BenchRow row;
  row.name = dir.filename().string();
  const auto t0 = Clock::now();
  try {
    BenchCase c = load_bench_case(dir.string());
    row.name = c.name;
    PropositionSet props(c.props);
    Formula truth = parse_formula(c.ground_truth, props);
    Sample s = generate_traces(truth, props, c.gen);
    auto provider = MockProvider::from_directory(c.run.fixture_dir);
    RunReport rep = janaka_run(c.run, s, c.explanation, *provider);
    if (!rep.candidates.empty()) {
      row.llm_formula = rep.candidates.front().formula;
      row.llm_fit = rep.candidates.front().fitness;
      row.llm_sat = rep.candidates.front().sat;
    }
    if (rep.formula) {
      row.repaired_formula = format_formula(*rep.formula);
      row.repaired_fit = rep.fitness;
      row.repaired_sat = rep.sat;
    }
    row.path = to_string(rep.path);
    row.runtime_s = since(t0);
    row.claims_ok = rep.formula.has_value() && (!c.expect_sat || row.repaired_sat) &&
                    (!c.expect_improvement || row.repaired_fit >= row.llm_fit);
    if (!out.empty()) {
      write_atomic(out / (row.name + ".traces"), serialize_sample(s) + "\n");
      write_atomic(out / (row.name + ".json"), rep.to_json().dump(2) + "\n");
    }
  } catch (const Error& e) {
    row.error = e.what();
    row.error_code = std::string(to_string(e.code()));
    row.runtime_s = since(t0);
  } catch (const std::exception& e) {
    row.error = e.what();
    row.error_code = "Internal";
    row.runtime_s = since(t0);
  }
  return row;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "-";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << v;
  return ss.str();
}

}  // namespace

std::string BenchReport::markdown() const {
  std::ostringstream o;
  o << "| Case | LLM | SAT | FIT | Repaired | SAT | FIT | Path | Runtime (s) | Claims |\n";
  o << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      o << "| " << r.name << " | error: " << r.error_code << " (" << r.error << ") | | | | | | | "
        << fmt(r.runtime_s) << " | no |\n";
      continue;
    }
    o << "| " << r.name << " | `" << r.llm_formula << "` | " << (r.llm_sat ? "yes" : "no") << " | "
      << fmt(r.llm_fit) << " | `" << r.repaired_formula << "` | " << (r.repaired_sat ? "yes" : "no")
      << " | " << fmt(r.repaired_fit) << " | " << r.path << " | " << fmt(r.runtime_s) << " | "
      << (r.claims_ok ? "yes" : "no") << " |\n";
  }
  return o.str();
}

json BenchReport::to_json(bool with_timings) const {
  json j = json::array();
  for (const auto& r : rows) {
    json row = {{"name", r.name}, {"llm_formula", r.llm_formula}, {"llm_sat", r.llm_sat},
                {"llm_fit", number(r.llm_fit)}, {"repaired_formula", r.repaired_formula},
                {"repaired_sat", r.repaired_sat}, {"repaired_fit", number(r.repaired_fit)},
                {"path", r.path}, {"claims_ok", r.claims_ok}};
    if (!r.error.empty()) {
      row["error"] = r.error;
      row["error_code"] = r.error_code;
    }
    if (with_timings) row["runtime_s"] = r.runtime_s;
    j.push_back(row);
  }
  return j;
}

BenchReport bench_run(const std::string& suite, const std::string& out, int threads) {
  std::error_code ec;
  if (!fs::is_directory(suite, ec)) throw Error(ErrorCode::Io, "suite directory not found: " + suite);
  std::vector<fs::path> cases;
  for (const auto& e : fs::directory_iterator(suite))
    if (e.is_directory() && fs::exists(e.path() / "case.json")) cases.push_back(e.path());
  std::sort(cases.begin(), cases.end());
  if (cases.empty()) throw Error(ErrorCode::EmptyInput, "suite has no cases: " + suite);
  if (!out.empty()) fs::create_directories(out);

  BenchReport rep;
  rep.rows.resize(cases.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= cases.size()) return;
        i = next++;
      }
      rep.rows[i] = run_case(cases[i], out);
    }
  };
  int n = std::max(1, std::min<int>(threads, static_cast<int>(cases.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!out.empty()) {
    write_atomic(fs::path(out) / "report.md", rep.markdown());
    write_atomic(fs::path(out) / "report.json", rep.to_json().dump(2) + "\n");
  }
  return rep;
}

}  // namespace janaka
