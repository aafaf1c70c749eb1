#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "janaka/error.hpp"
#include "janaka/milp.hpp"
#include "janaka/pipeline.hpp"

using namespace janaka;

namespace {

struct ParamFlags {
  std::string semantics = "robust";
  SemanticsParams p;

  void add(CLI::App* app) {
    app->add_option("--semantics", semantics, "robust or discounted")->capture_default_str();
    app->add_option("--alpha", p.alpha, "temporal discount")->capture_default_str();
    app->add_option("--beta", p.beta, "nesting discount")->capture_default_str();
    app->add_option("--gamma", p.gamma, "inconclusive reward (robust)")->capture_default_str();
  }
  SemanticsParams get() const {
    SemanticsParams q = p;
    q.kind = semantics_from_string(semantics);
    q.validate();
    return q;
  }
};

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
}

std::vector<std::string> split_props(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

nlohmann::json outcome_json(const RepairOutcome& o, const std::vector<Template>& ts) {
  nlohmann::json j;
  j["formula"] = o.best ? nlohmann::json(format_formula(*o.best)) : nlohmann::json(nullptr);
  j["template"] = o.template_index >= 0 ? format_template(ts[o.template_index]) : "";
  j["fitness"] = o.best ? nlohmann::json(o.fitness) : nlohmann::json(nullptr);
  j["total"] = o.best ? nlohmann::json(o.total) : nlohmann::json(nullptr);
  j["per_trace"] = nlohmann::json::array();
  for (const auto& t : o.per_trace) j["per_trace"].push_back({{"score", t.score}, {"sat", t.sat}});
  j["all_sat"] = o.all_sat;
  j["explored"] = o.explored;
  j["nodes"] = o.nodes;
  j["pruned"] = o.pruned;
  j["threshold_met"] = o.threshold_met;
  j["budget_expired"] = o.budget_expired;
  j["elapsed"] = o.elapsed_s;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative LTL specification mining and repair"};
  app.set_config("--config", "", "key = value settings file");
  app.require_subcommand(1);

  // mine
  RunConfig rc;
  ParamFlags mine_params;
  std::string mine_strategy = "auto", mine_mode = "oneshot";
  auto* mine = app.add_subcommand("mine", "LLM candidates, fitness gate, templates and repair");
  mine->add_option("--traces", rc.trace_path, "trace file")->required()->check(CLI::ExistingFile);
  mine->add_option("--explanation", rc.explanation_path, "explanation text file")
      ->required()
      ->check(CLI::ExistingFile);
  mine_params.add(mine);
  mine->add_option("--kappa", rc.kappa, "fitness threshold on the sample mean")->capture_default_str();
  mine->add_option("--d", rc.d, "hole depth bound")->capture_default_str();
  mine->add_option("--k", rc.k, "candidates forwarded to template generation")->capture_default_str();
  mine->add_option("--strategy", mine_strategy, "auto, random, withgf or gtemp")->capture_default_str();
  mine->add_option("--hole-prob", rc.hole_prob, "per-node hole probability")->capture_default_str();
  mine->add_option("--templates", rc.templates_per_formula, "templates per candidate")->capture_default_str();
  mine->add_option("--provider", rc.provider, "mock or http")->capture_default_str();
  mine->add_option("--fixtures", rc.fixture_dir, "mock response directory");
  mine->add_option("--endpoint", rc.http.endpoint, "chat-completions URL");
  mine->add_option("--model", rc.http.model, "model name");
  mine->add_option("--temperature", rc.http.temperature, "sampling temperature")->capture_default_str();
  mine->add_option("--http-timeout", rc.http.timeout_s, "request timeout in seconds")->capture_default_str();
  mine->add_option("--seed", rc.seed, "template seed")->capture_default_str();
  mine->add_option("--time-limit", rc.budget.time_limit_s, "repair time limit in seconds")->capture_default_str();
  mine->add_option("--node-limit", rc.budget.node_limit, "repair node limit, 0 for none")->capture_default_str();
  mine->add_option("--threads", rc.budget.threads, "repair worker threads")->capture_default_str();
  mine->add_option("--output", rc.output, "report path (stdout when empty)");
  mine->add_option("--n-candidates", rc.n_candidates, "formulas requested")->capture_default_str();
  mine->add_option("--mode", mine_mode, "oneshot or multishot")->capture_default_str();
  mine->add_option("--max-retries", rc.max_retries, "re-requests on invalid output")->capture_default_str();
  mine->add_option("--notes", rc.notes, "free-text notes copied into the report");
  bool mine_allow_unsat = false;
  mine->add_flag("--allow-unsat", mine_allow_unsat, "let repair return formulas some trace violates");

  // repair
  std::vector<std::string> rep_templates;
  std::string rep_formula, rep_traces, rep_strategy = "random";
  double rep_kappa = 0.5, rep_hole_prob = 0.2;
  int rep_d = 2, rep_count = 4;
  std::uint64_t rep_seed = 1;
  SearchBudget rep_budget;
  ParamFlags rep_params;
  bool rep_no_filter = false, rep_sat = false;
  auto* rep = app.add_subcommand("repair", "fill template holes to maximize fitness");
  rep->add_option("--traces", rep_traces, "trace file")->required()->check(CLI::ExistingFile);
  rep->add_option("--template", rep_templates, "template text (repeatable)");
  rep->add_option("--formula", rep_formula, "derive templates from this formula");
  rep->add_option("--strategy", rep_strategy, "random, withgf or gtemp")->capture_default_str();
  rep->add_option("--d", rep_d, "hole depth bound")->capture_default_str();
  rep->add_option("--hole-prob", rep_hole_prob, "per-node hole probability")->capture_default_str();
  rep->add_option("--templates", rep_count, "templates to derive")->capture_default_str();
  rep->add_option("--seed", rep_seed, "template seed")->capture_default_str();
  rep->add_option("--kappa", rep_kappa, "fitness threshold")->capture_default_str();
  rep->add_option("--time-limit", rep_budget.time_limit_s, "seconds")->capture_default_str();
  rep->add_option("--node-limit", rep_budget.node_limit, "0 for none")->capture_default_str();
  rep->add_option("--threads", rep_budget.threads, "worker threads")->capture_default_str();
  rep->add_flag("--no-filter", rep_no_filter, "keep trivial formulas");
  rep->add_flag("--require-sat", rep_sat, "only accept formulas every trace satisfies");
  rep_params.add(rep);

  // eval
  std::string ev_formula, ev_traces;
  bool ev_both = false, ev_json = false;
  ParamFlags ev_params;
  auto* ev = app.add_subcommand("eval", "score a formula on a trace file");
  ev->add_option("--formula", ev_formula, "formula text")->required();
  ev->add_option("--traces", ev_traces, "trace file")->required()->check(CLI::ExistingFile);
  ev->add_flag("--both", ev_both, "report robust and discounted scores");
  ev->add_flag("--json", ev_json, "machine-readable output");
  ev_params.add(ev);

  // gen-traces
  std::string gt_formula, gt_props, gt_output;
  GenerateOptions gt_opt;
  std::size_t gt_pad = 0;
  auto* gt = app.add_subcommand("gen-traces", "sample traces satisfying a formula");
  gt->add_option("--formula", gt_formula, "formula text")->required();
  gt->add_option("--props", gt_props, "comma-separated propositions (default: formula atoms)");
  gt->add_option("--count", gt_opt.count, "traces")->capture_default_str();
  gt->add_option("--min-len", gt_opt.min_len, "shortest trace")->capture_default_str();
  gt->add_option("--max-len", gt_opt.max_len, "longest trace")->capture_default_str();
  gt->add_option("--seed", gt_opt.seed, "RNG seed")->capture_default_str();
  gt->add_option("--budget", gt_opt.budget, "maximum draws")->capture_default_str();
  gt->add_option("--pad", gt_pad, "pad every trace with 1 states to this length");
  gt->add_option("--output", gt_output, "output file (stdout when empty)");

  // export-milp
  std::string mx_template, mx_traces, mx_output;
  int mx_d = 0;
  ParamFlags mx_params;
  mx_params.semantics = "discounted";
  auto* mx = app.add_subcommand("export-milp", "write the hole-filling problem as an LP file");
  mx->add_option("--template", mx_template, "template text")->required();
  mx->add_option("--traces", mx_traces, "trace file")->required()->check(CLI::ExistingFile);
  mx->add_option("--d", mx_d, "indexed tree depth (at least the template depth)");
  mx->add_option("--output", mx_output, "LP file (stdout when empty)");
  mx_params.add(mx);

  // bench
  std::string b_suite, b_out;
  int b_threads = 1;
  auto* bench = app.add_subcommand("bench", "run a benchmark suite with mock providers");
  bench->add_option("--suite", b_suite, "suite directory")->required();
  bench->add_option("--out", b_out, "report directory");
  bench->add_option("--threads", b_threads, "cases run in parallel")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mine) {
      rc.params = mine_params.get();
      if (mine_strategy != "auto") rc.strategy = strategy_from_string(mine_strategy);
      rc.mode = prompt_mode_from_string(mine_mode);
      rc.require_sat = !mine_allow_unsat;
      RunReport r = janaka_run(rc);
      if (rc.output.empty()) std::cout << r.to_json().dump(2) << "\n";
      std::cerr << to_string(r.path) << ": " << (r.formula ? format_formula(*r.formula) : "-") << "\n";
      return r.path == RunPath::Failed ? 2 : 0;
    }
    if (*rep) {
      auto p = rep_params.get();
      Sample s = read_trace_file(rep_traces);
      std::vector<Template> ts;
      for (const auto& t : rep_templates) ts.push_back(parse_template(t, s.props));
      if (!rep_formula.empty()) {
        TemplateOptions o;
        o.d = rep_d;
        o.strategy = strategy_from_string(rep_strategy);
        o.hole_prob = rep_hole_prob;
        o.seed = rep_seed;
        o.count = rep_count;
        auto more = make_templates(prepare_for(parse_formula(rep_formula, s.props), p.kind), o);
        ts.insert(ts.end(), more.begin(), more.end());
      }
      RepairOptions ro;
      ro.filter_trivial = !rep_no_filter;
      ro.require_sat = rep_sat;
      auto o = repair(s, ts, p, rep_kappa, rep_budget, ro);
      std::cout << outcome_json(o, ts).dump(2) << "\n";
      return o.threshold_met ? 0 : 2;
    }
    if (*ev) {
      Sample s = read_trace_file(ev_traces);
      auto results = eval_formula(ev_formula, s, ev_params.get(), ev_both);
      if (ev_json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : results) {
          nlohmann::json rows = nlohmann::json::array();
          for (const auto& row : r.rows)
            rows.push_back({{"score", row.score}, {"decisive", row.decisive}, {"sat", row.sat}});
          j.push_back({{"formula", r.formula}, {"semantics", to_string(r.kind)}, {"fitness", r.fitness},
                       {"total", r.total}, {"per_trace", rows}});
        }
        std::cout << j.dump(2) << "\n";
      } else {
        for (const auto& r : results) {
          std::cout << to_string(r.kind) << " " << r.formula << "\n";
          for (std::size_t i = 0; i < r.rows.size(); ++i)
            std::cout << "  trace " << i << "  score " << std::setprecision(12) << r.rows[i].score
                      << "  sat " << (r.rows[i].sat ? "yes" : "no")
                      << (r.rows[i].decisive ? "" : "  (inconclusive)") << "\n";
          std::cout << "  fitness " << r.fitness << "  total " << r.total << "\n";
        }
      }
      return 0;
    }
    if (*gt) {
      Formula f = parse_formula_unchecked(gt_formula);
      PropositionSet props(gt_props.empty() ? atoms_of(f) : split_props(gt_props));
      f = parse_formula(gt_formula, props);
      Sample s = generate_traces(f, props, gt_opt);
      std::optional<std::size_t> pad;
      if (gt_pad) pad = gt_pad;
      write_or_print(gt_output, serialize_sample(s, pad) + "\n");
      return 0;
    }
    if (*mx) {
      Sample s = read_trace_file(mx_traces);
      Template t = parse_template(mx_template, s.props);
      auto e = export_milp(t, s, mx_params.get(), std::max(mx_d, t.depth()));
      write_or_print(mx_output, e.lp);
      std::cerr << "binaries " << e.stats.label_binaries + e.stats.aux_binaries << ", rows " << e.stats.rows
                << ", quadratic rows " << e.stats.quadratic_rows << "\n";
      return 0;
    }
    if (*bench) {
      auto r = bench_run(b_suite, b_out, b_threads);
      std::cout << r.markdown();
      bool ok = true;
      for (const auto& row : r.rows) ok = ok && row.claims_ok;
      return ok ? 0 : 2;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what();
    if (e.position()) std::cerr << " at offset " << *e.position();
    std::cerr << "\n";
    return exit_code_for(e.code());
  }
  return 0;
}
