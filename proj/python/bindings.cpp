#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "janaka/error.hpp"
#include "janaka/milp.hpp"
#include "janaka/pipeline.hpp"

namespace py = pybind11;
using namespace janaka;

namespace {

SemanticsParams make_params(const std::string& kind, double alpha, double beta, double gamma) {
  SemanticsParams p;
  p.kind = semantics_from_string(kind);
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_janaka, m) {
  m.doc() = "Quantitative LTL mining and repair";

  static py::exception<Error> janaka_error(m, "JanakaError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object code = py::str(std::string(to_string(e.code())));
      PyErr_SetObject(janaka_error.ptr(), py::make_tuple(code, e.what()).ptr());
    }
  });

  py::class_<PropositionSet>(m, "PropositionSet")
      .def(py::init<std::vector<std::string>>())
      .def_property_readonly("names", &PropositionSet::names)
      .def("__len__", &PropositionSet::size);

  py::class_<Formula>(m, "Formula")
      .def("__str__", [](const Formula& f) { return format_formula(f); })
      .def("__repr__", [](const Formula& f) { return "Formula('" + format_formula(f) + "')"; })
      .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
      .def_property_readonly("size", &Formula::size)
      .def_property_readonly("depth", &Formula::depth);

  m.def("parse_formula", [](const std::string& text, const std::vector<std::string>& props) {
    return props.empty() ? parse_formula_unchecked(text) : parse_formula(text, PropositionSet(props));
  }, py::arg("text"), py::arg("props") = std::vector<std::string>{});
  m.def("to_nnf", &to_nnf);

  py::class_<Sample>(m, "Sample")
      .def_property_readonly("props", [](const Sample& s) { return s.props.names(); })
      .def("__len__", &Sample::size)
      .def("serialize", [](const Sample& s) { return serialize_sample(s); });

  m.def("parse_traces", [](const std::string& text, const std::vector<std::string>& props) {
    return parse_traces(text, props.empty() ? infer_props(text) : PropositionSet(props));
  }, py::arg("text"), py::arg("props") = std::vector<std::string>{});

  m.def("generate_traces", [](const std::string& formula, const std::vector<std::string>& props, int count,
                              int min_len, int max_len, std::uint64_t seed) {
    PropositionSet ps(props);
    GenerateOptions o;
    o.count = count;
    o.min_len = min_len;
    o.max_len = max_len;
    o.seed = seed;
    return generate_traces(parse_formula(formula, ps), ps, o);
  }, py::arg("formula"), py::arg("props"), py::arg("count") = 10, py::arg("min_len") = 5,
        py::arg("max_len") = 10, py::arg("seed") = 1);

  m.def("trace_values", [](const std::string& formula, const Sample& s, const std::string& kind, double alpha,
                           double beta, double gamma) {
    auto p = make_params(kind, alpha, beta, gamma);
    return trace_values(prepare_for(parse_formula(formula, s.props), p.kind), s, p);
  }, py::arg("formula"), py::arg("sample"), py::arg("semantics") = "robust", py::arg("alpha") = 0.9,
        py::arg("beta") = 0.9, py::arg("gamma") = 0.1);

  m.def("fitness", [](const std::string& formula, const Sample& s, const std::string& kind, double alpha,
                      double beta, double gamma) {
    auto p = make_params(kind, alpha, beta, gamma);
    return sample_fitness(prepare_for(parse_formula(formula, s.props), p.kind), s, p);
  }, py::arg("formula"), py::arg("sample"), py::arg("semantics") = "robust", py::arg("alpha") = 0.9,
        py::arg("beta") = 0.9, py::arg("gamma") = 0.1);

  m.def("satisfies_all", [](const std::string& formula, const Sample& s) {
    return satisfies_all(parse_formula(formula, s.props), s).all;
  });

  m.def("make_templates", [](const std::string& formula, const std::vector<std::string>& props, int d,
                             const std::string& strategy, double hole_prob, std::uint64_t seed, int count) {
    TemplateOptions o;
    o.d = d;
    o.strategy = strategy_from_string(strategy);
    o.hole_prob = hole_prob;
    o.seed = seed;
    o.count = count;
    std::vector<std::string> out;
    for (const auto& t : make_templates(parse_formula(formula, PropositionSet(props)), o))
      out.push_back(format_template(t));
    return out;
  }, py::arg("formula"), py::arg("props"), py::arg("d") = 2, py::arg("strategy") = "random",
        py::arg("hole_prob") = 0.2, py::arg("seed") = 1, py::arg("count") = 4);

  m.def("repair", [](const std::vector<std::string>& templates, const Sample& s, const std::string& kind,
                     double alpha, double beta, double gamma, double kappa, double time_limit, bool filter,
                     bool require_sat) {
    auto p = make_params(kind, alpha, beta, gamma);
    std::vector<Template> ts;
    for (const auto& t : templates) ts.push_back(parse_template(t, s.props));
    SearchBudget b;
    b.time_limit_s = time_limit;
    RepairOptions ro;
    ro.filter_trivial = filter;
    ro.require_sat = require_sat;
    RepairOutcome o;
    {
      py::gil_scoped_release release;
      o = repair(s, ts, p, kappa, b, ro);
    }
    py::dict d;
    d["formula"] = o.best ? py::object(py::str(format_formula(*o.best))) : py::object(py::none());
    d["fitness"] = o.fitness;
    d["total"] = o.total;
    d["all_sat"] = o.all_sat;
    d["explored"] = o.explored;
    d["threshold_met"] = o.threshold_met;
    d["budget_expired"] = o.budget_expired;
    return d;
  }, py::arg("templates"), py::arg("sample"), py::arg("semantics") = "robust", py::arg("alpha") = 0.9,
        py::arg("beta") = 0.9, py::arg("gamma") = 0.1, py::arg("kappa") = 0.0, py::arg("time_limit") = 60.0,
        py::arg("filter_trivial") = true, py::arg("require_sat") = false);

  m.def("export_milp", [](const std::string& tmpl, const Sample& s, const std::string& kind, double alpha,
                          double beta, double gamma, int d) {
    auto p = make_params(kind, alpha, beta, gamma);
    Template t = parse_template(tmpl, s.props);
    return export_milp(t, s, p, std::max(d, t.depth())).lp;
  }, py::arg("template"), py::arg("sample"), py::arg("semantics") = "discounted", py::arg("alpha") = 0.9,
        py::arg("beta") = 0.9, py::arg("gamma") = 0.1, py::arg("d") = 0);

  m.def("solve_lp", [](const std::string& lp) {
    auto r = solve_lp_enumerate(parse_lp(lp));
    py::dict d;
    d["feasible"] = r.feasible;
    d["objective"] = r.objective;
    return d;
  });

  m.def("extract_formulas", [](const std::string& text, const std::vector<std::string>& props) {
    std::vector<std::string> out;
    for (const auto& f : extract_formulas(text, PropositionSet(props)).valid) out.push_back(format_formula(f));
    return out;
  });

  m.def("mine", [](const std::string& traces, const std::string& explanation, const std::string& fixtures,
                   const std::string& kind, double kappa, const std::string& strategy, double time_limit,
                   std::uint64_t seed) {
    RunConfig cfg;
    cfg.trace_path = traces;
    cfg.explanation_path = explanation;
    cfg.fixture_dir = fixtures;
    cfg.params.kind = semantics_from_string(kind);
    cfg.kappa = kappa;
    if (strategy != "auto") cfg.strategy = strategy_from_string(strategy);
    cfg.budget.time_limit_s = time_limit;
    cfg.seed = seed;
    RunReport r;
    {
      py::gil_scoped_release release;
      r = janaka_run(cfg);
    }
    return r.to_json(false).dump();
  }, py::arg("traces"), py::arg("explanation"), py::arg("fixtures"), py::arg("semantics") = "robust",
        py::arg("kappa") = 0.5, py::arg("strategy") = "auto", py::arg("time_limit") = 60.0, py::arg("seed") = 1);
}
