#include <doctest.h>

#include <random>
#include <set>

#include "../oracle.hpp"
#include "janaka/error.hpp"
#include "janaka/template.hpp"

using namespace janaka;

namespace {

const PropositionSet pq({"p", "q"});
const PropositionSet pqrs({"p", "q", "r", "s"});

std::set<std::string> texts(const Template& t, const PropositionSet& props) {
  std::set<std::string> out;
  for (const auto& f : enumerate_fillings(t, props)) out.insert(format_formula(f.formula));
  return out;
}

}  // namespace

TEST_CASE("leaf hole under G") {
  Template t = parse_template("G(?1)", pq);
  CHECK(t.hole_count() == 1);
  CHECK(texts(t, pq) == std::set<std::string>{"G(p)", "G(!p)", "G(q)", "G(!q)"});
  CHECK(count_fillings(t, pq.size()) == 4);
}

TEST_CASE("binary label hole over two leaves") {
  Template t = parse_template("(p ?{&,|,->,U} q)", pq);
  CHECK(texts(t, pq) == std::set<std::string>{"(p & q)", "(p | q)", "(p -> q)", "(p U q)"});
}

TEST_CASE("template without holes has the source as only filling") {
  Formula f = parse_formula("G(p -> X q)", pq);
  auto fs = enumerate_fillings(template_from_formula(f), pq);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].formula == f);
}

TEST_CASE("template text round trip") {
  for (const char* s : {"G(?1)", "(p ?{&,|} q)", "?{G,F}((p -> X(q)))", "(?2 U (q | ?1))"}) {
    Template t = parse_template(s, pq);
    CHECK(format_template(parse_template(format_template(t), pq)) == format_template(t));
  }
}

TEST_CASE("library matches the oracle enumeration") {
  for (int k = 1; k <= 2; ++k) {
    auto lib = subtree_library(k, pq);
    auto want = oracle::all_formulas(k, pq.names());
    CHECK(lib.size() == want.size());
    CHECK(subtree_library_size(k, pq.size()) == static_cast<double>(lib.size()));
    std::set<std::string> a, b;
    for (const auto& f : lib) a.insert(format_formula(f));
    for (const auto& f : want) b.insert(format_formula(f));
    CHECK(a == b);
  }
}

TEST_CASE("GTemp wraps the source under a G/F hole") {
  Formula f = parse_formula("F(p -> X(q U (r | s)))", pqrs);
  TemplateOptions o;
  o.strategy = Strategy::GTemp;
  o.count = 4;
  auto ts = make_templates(f, o);
  REQUIRE_FALSE(ts.empty());
  for (const auto& t : ts) {
    const auto& root = t.nodes[t.root];
    CHECK(root.kind == TemplateNode::Kind::LabelHole);
    CHECK(root.ops == std::vector<Op>{Op::Globally, Op::Finally});
    CHECK(t.hole_count() >= 1);
  }
}

TEST_CASE("hole_prob 1 on a single leaf") {
  TemplateOptions o;
  o.d = 1;
  o.hole_prob = 1.0;
  o.count = 1;
  auto ts = make_templates(parse_formula("p", pq), o);
  REQUIRE(ts.size() == 1);
  const auto& root = ts[0].nodes[ts[0].root];
  CHECK(root.kind == TemplateNode::Kind::SubtreeHole);
  CHECK(root.max_depth == 1);
}

TEST_CASE("template generation is seeded") {
  Formula f = parse_formula("G(p -> X(q U (r | s)))", pqrs);
  for (Strategy st : {Strategy::Random, Strategy::WithGF, Strategy::GTemp}) {
    TemplateOptions o;
    o.strategy = st;
    o.seed = 5;
    auto a = make_templates(f, o), b = make_templates(f, o);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(format_template(a[i]) == format_template(b[i]));
  }
}

TEST_CASE("source deeper than the bound") {
  TemplateOptions o;
  o.max_source_depth = 2;
  CHECK_THROWS_AS(make_templates(parse_formula("G(F(X(p)))", pq), o), Error);
}

TEST_CASE("every filling of random templates is well formed") {
  Formula f = parse_formula("G(p -> X(q U (r | s)))", pqrs);
  const PropositionSet pr({"p", "q", "r", "s"});
  for (Strategy st : {Strategy::Random, Strategy::WithGF, Strategy::GTemp}) {
    TemplateOptions o;
    o.strategy = st;
    o.d = 1;
    o.seed = 3;
    for (const auto& t : make_templates(f, o)) {
      if (count_fillings(t, pr.size()) > 20000) continue;
      auto fs = enumerate_fillings(t, pr);
      CHECK(static_cast<double>(fs.size()) == count_fillings(t, pr.size()));
      for (const auto& fl : fs) {
        CHECK(fl.tree.valid());
        CHECK(fl.tree.decode() == fl.formula);
        CHECK(parse_formula(format_formula(fl.formula), pr) == fl.formula);
      }
    }
  }
}
