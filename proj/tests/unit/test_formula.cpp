#include <doctest.h>

#include <random>

#include "../oracle.hpp"
#include "janaka/error.hpp"
#include "janaka/formula.hpp"
#include "janaka/indexed_tree.hpp"
#include "janaka/qualitative.hpp"
#include "janaka/trace.hpp"

using namespace janaka;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

const PropositionSet pqrs({"p", "q", "r", "s"});

}  // namespace

TEST_CASE("parse builds the expected trees") {
  using F = Formula;
  CHECK(parse_formula("G((p) -> (X((q) U ((r) | (s)))))", pqrs) ==
        F::globally(F::implies(F::atom("p"), F::next(F::until(F::atom("q"), F::disj(F::atom("r"), F::atom("s")))))));
  CHECK(parse_formula("p", pqrs) == F::atom("p"));
  CHECK(parse_formula("F(p & (q | r))", pqrs) ==
        F::finally(F::conj(F::atom("p"), F::disj(F::atom("q"), F::atom("r")))));
}

TEST_CASE("precedence and associativity") {
  CHECK(format_formula(parse_formula("p | q & r", pqrs)) == "(p | (q & r))");
  CHECK(format_formula(parse_formula("p -> q -> r", pqrs)) == "(p -> (q -> r))");
  CHECK(format_formula(parse_formula("p U q U r", pqrs)) == "(p U (q U r))");
  CHECK(format_formula(parse_formula("p & q U r", pqrs)) == "(p & (q U r))");
  CHECK(format_formula(parse_formula("G p U q", pqrs)) == "(G(p) U q)");
}

TEST_CASE("parse errors") {
  CHECK(code_of([] { parse_formula("G(z)", pqrs); }) == ErrorCode::UnknownAtom);
  CHECK(code_of([] { parse_formula("", pqrs); }) == ErrorCode::EmptyInput);
  CHECK(code_of([] { parse_formula("(p & ", pqrs); }) == ErrorCode::SyntaxError);
  try {
    parse_formula("p & & q", pqrs);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
    REQUIRE(e.position().has_value());
    CHECK(*e.position() == 4);
  }
}

TEST_CASE("format_formula canonical text") {
  CHECK(format_formula(Formula::globally(Formula::atom("p"))) == "G(p)");
  CHECK(format_formula(Formula::until(Formula::atom("p"), Formula::disj(Formula::atom("r"), Formula::atom("s")))) ==
        "(p U (r | s))");
  auto row5 = parse_formula("G(p -> G(q U (r | s)))", pqrs);
  CHECK(format_formula(row5) == "G((p -> G((q U (r | s)))))");
}

TEST_CASE("format/parse round trip on random formulas") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Formula f = oracle::random_formula(rng, pqrs.names(), 5, false);
    CHECK(parse_formula(format_formula(f), pqrs) == f);
  }
}

TEST_CASE("to_nnf rewrites") {
  CHECK(format_formula(to_nnf(parse_formula("!(p | q)", pqrs))) == "(!p & !q)");
  CHECK(format_formula(to_nnf(parse_formula("!G(p)", pqrs))) == "F(!p)");
  CHECK(format_formula(to_nnf(parse_formula("!F(p)", pqrs))) == "G(!p)");
  CHECK(format_formula(to_nnf(parse_formula("!X(p)", pqrs))) == "X(!p)");
  CHECK(format_formula(to_nnf(parse_formula("!(p -> q)", pqrs))) == "(p & !q)");
  CHECK(format_formula(to_nnf(parse_formula("!!p", pqrs))) == "p");
  CHECK(code_of([] { to_nnf(parse_formula("!(p U q)", pqrs)); }) == ErrorCode::UnsupportedNegation);
}

TEST_CASE("to_nnf output is in NNF") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    Formula f = oracle::random_formula(rng, {"p", "q"}, 4, false);
    std::optional<Formula> g;
    try {
      g = to_nnf(f);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedNegation);
      continue;
    }
    CHECK(is_nnf(*g));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("qualitative evaluation examples") {
  PropositionSet p({"p"});
  CHECK(eval_qualitative(parse_formula("G p", p), make_trace(p, {{"p"}, {"p"}, {"p"}}), p));
  CHECK_FALSE(eval_qualitative(parse_formula("X p", p), make_trace(p, {{"p"}}), p));
  PropositionSet pqr({"p", "q", "r"});
  Trace w = make_trace(pqr, {{"p"}, {}, {}, {"p", "q"}});
  CHECK(eval_qualitative(parse_formula("F(p & (q | r))", pqr), w, pqr));
}

TEST_CASE("qualitative evaluation matches the oracle") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    Formula f = oracle::random_formula(rng, {"p", "q", "r"}, 4, false);
    Trace w = oracle::random_trace(rng, 3, 1, 8);
    PropositionSet pqr({"p", "q", "r"});
    auto all = eval_qualitative_all(f, w, pqr);
    for (std::size_t t = 0; t < w.size(); ++t) CHECK(all[t] == oracle::holds(f, w, pqr, t));
  }
}

TEST_CASE("tree_index layouts") {
  auto g = tree_index(parse_formula("G p", pqrs), 2);
  CHECK(g.at(1)->op == Op::Globally);
  CHECK(g.at(2)->atom == "p");
  CHECK_FALSE(g.at(3).has_value());

  auto o = tree_index(parse_formula("p | q", pqrs), 2);
  CHECK(o.at(1)->op == Op::Or);
  CHECK(o.at(2)->atom == "p");
  CHECK(o.at(3)->atom == "q");

  auto d = tree_index(parse_formula("G(p -> X q)", pqrs), 4);
  CHECK(d.valid());
  CHECK(d.at(1)->op == Op::Globally);
  CHECK(d.at(2)->op == Op::Implies);
  CHECK_FALSE(d.at(3).has_value());
  for (int i : {6, 7, 12, 13, 14, 15}) CHECK_FALSE(d.at(i).has_value());
  CHECK(d.decode() == parse_formula("G(p -> X q)", pqrs));

  CHECK(code_of([] { tree_index(parse_formula("G(F(p))", pqrs), 2); }) == ErrorCode::DepthExceeded);
}

TEST_CASE("tree_index round trip") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    Formula f = oracle::random_formula(rng, pqrs.names(), 5, true);
    auto t = tree_index(f, f.depth());
    CHECK(t.valid());
    CHECK(t.decode() == f);
  }
}
