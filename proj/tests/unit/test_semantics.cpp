#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracle.hpp"
#include "janaka/error.hpp"
#include "janaka/qualitative.hpp"
#include "janaka/semantics.hpp"

using namespace janaka;

namespace {

SemanticsParams robust(double a = 0.9, double b = 0.9, double g = 0.1) {
  return {a, b, g, SemanticsKind::Robust};
}
SemanticsParams disc(double a = 0.9, double b = 0.9) { return {a, b, 0.0, SemanticsKind::Discounted}; }

const PropositionSet p1({"p"});
const PropositionSet pq({"p", "q"});

}  // namespace

TEST_CASE("robust examples") {
  auto v = robust_value(parse_formula("p", p1), make_trace(p1, {{"p"}}), p1, robust());
  CHECK(v.value == 1.0);
  CHECK(v.decisive);

  v = robust_value(parse_formula("G p", p1), make_trace(p1, {{"p"}, {"p"}}), p1, robust(1, 1));
  CHECK(v.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v.decisive);

  v = robust_value(parse_formula("X p", p1), make_trace(p1, {{"p"}}), p1, robust(0.9, 0.9, 0.1));
  CHECK(v.value == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_FALSE(v.decisive);

  Trace q7 = make_trace(pq, {{}, {}, {}, {}, {}, {}, {}, {"q"}, {}});
  for (double a : {0.5, 0.9}) {
    v = robust_value(parse_formula("F q", pq), q7, pq, robust(a, 1.0));
    CHECK(std::abs(v.value - std::pow(a, 7)) < 1e-12);
  }
}

TEST_CASE("robust rejects non-NNF input and empty traces") {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code([] { robust_value(parse_formula("!G p", p1), make_trace(p1, {{"p"}}), p1, robust()); }) ==
        ErrorCode::NotInNNF);
  CHECK(code([] { robust_value(parse_formula("p", p1), Trace{}, p1, robust()); }) == ErrorCode::EmptyTrace);
  CHECK(code([] { discounted_value(parse_formula("p", p1), Trace{}, p1, disc()); }) == ErrorCode::EmptyTrace);
  CHECK(code([] { SemanticsParams{0.0, 1.0, 0.0}.validate(); }) == ErrorCode::InvalidArgument);
  CHECK(code([] { SemanticsParams{0.5, 1.0, 1.0}.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("discounted examples") {
  CHECK(discounted_value(parse_formula("p", p1), make_trace(p1, {{"p"}}), p1, disc()).value == 1.0);
  CHECK(discounted_value(parse_formula("!p", p1), make_trace(p1, {{"p"}}), p1, disc()).value == 0.0);
  CHECK(discounted_value(parse_formula("F p", p1), make_trace(p1, {{}, {}, {"p"}}), p1, disc(0.5, 1)).value ==
        doctest::Approx(0.25).epsilon(1e-12));
  for (double a : {0.5, 0.9}) {
    for (int n = 1; n <= 3; ++n) {
      std::vector<std::vector<std::string>> states(n, std::vector<std::string>{});
      states.push_back({"p"});
      double fv = discounted_value(parse_formula("F p", p1), make_trace(p1, states), p1, disc(a, 1)).value;
      CHECK(std::abs(fv - std::pow(a, n)) < 1e-12);

      std::vector<std::vector<std::string>> g(n, std::vector<std::string>{"p"});
      g.push_back({});
      double gv = discounted_value(parse_formula("G p", p1), make_trace(p1, g), p1, disc(a, 1)).value;
      CHECK(std::abs(gv - (1 - std::pow(a, n))) < 1e-12);
    }
  }
}

TEST_CASE("sample fitness is the mean") {
  Sample s{p1, {make_trace(p1, {{"p"}}), make_trace(p1, {{}})}};
  CHECK(sample_fitness(parse_formula("p", p1), s, disc()) == doctest::Approx(0.5));
  CHECK(sample_total(parse_formula("p", p1), s, disc()) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sample_fitness(parse_formula("p", p1), Sample{p1, {}}, disc()), Error);
}

TEST_CASE("robust evaluator matches the oracle") {
  std::mt19937_64 rng(21);
  const PropositionSet pqr({"p", "q", "r"});
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int i = 0; i < 2000; ++i) {
    Formula f = oracle::random_formula(rng, pqr.names(), 4, true);
    Trace w = oracle::random_trace(rng, 3, 1, 10);
    double a = unit(rng), b = unit(rng), g = unit(rng) * 0.9;
    auto got = robust_value(f, w, pqr, robust(a, b, g));
    auto want = oracle::robust(f, w, pqr, 0, a, b, g);
    CHECK(got.value == doctest::Approx(want.v).epsilon(1e-9));
    CHECK(got.decisive == want.decisive);
  }
}

TEST_CASE("discounted evaluator matches the oracle") {
  std::mt19937_64 rng(22);
  const PropositionSet pqr({"p", "q", "r"});
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int i = 0; i < 2000; ++i) {
    Formula f = oracle::random_formula(rng, pqr.names(), 4, false);
    Trace w = oracle::random_trace(rng, 3, 1, 10);
    double a = unit(rng), b = unit(rng);
    double got = discounted_value(f, w, pqr, disc(a, b)).value;
    CHECK(got == doctest::Approx(oracle::discounted(f, w, pqr, 0, a, b)).epsilon(1e-9));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("discounted F dominates G") {
  std::mt19937_64 rng(23);
  const PropositionSet pq2({"p", "q"});
  for (int i = 0; i < 300; ++i) {
    Formula f = oracle::random_formula(rng, pq2.names(), 3, false);
    Trace w = oracle::random_trace(rng, 2, 1, 8);
    double fv = discounted_value(Formula::finally(f), w, pq2, disc()).value;
    double gv = discounted_value(Formula::globally(f), w, pq2, disc()).value;
    CHECK(fv >= gv - 1e-12);
  }
}

TEST_CASE("prepare_for and satisfies_all") {
  Formula f = parse_formula("!G p", p1);
  CHECK(prepare_for(f, SemanticsKind::Robust) == parse_formula("F !p", p1));
  CHECK(prepare_for(f, SemanticsKind::Discounted) == f);
  Sample s{p1, {make_trace(p1, {{"p"}, {}}), make_trace(p1, {{"p"}})}};
  auto r = satisfies_all(parse_formula("F !p", p1), s);
  CHECK_FALSE(r.all);
  CHECK(r.per_trace == std::vector<bool>{true, false});
}
