#include <doctest.h>

#include <random>
#include <set>

#include "../oracle.hpp"
#include "janaka/error.hpp"
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

const PropositionSet pq({"p", "q"});

}  // namespace

TEST_CASE("parse_traces reads states and drops trailing padding") {
  Sample s = parse_traces("p,!q;!p,q;1;1#", pq);
  REQUIRE(s.size() == 1);
  CHECK(s.traces[0] == make_trace(pq, {{"p"}, {"q"}}));

  PropositionSet pqr({"p", "q", "r"});
  Sample one = parse_traces("p,q,r;1#", pqr);
  REQUIRE(one.size() == 1);
  CHECK(one.traces[0] == make_trace(pqr, {{"p", "q", "r"}}));
}

TEST_CASE("parse_traces errors") {
  PropositionSet p({"p"});
  CHECK(code_of([&] { parse_traces("p;1;p#", p); }) == ErrorCode::MixedPadding);
  CHECK(code_of([&] { parse_traces("p,!q;p#", pq); }) == ErrorCode::PartialAssignment);
  CHECK(code_of([&] { parse_traces("p,!z#", pq); }) == ErrorCode::UnknownAtom);
  CHECK(code_of([&] { parse_traces("1;1#", p); }) == ErrorCode::EmptyTrace);
}

TEST_CASE("one trace per line or record") {
  Sample s = parse_traces("p,q;!p,q#\n!p,!q#p,q#\n", pq);
  CHECK(s.size() == 3);
}

TEST_CASE("infer_props uses the first state") {
  CHECK(infer_props("p,!q,r;1#").names() == std::vector<std::string>{"p", "q", "r"});
}

TEST_CASE("serialize_sample") {
  Sample s{pq, {make_trace(pq, {{"p"}, {"q"}})}};
  CHECK(serialize_sample(s, 4) == "p,!q;!p,q;1;1#");
  CHECK(serialize_sample(s) == "p,!q;!p,q#");
  CHECK(code_of([&] { serialize_sample(s, 1); }) == ErrorCode::PadTooShort);
  CHECK(code_of([&] { serialize_sample(Sample{pq, {}}); }) == ErrorCode::EmptySample);
}

TEST_CASE("generate_traces examples") {
  GenerateOptions o;
  o.count = 3;
  o.min_len = 3;
  o.max_len = 3;
  Sample g = generate_traces(parse_formula("G p", pq), pq, o);
  REQUIRE(g.size() == 3);
  for (const auto& w : g.traces) {
    CHECK(w.size() == 3);
    for (std::size_t t = 0; t < w.size(); ++t) CHECK(w.holds(t, 0));
  }

  o.count = 10;
  o.min_len = 2;
  o.max_len = 6;
  Sample f = generate_traces(parse_formula("F q", pq), pq, o);
  REQUIRE(f.size() == 10);
  for (const auto& w : f.traces) {
    bool any = false;
    for (std::size_t t = 0; t < w.size(); ++t) any = any || w.holds(t, 1);
    CHECK(any);
  }

  o.budget = 2000;
  CHECK(code_of([&] { generate_traces(parse_formula("p & !p", pq), pq, o); }) == ErrorCode::BudgetExhausted);
}

TEST_CASE("generated traces are distinct, sound and seeded") {
  PropositionSet pqrs({"p", "q", "r", "s"});
  Formula f = parse_formula("G(p -> X(q U (r | s)))", pqrs);
  GenerateOptions o;
  o.count = 20;
  o.seed = 42;
  Sample a = generate_traces(f, pqrs, o);
  Sample b = generate_traces(f, pqrs, o);
  CHECK(a == b);
  std::set<Trace> seen(a.traces.begin(), a.traces.end());
  CHECK(seen.size() == a.size());
  for (const auto& w : a.traces) {
    CHECK(w.size() >= 5);
    CHECK(w.size() <= 10);
    CHECK(oracle::holds(f, w, pqrs, 0));
  }
  o.seed = 43;
  CHECK_FALSE(generate_traces(f, pqrs, o) == a);
}

TEST_CASE("serialize/parse round trip") {
  std::mt19937_64 rng(9);
  PropositionSet pqr({"p", "q", "r"});
  for (int i = 0; i < 50; ++i) {
    Sample s{pqr, {}};
    for (int j = 0; j < 5; ++j) s.traces.push_back(oracle::random_trace(rng, 3, 1, 9));
    CHECK(parse_traces(serialize_sample(s), pqr) == s);
    CHECK(parse_traces(serialize_sample(s, 12), pqr) == s);
  }
}
