#include <doctest.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "janaka/error.hpp"
#include "janaka/llm.hpp"

using namespace janaka;

namespace {

const PropositionSet pqrs({"p", "q", "r", "s"});

Sample sample_of(int n) {
  Sample s{pqrs, {}};
  for (int i = 0; i < n; ++i) {
    Trace w;
    for (int j = 0; j <= i; ++j) w.states.push_back(static_cast<std::uint64_t>((i + j) % 16));
    s.traces.push_back(w);
  }
  return s;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

}  // namespace

std::string testing_join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += s + " ; ";
  return out;
}

TEST_CASE("extraction from prose, fences and unicode") {
  std::string text =
      "Here are some options:\n"
      "1. `G(p -> X(q U (r | s)))`\n"
      "2. F(p & q)\n"
      "```\nG(p → F(q ∨ r))\n```\n"
      "3. $\\Box (p \\rightarrow \\Diamond s)$\n"
      "4. G(p -> z)\n"
      "The first one is the best since it mentions p.\n"
      "5. `F(p & q)`\n";
  auto ex = extract_formulas(text, pqrs);
  std::vector<std::string> got;
  for (const auto& f : ex.valid) got.push_back(format_formula(f));
  INFO(::testing_join(got));
  CHECK(got == std::vector<std::string>{"G((p -> X((q U (r | s)))))", "F((p & q))", "G((p -> F((q | r))))",
                                        "G((p -> F(s)))"});
  CHECK(ex.rejected.size() == 1);
}

TEST_CASE("oneshot prompt") {
  Sample s = sample_of(4);
  auto b = build_prompt(s, "users stay logged in until they log out", PromptMode::OneShot, 5);
  REQUIRE(b.task.size() == 1);
  for (const char* r : {"1. ", "2. ", "3. ", "4. ", "5. "}) CHECK(b.system_rules.find(r) != std::string::npos);
  CHECK(b.task[0].find(serialize_sample(s)) != std::string::npos);
  CHECK(b.task[0].find("logged in") != std::string::npos);
  auto msgs = b.preamble();
  CHECK(msgs.front().role == "system");
  CHECK(msgs.back().role == "user");
  CHECK(msgs.back().content == b.task[0]);

  auto one = build_prompt(s, "x", PromptMode::OneShot, 1);
  bool exactly_one = false;
  for (const auto& m : one.preamble()) exactly_one = exactly_one || m.content.find("exactly one formula") != std::string::npos;
  CHECK(exactly_one);
}

TEST_CASE("multishot stages") {
  Sample s = sample_of(6);
  auto b = build_prompt(s, "x", PromptMode::MultiShot, 5);
  REQUIRE(b.task.size() == 3);
  auto records = [](const std::string& t) { return std::count(t.begin(), t.end(), '#'); };
  CHECK(records(b.task[0]) == 1);
  CHECK(records(b.task[1]) == 3);
  CHECK(records(b.task[2]) == 6);

  MockProvider m({"`G(p)`", "`F(q)`", "`G(p -> F q)`\n`F(r)`\n`G(s)`\n`F(p & q)`\n`G(r | s)`"});
  auto c = request_candidates(m, b, pqrs);
  CHECK(m.calls() == 3);
  CHECK(c.formulas.size() == 5);
  auto last = m.last_messages();
  CHECK(last.size() == b.preamble().size() + 4);
}

TEST_CASE("request_candidates contracts") {
  auto b = build_prompt(sample_of(3), "x", PromptMode::OneShot, 5);
  {
    MockProvider m({"`G(p)`\n`F(q)`\n`G(r)`\n`F(s)`\n`G(p -> F(s))`"});
    auto c = request_candidates(m, b, pqrs);
    CHECK(c.formulas.size() == 5);
    CHECK(m.calls() == 1);
  }
  {
    MockProvider m({"`G(p)`\n`F(q)`\n`G(r)`\n`F(s)`\n`G(p -> ))`", "`G(p -> F(s))`"});
    RequestOptions o;
    o.max_retries = 1;
    auto c = request_candidates(m, b, pqrs, o);
    CHECK(c.formulas.size() == 5);
    CHECK(m.calls() == 2);
  }
  {
    MockProvider m({"I could not think of anything useful here."});
    RequestOptions o;
    o.max_retries = 2;
    CHECK(code_of([&] { request_candidates(m, b, pqrs, o); }) == ErrorCode::NoValidFormula);
    CHECK(m.calls() == 3);
  }
}

TEST_CASE("top_k ordering") {
  PropositionSet p({"p", "q"});
  Sample s{p, {make_trace(p, {{"p"}, {"p"}}), make_trace(p, {{"p"}, {}})}};
  SemanticsParams d{0.9, 0.9, 0.0, SemanticsKind::Discounted};
  std::vector<Formula> c{parse_formula("G q", p), parse_formula("p", p), parse_formula("p & p", p)};
  auto t = top_k(c, s, d, 1);
  REQUIRE(t.size() == 1);
  CHECK(format_formula(t[0].formula) == "p");
  CHECK(top_k(c, s, d, 10).size() == 3);
  auto all = score_candidates(c, s, d);
  CHECK(all[0].fitness >= all[1].fitness);
  CHECK(all[1].fitness >= all[2].fitness);
}

TEST_CASE("http provider maps status codes") {
  httplib::Server srv;
  srv.Post("/ok", [](const httplib::Request& req, httplib::Response& res) {
    auto body = nlohmann::json::parse(req.body);
    std::string echo = body["messages"].back()["content"];
    res.set_content(nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", "`G(p)` " + echo}}}}}}}.dump(),
                    "application/json");
  });
  srv.Post("/denied", [](const httplib::Request&, httplib::Response& res) { res.status = 401; });
  srv.Post("/slow", [](const httplib::Request&, httplib::Response& res) {
    res.status = 429;
    res.set_header("Retry-After", "7");
  });
  srv.Post("/broken", [](const httplib::Request&, httplib::Response& res) { res.status = 500; });
  srv.Post("/garbage", [](const httplib::Request&, httplib::Response& res) { res.set_content("{}", "application/json"); });
  int port = srv.bind_to_any_port("127.0.0.1");
  std::thread th([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();

  auto cfg = [&](const std::string& path) {
    HttpConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port) + path;
    c.model = "test";
    c.timeout_s = 5;
    c.api_key_env = "JANAKA_UNIT_TEST_KEY";
    return c;
  };
  std::vector<ChatMessage> msgs{{"user", "hello"}};

  ::unsetenv("JANAKA_UNIT_TEST_KEY");
  CHECK(code_of([&] { HttpChatProvider(cfg("/ok")).complete(msgs); }) == ErrorCode::AuthMissing);
  ::setenv("JANAKA_UNIT_TEST_KEY", "secret", 1);
  CHECK(HttpChatProvider(cfg("/ok")).complete(msgs) == "`G(p)` hello");
  CHECK(code_of([&] { HttpChatProvider(cfg("/denied")).complete(msgs); }) == ErrorCode::AuthMissing);
  try {
    HttpChatProvider(cfg("/slow")).complete(msgs);
    FAIL("expected rate limit");
  } catch (const RateLimitedError& e) {
    CHECK(e.retry_after() == doctest::Approx(7.0));
  }
  CHECK(code_of([&] { HttpChatProvider(cfg("/broken")).complete(msgs); }) == ErrorCode::ProviderUnreachable);
  CHECK(code_of([&] { HttpChatProvider(cfg("/garbage")).complete(msgs); }) == ErrorCode::ProviderUnreachable);
  srv.stop();
  th.join();

  HttpConfig dead = cfg("/ok");
  dead.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/ok";
  CHECK(code_of([&] { HttpChatProvider(dead).complete(msgs); }) == ErrorCode::ProviderUnreachable);

  // a 429 whose wait exceeds the cap is surfaced, not slept on
  httplib::Server srv2;
  srv2.Post("/slow", [](const httplib::Request&, httplib::Response& res) {
    res.status = 429;
    res.set_header("Retry-After", "120");
  });
  int port2 = srv2.bind_to_any_port("127.0.0.1");
  std::thread th2([&] { srv2.listen_after_bind(); });
  srv2.wait_until_ready();
  HttpConfig c2 = cfg("/slow");
  c2.endpoint = "http://127.0.0.1:" + std::to_string(port2) + "/slow";
  HttpChatProvider prov(c2);
  auto b = build_prompt(sample_of(2), "x", PromptMode::OneShot, 1);
  CHECK(code_of([&] { request_candidates(prov, b, pqrs); }) == ErrorCode::RateLimited);
  srv2.stop();
  th2.join();
  ::unsetenv("JANAKA_UNIT_TEST_KEY");
}
