#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <thread>

#include "janaka/error.hpp"
#include "janaka/llm.hpp"

namespace janaka {

std::string to_string(PromptMode m) { return m == PromptMode::OneShot ? "oneshot" : "multishot"; }

PromptMode prompt_mode_from_string(const std::string& s) {
  if (s == "oneshot") return PromptMode::OneShot;
  if (s == "multishot") return PromptMode::MultiShot;
  throw Error(ErrorCode::InvalidArgument, "unknown prompt mode '" + s + "'");
}

namespace {

const char* kDefinitions =
    "Formula syntax:\n"
    "  atoms are the lowercase proposition names used in the traces\n"
    "  !f (not), (f & g) (and), (f | g) (or), (f -> g) (implies)\n"
    "  X(f) (next), F(f) (finally), G(f) (globally), (f U g) (until)\n"
    "\n"
    "Meaning on a finite trace, at position i:\n"
    "  X(f) holds when position i+1 exists and f holds there.\n"
    "  F(f) holds when f holds at some position j >= i.\n"
    "  G(f) holds when f holds at every position j >= i.\n"
    "  (f U g) holds when g holds at some j >= i and f holds at every k with i <= k < j.\n"
    "\n"
    "Trace format: ',' separates the literals of a state, ';' separates states and '#' ends a\n"
    "trace. A negated literal such as !p means p is false. A state written as 1 is padding\n"
    "after the end of a shorter trace.\n";

const char* kRules =
    "Rules:\n"
    "1. Every proposition that occurs in the traces must occur in each formula.\n"
    "2. Padding states (1) at the end of a trace mean no pattern continues there, so a\n"
    "   formula must not begin with G in that case.\n"
    "3. Descriptions that say always, at all times, whenever or every time call for G.\n"
    "4. Descriptions that say eventually, later, at some point or in the future call for F.\n"
    "5. Descriptions that say until, till or as long as call for U.\n";

std::string answer_format(int n) {
  if (n == 1) return "Answer with exactly one formula, on its own line, inside backticks.\n";
  return "Answer with exactly " + std::to_string(n) +
         " different formulas, one per line, each inside backticks.\n";
}

std::string task_text(const std::string& traces, const std::string& explanation, int n) {
  return "Traces:\n" + traces + "\n\nDescription: " + explanation + "\n\n" + answer_format(n);
}

std::vector<WorkedExample> default_examples() {
  return {{"a,!b;a,!b;!a,b#\na,!b;!a,b;!a,!b#\n!a,b;a,b#",
           "The alarm (a) keeps sounding until the operator acknowledges it (b).",
           "`(a U b)`\n`F(b)`\n`(a | b)`\n`((a U b) & F(b))`\n`(!b -> (a U b))`"}};
}

Sample subsample(const Sample& s, std::size_t k) {
  Sample out{s.props, {}};
  for (std::size_t i = 0; i < std::min(k, s.size()); ++i) out.traces.push_back(s.traces[i]);
  return out;
}

}  // namespace

std::vector<ChatMessage> PromptBundle::preamble() const {
  std::vector<ChatMessage> msgs;
  msgs.push_back({"system", system_rules});
  for (const auto& e : examples) {
    msgs.push_back({"user", task_text(e.traces, e.explanation, 5)});
    msgs.push_back({"assistant", e.answer});
  }
  if (!task.empty()) msgs.push_back({"user", task.front()});
  return msgs;
}

PromptBundle build_prompt(const Sample& s, const std::string& explanation, PromptMode mode, int n) {
  if (explanation.empty()) throw Error(ErrorCode::InvalidArgument, "explanation is empty");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n_candidates must be at least 1");
  if (s.traces.empty()) throw Error(ErrorCode::EmptySample, "sample has no traces");
  PromptBundle b;
  b.mode = mode;
  b.n_candidates = n;
  b.system_rules = std::string(
                       "You propose linear temporal logic formulas that hold on every given trace "
                       "and match the given description.\n\n") +
                   kDefinitions + "\n" + kRules;
  b.examples = default_examples();
  if (mode == PromptMode::OneShot) {
    b.task.push_back(task_text(serialize_sample(s), explanation, n));
  } else {
    std::size_t prev = 0;
    for (std::size_t k : {std::size_t{1}, std::size_t{3}, std::size_t{6}}) {
      std::size_t m = std::min(k, s.size());
      if (m == prev) continue;
      b.task.push_back(task_text(serialize_sample(subsample(s, m)), explanation, n));
      prev = m;
    }
    if (s.size() > prev) b.task.push_back(task_text(serialize_sample(s), explanation, n));
  }
  return b;
}

// ---------------------------------------------------------------------------

namespace {

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string normalize(std::string s) {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"\u2227", "&"},  {"\u2228", "|"},  {"\u00ac", "!"},  {"\u2192", "->"}, {"\u21d2", "->"},
      {"\u27f6", "->"}, {"\u27f9", "->"}, {"\u25a1", "G"},  {"\u25c7", "F"},  {"\u25cb", "X"},
      {"\\land", "&"},  {"\\wedge", "&"}, {"\\lor", "|"},   {"\\vee", "|"},   {"\\lnot", "!"},
      {"\\neg", "!"},   {"\\Rightarrow", "->"}, {"\\rightarrow", "->"},     {"\\implies", "->"},
      {"\\Box", "G "},  {"\\square", "G "}, {"\\Diamond", "F "}, {"\\diamond", "F "},
      {"\\lozenge", "F "}, {"\\bigcirc", "X "}, {"\\mathcal{U}", " U "}, {"\\mathbf{U}", " U "},
      {"\\&", "&"},     {"&&", "&"},      {"||", "|"},      {"=>", "->"},     {"~", "!"},
  };
  for (const auto& [from, to] : table) replace_all(s, from, to);
  // drop remaining TeX commands (\texttt, \left, ...) and grouping braces
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
      --i;
      continue;
    }
    if (s[i] == '{' || s[i] == '}' || s[i] == '$' || s[i] == '`') {
      out += ' ';
      continue;
    }
    out += s[i];
  }
  return out;
}

bool formula_char(char c) {
  return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '_' || c == ' ' || c == '\t' || c == 'G' || c == 'F' || c == 'X' || c == 'U' ||
         c == '!' || c == '&' || c == '|' || c == '(' || c == ')' || c == '-' || c == '>';
}

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool balanced(std::string_view s) {
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) return false;
  }
  return depth == 0;
}

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r.,;:");
  return b == std::string::npos || e < b ? std::string() : s.substr(b, e - b + 1);
}

std::string strip_list_marker(std::string s) {
  s = trim(s);
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) return trim(s.substr(i + 1));
  if (!s.empty() && (s[0] == '-' || s[0] == '*') && s.size() > 1 && s[1] == ' ') return trim(s.substr(1));
  return s;
}

}  // namespace

Extraction extract_formulas(const std::string& text, const PropositionSet& props) {
  Extraction ex;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = normalize(raw);
    bool found = false;
    std::size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      bool can_start = (c == '!' || c == '(' || c == 'G' || c == 'F' || c == 'X' ||
                        std::islower(static_cast<unsigned char>(c))) &&
                       (i == 0 || !word_char(line[i - 1]) || c == '(' || c == '!');
      if (!can_start) {
        ++i;
        continue;
      }
      std::size_t run = i;
      while (run < line.size() && formula_char(line[run])) ++run;
      std::size_t best_end = 0;
      std::optional<Formula> best;
      for (std::size_t end = run; end > i; --end) {
        char last = line[end - 1];
        if (!(last == ')' || word_char(last))) continue;
        if (end < line.size() && word_char(line[end]) && word_char(last)) continue;
        std::string_view sub(line.data() + i, end - i);
        if (!balanced(sub)) continue;
        try {
          Formula f = parse_formula(sub, props);
          if (f.is_literal()) continue;
          best = f;
          best_end = end;
          break;
        } catch (const Error&) {
        }
      }
      if (best) {
        found = true;
        std::string key = format_formula(*best);
        if (seen.insert(key).second) ex.valid.push_back(*best);
        i = best_end;
      } else {
        ++i;
      }
    }
    if (found) continue;
    std::string stripped = strip_list_marker(line);
    if (stripped.empty()) continue;
    bool formula_like = std::all_of(stripped.begin(), stripped.end(), formula_char) &&
                        stripped.find_first_of("()&|!") != std::string::npos;
    if (formula_like) ex.rejected.push_back(stripped);
  }
  return ex;
}

CandidateSet request_candidates(Provider& provider, const PromptBundle& bundle,
                                const PropositionSet& props, const RequestOptions& opt) {
  if (bundle.task.empty()) throw Error(ErrorCode::InvalidArgument, "prompt has no task");
  const auto start = std::chrono::steady_clock::now();
  CandidateSet out;
  out.provider_id = provider.id();

  auto call = [&](const std::vector<ChatMessage>& msgs, int& attempts_left) -> std::string {
    while (true) {
      try {
        ++out.calls;
        return provider.complete(msgs);
      } catch (const RateLimitedError& e) {
        if (attempts_left <= 0 || e.retry_after() > opt.max_rate_limit_wait_s) throw;
        --attempts_left;
        std::this_thread::sleep_for(std::chrono::duration<double>(e.retry_after()));
      }
    }
  };

  int attempts_left = opt.max_retries;
  auto conv = bundle.preamble();
  // staged protocol: every stage but the last only extends the conversation
  for (std::size_t st = 1; st < bundle.task.size(); ++st) {
    conv.push_back({"assistant", call(conv, attempts_left)});
    conv.push_back({"user", bundle.task[st]});
  }

  std::set<std::string> seen;
  std::string responses;
  while (true) {
    std::string resp = call(conv, attempts_left);
    if (!responses.empty()) responses += "\n";
    responses += resp;
    Extraction ex = extract_formulas(resp, props);
    for (const auto& f : ex.valid) {
      if (static_cast<int>(out.formulas.size()) >= bundle.n_candidates) break;
      if (seen.insert(format_formula(f)).second) out.formulas.push_back(f);
    }
    if (static_cast<int>(out.formulas.size()) >= bundle.n_candidates || attempts_left <= 0) break;
    --attempts_left;
    conv.push_back({"assistant", resp});
    conv.push_back({"user", "Some formulas were missing or invalid. Only use the atoms " +
                                [&] {
                                  std::string a;
                                  for (const auto& n : props.names()) a += (a.empty() ? "" : ", ") + n;
                                  return a;
                                }() +
                                ". " + answer_format(bundle.n_candidates)});
  }
  out.raw_response = responses;
  out.latency = std::chrono::steady_clock::now() - start;
  if (out.formulas.empty())
    throw Error(ErrorCode::NoValidFormula, "no valid formula after " + std::to_string(out.calls) + " calls");
  return out;
}

std::vector<ScoredCandidate> score_candidates(const std::vector<Formula>& cands, const Sample& s,
                                              const SemanticsParams& p) {
  std::vector<ScoredCandidate> out;
  for (const auto& f : cands) {
    ScoredCandidate c{f};
    try {
      c.fitness = sample_fitness(prepare_for(f, p.kind), s, p);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsupportedNegation) throw;
    }
    c.sat = satisfies_all(f, s).all;
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    if (a.formula.size() != b.formula.size()) return a.formula.size() < b.formula.size();
    return format_formula(a.formula) < format_formula(b.formula);
  });
  return out;
}

std::vector<ScoredCandidate> top_k(const std::vector<Formula>& cands, const Sample& s,
                                   const SemanticsParams& p, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  auto all = score_candidates(cands, s, p);
  if (static_cast<int>(all.size()) > k) all.erase(all.begin() + k, all.end());
  return all;
}

}  // namespace janaka
