#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "janaka/formula.hpp"
#include "janaka/semantics.hpp"
#include "janaka/trace.hpp"

namespace janaka {

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// Chat-completion interface: messages in, text out.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
  virtual std::string id() const = 0;
};

/// Replays canned responses round-robin. Thread-safe.
class MockProvider : public Provider {
 public:
  explicit MockProvider(std::vector<std::string> responses, std::string id = "mock");
  /// One response per regular file, in file-name order.
  static std::unique_ptr<MockProvider> from_directory(const std::string& dir);

  std::string complete(const std::vector<ChatMessage>& messages) override;
  std::string id() const override { return id_; }
  std::size_t calls() const { return calls_.load(); }
  /// Messages of the most recent call.
  std::vector<ChatMessage> last_messages() const;

 private:
  std::vector<std::string> responses_;
  std::string id_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mu_;
  std::vector<ChatMessage> last_;
};

struct HttpConfig {
  /// Full URL of the chat-completions endpoint, e.g. https://host/v1/chat/completions.
  std::string endpoint;
  std::string model;
  double temperature = 0.0;
  double timeout_s = 60.0;
  std::string api_key_env = "JANAKA_API_KEY";
};

/// Speaks the common chat-completions JSON protocol. The API key is read
/// from the environment at call time.
class HttpChatProvider : public Provider {
 public:
  explicit HttpChatProvider(HttpConfig cfg);
  std::string complete(const std::vector<ChatMessage>& messages) override;
  std::string id() const override;

 private:
  HttpConfig cfg_;
};

enum class PromptMode { OneShot, MultiShot };
std::string to_string(PromptMode m);
PromptMode prompt_mode_from_string(const std::string& s);

struct WorkedExample {
  std::string traces;
  std::string explanation;
  std::string answer;
};

struct PromptBundle {
  std::string system_rules;
  std::vector<WorkedExample> examples;
  /// Serialized sample and explanation; in MultiShot mode one entry per stage.
  std::vector<std::string> task;
  PromptMode mode = PromptMode::OneShot;
  int n_candidates = 5;

  /// Conversation up to and including the first task message.
  std::vector<ChatMessage> preamble() const;
};

PromptBundle build_prompt(const Sample& s, const std::string& explanation,
                          PromptMode mode = PromptMode::OneShot, int n = 5);

struct CandidateSet {
  std::vector<Formula> formulas;
  std::string raw_response;
  std::string provider_id;
  std::chrono::duration<double> latency{0};
  std::size_t calls = 0;
};

struct Extraction {
  std::vector<Formula> valid;
  /// Formula-looking lines that failed to parse or used unknown atoms.
  std::vector<std::string> rejected;
};

/// Scans free text for formulas over `props`. Unicode and TeX operator
/// spellings are normalized first; duplicates are dropped.
Extraction extract_formulas(const std::string& text, const PropositionSet& props);

struct RequestOptions {
  int max_retries = 2;
  /// Longest server-requested wait honoured before giving up on a 429.
  double max_rate_limit_wait_s = 30.0;
};

/// Calls the provider until n_candidates distinct valid formulas are
/// collected or retries run out. Throws NoValidFormula when none were found.
CandidateSet request_candidates(Provider& provider, const PromptBundle& bundle,
                                const PropositionSet& props, const RequestOptions& opt = {});

struct ScoredCandidate {
  Formula formula;
  double fitness = -std::numeric_limits<double>::infinity();
  bool sat = false;
};

/// Sorted by fitness (desc), then size, then canonical text. Candidates the
/// semantics cannot score get -infinity.
std::vector<ScoredCandidate> score_candidates(const std::vector<Formula>& cands, const Sample& s,
                                              const SemanticsParams& p);
std::vector<ScoredCandidate> top_k(const std::vector<Formula>& cands, const Sample& s,
                                   const SemanticsParams& p, int k);

}  // namespace janaka
