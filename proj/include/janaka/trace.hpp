#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "janaka/formula.hpp"

namespace janaka {

/// Finite trace. Each state is a bit mask over the sample's proposition
/// order (bit i set = atom i true), so at most 64 atoms are supported.
struct Trace {
  std::vector<std::uint64_t> states;

  std::size_t size() const noexcept { return states.size(); }
  bool holds(std::size_t t, std::size_t atom) const { return (states[t] >> atom) & 1u; }
  friend bool operator==(const Trace&, const Trace&) = default;
  friend bool operator<(const Trace& a, const Trace& b) { return a.states < b.states; }
};

struct Sample {
  PropositionSet props;
  std::vector<Trace> traces;

  std::size_t size() const noexcept { return traces.size(); }
  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Builds a trace from explicit sets of true atoms, e.g. {{"p"}, {"q"}}.
Trace make_trace(const PropositionSet& props, const std::vector<std::vector<std::string>>& states);

Sample parse_traces(std::string_view text, const PropositionSet& props);
/// Reads and parses a trace file; the proposition set is taken from the
/// first state of the first record unless `props` is given.
Sample read_trace_file(const std::string& path, const std::optional<PropositionSet>& props = {});
/// Proposition set declared by the first state of the first record.
PropositionSet infer_props(std::string_view text);

/// One record per line. With pad_to, each trace is right-padded with "1" states.
std::string serialize_sample(const Sample& s, std::optional<std::size_t> pad_to = std::nullopt);
std::string serialize_trace(const Trace& t, const PropositionSet& props,
                            std::optional<std::size_t> pad_to = std::nullopt);

struct GenerateOptions {
  int count = 10;
  int min_len = 5;
  int max_len = 10;
  std::uint64_t seed = 1;
  /// Maximum number of candidate traces drawn.
  long budget = 200000;
};

/// Seeded rejection sampling: uniform states and lengths, keeps distinct
/// traces satisfying f until `count` are found or the budget runs out.
Sample generate_traces(const Formula& f, const PropositionSet& props, const GenerateOptions& opt);

}  // namespace janaka
