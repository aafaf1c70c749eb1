#include "janaka/trace.hpp"

#include <cctype>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "janaka/error.hpp"
#include "janaka/qualitative.hpp"

namespace janaka {

namespace {

struct Record {
  std::string text;  // whitespace removed
  std::size_t offset;
};

std::vector<Record> split_records(std::string_view text) {
  std::vector<Record> out;
  Record cur{{}, 0};
  bool started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '#' || c == '\n') {
      if (!cur.text.empty()) out.push_back(cur);
      cur = Record{{}, 0};
      started = false;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (!started) {
      cur.offset = i;
      started = true;
    }
    cur.text += c;
  }
  if (!cur.text.empty()) out.push_back(cur);
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t p = s.find(sep, start);
    parts.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return parts;
}

Trace parse_record(const Record& rec, const PropositionSet& props) {
  if (props.size() > 64) throw Error(ErrorCode::InvalidArgument, "at most 64 propositions are supported");
  const std::uint64_t full = props.size() == 64 ? ~0ull : ((1ull << props.size()) - 1);
  Trace t;
  bool padding = false;
  for (std::string_view state : split(rec.text, ';')) {
    if (state == "1") {
      padding = true;
      continue;
    }
    if (padding)
      throw Error(ErrorCode::MixedPadding, "padding state followed by a real state", rec.offset);
    if (state.empty()) throw Error(ErrorCode::SyntaxError, "empty state", rec.offset);
    std::uint64_t value = 0, seen = 0;
    for (std::string_view lit : split(state, ',')) {
      bool neg = !lit.empty() && lit[0] == '!';
      std::string_view name = neg ? lit.substr(1) : lit;
      if (name.empty()) throw Error(ErrorCode::SyntaxError, "empty literal", rec.offset);
      auto idx = props.index_of(name);
      if (!idx)
        throw Error(ErrorCode::UnknownAtom, "unknown atom '" + std::string(name) + "'", rec.offset);
      std::uint64_t bit = 1ull << *idx;
      if (seen & bit) {
        if (((value & bit) != 0) == neg)
          throw Error(ErrorCode::SyntaxError, "contradictory literals for '" + std::string(name) + "'",
                      rec.offset);
        continue;
      }
      seen |= bit;
      if (!neg) value |= bit;
    }
    if (seen != full) {
      for (std::size_t i = 0; i < props.size(); ++i)
        if (!((seen >> i) & 1u))
          throw Error(ErrorCode::PartialAssignment, "state does not assign '" + props[i] + "'",
                      rec.offset);
    }
    t.states.push_back(value);
  }
  if (t.states.empty()) throw Error(ErrorCode::EmptyTrace, "trace consists only of padding", rec.offset);
  return t;
}

}  // namespace

Trace make_trace(const PropositionSet& props, const std::vector<std::vector<std::string>>& states) {
  Trace t;
  for (const auto& st : states) {
    std::uint64_t v = 0;
    for (const auto& a : st) {
      auto idx = props.index_of(a);
      if (!idx) throw Error(ErrorCode::UnknownAtom, "unknown atom '" + a + "'");
      v |= 1ull << *idx;
    }
    t.states.push_back(v);
  }
  if (t.states.empty()) throw Error(ErrorCode::EmptyTrace, "trace has no states");
  return t;
}

Sample parse_traces(std::string_view text, const PropositionSet& props) {
  auto records = split_records(text);
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no trace records in input");
  Sample s{props, {}};
  for (const auto& r : records) s.traces.push_back(parse_record(r, props));
  return s;
}

PropositionSet infer_props(std::string_view text) {
  auto records = split_records(text);
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no trace records in input");
  std::string_view first = split(records.front().text, ';').front();
  if (first == "1") throw Error(ErrorCode::EmptyTrace, "first state is padding");
  std::vector<std::string> names;
  for (std::string_view lit : split(first, ','))
    names.emplace_back(!lit.empty() && lit[0] == '!' ? lit.substr(1) : lit);
  return PropositionSet(std::move(names));
}

Sample read_trace_file(const std::string& path, const std::optional<PropositionSet>& props) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open trace file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  return parse_traces(text, props ? *props : infer_props(text));
}

std::string serialize_trace(const Trace& t, const PropositionSet& props,
                            std::optional<std::size_t> pad_to) {
  if (t.states.empty()) throw Error(ErrorCode::EmptyTrace, "cannot serialize an empty trace");
  if (pad_to && *pad_to < t.size())
    throw Error(ErrorCode::PadTooShort, "pad length " + std::to_string(*pad_to) +
                                            " is shorter than a trace of length " +
                                            std::to_string(t.size()));
  std::string out;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) out += ';';
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (i) out += ',';
      if (!t.holds(k, i)) out += '!';
      out += props[i];
    }
  }
  if (pad_to)
    for (std::size_t k = t.size(); k < *pad_to; ++k) out += ";1";
  out += '#';
  return out;
}

std::string serialize_sample(const Sample& s, std::optional<std::size_t> pad_to) {
  if (s.traces.empty()) throw Error(ErrorCode::EmptySample, "sample has no traces");
  std::string out;
  for (std::size_t i = 0; i < s.traces.size(); ++i) {
    if (i) out += '\n';
    out += serialize_trace(s.traces[i], s.props, pad_to);
  }
  return out;
}

Sample generate_traces(const Formula& f, const PropositionSet& props, const GenerateOptions& opt) {
  if (opt.count < 1 || opt.min_len < 1 || opt.min_len > opt.max_len || opt.budget < opt.count)
    throw Error(ErrorCode::InvalidArgument, "invalid trace generation parameters");
  if (props.size() > 64) throw Error(ErrorCode::InvalidArgument, "at most 64 propositions are supported");
  for (const auto& a : atoms_of(f))
    if (!props.contains(a)) throw Error(ErrorCode::UnknownAtom, "unknown atom '" + a + "'");

  std::mt19937_64 rng(opt.seed);
  const std::uint64_t mask = props.size() == 64 ? ~0ull : ((1ull << props.size()) - 1);
  std::uniform_int_distribution<int> len_dist(opt.min_len, opt.max_len);
  std::set<Trace> seen;
  Sample s{props, {}};
  for (long attempt = 0; attempt < opt.budget && static_cast<int>(s.traces.size()) < opt.count;
       ++attempt) {
    Trace t;
    int n = len_dist(rng);
    t.states.reserve(n);
    for (int k = 0; k < n; ++k) t.states.push_back(rng() & mask);
    if (seen.count(t) || !eval_qualitative(f, t, props)) continue;
    seen.insert(t);
    s.traces.push_back(std::move(t));
  }
  if (static_cast<int>(s.traces.size()) < opt.count)
    throw Error(ErrorCode::BudgetExhausted,
                "found " + std::to_string(s.traces.size()) + " of " + std::to_string(opt.count) +
                    " satisfying traces for " + format_formula(f) + " within " +
                    std::to_string(opt.budget) + " draws");
  return s;
}

}  // namespace janaka
