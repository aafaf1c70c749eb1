#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "janaka/semantics.hpp"
#include "janaka/template.hpp"
#include "janaka/trace.hpp"

namespace janaka {

struct MilpStats {
  std::size_t label_binaries = 0;  // x_* variables
  std::size_t aux_binaries = 0;
  std::size_t score_vars = 0;      // y_* variables
  std::size_t continuous = 0;      // all non-binary variables
  std::size_t rows = 0;
  std::size_t quadratic_rows = 0;
};

struct MilpExport {
  std::string lp;
  MilpStats stats;
};

/// Writes the hole-filling problem as a mixed-integer program in CPLEX LP
/// format. Holes become binaries x_<slot>_<label>; scores become
/// y_<trace>_<slot>_<pos>. The objective maximizes the sum of root scores
/// at position 0. Triviality rules are not encoded. `d` is a lower bound
/// on the indexed tree depth.
MilpExport export_milp(const Template& t, const Sample& s, const SemanticsParams& p, int d);

/// Linear part of an LP file, enough to read back what export_milp writes.
struct LpModel {
  struct Term {
    int var;
    double coef;
  };
  struct Row {
    std::string name;
    std::vector<Term> terms;
    char sense;  // 'L' (<=), 'G' (>=), 'E' (=)
    double rhs;
  };
  bool maximize = true;
  std::vector<Term> objective;
  double objective_constant = 0.0;
  std::vector<std::string> names;
  std::vector<double> lo, hi;
  std::vector<char> binary;
  std::vector<int> binary_order;  // binaries in declaration order
  std::vector<Row> rows;
  std::size_t quadratic_rows = 0;

  int index_of(std::string_view name) const;
};

/// Throws UnsupportedForExport on quadratic rows.
LpModel parse_lp(std::string_view text);

struct LpSolveResult {
  bool feasible = false;
  double objective = 0.0;
  long long decisions = 0;  // complete assignments of the decision binaries tried
  long long nodes = 0;
};

/// Exact bounded enumeration for models whose continuous part is pinned once
/// the binaries are fixed. Binaries whose name starts with `decision_prefix`
/// are enumerated exhaustively; for each assignment the remaining binaries
/// are searched until the first feasible completion.
LpSolveResult solve_lp_enumerate(const LpModel& m, const std::string& decision_prefix = "x_",
                                 long long node_limit = 50'000'000);

}  // namespace janaka
