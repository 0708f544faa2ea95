#ifndef PPDEF_SEARCH_HPP
#define PPDEF_SEARCH_HPP

#include "ppdef/behavior.hpp"

namespace ppdef {

struct SearchLimits {
  long node_budget = 1000000;    // backtracking decisions
  long time_budget_ms = 120000;  // wall clock per search
  long max_cells = 400000;       // table size guard
  long space_cap = 250000;       // pointed space / enumeration guard
};

struct SearchStats {
  long nodes = 0;
  long cells = 0;
  long elapsed_ms = 0;
};

struct SearchProblem {
  std::shared_ptr<const BaseStructure> base;
  Mode mode = Mode::pp;
  std::vector<TypeRep> constants;        // size m
  std::vector<RelationDef> theta;
  std::optional<RelationDef> target;     // absent in identity mode
  bool identity_constraint = false;      // sigma(t1,t2,t3,t3) = sigma(t2,t3,t1,t2)
  SearchLimits limits;
};

struct SearchOutcome {
  enum Kind { Witness, Exhausted, Limit } kind = Exhausted;
  std::optional<Behavior> witness;
  SearchStats stats;
  std::string note;
};

// Backtracking search with forward propagation over the product table.
// Deterministic: fixed cell and value orders, sequential execution.
// Witness outcomes carry a behavior that passed every validity check;
// Exhausted is only reported after genuine exhaustion.
SearchOutcome search(const SearchProblem& sp);

}  // namespace ppdef

#endif
