#ifndef PPDEF_ORACLE_HPP
#define PPDEF_ORACLE_HPP

#include "ppdef/decide.hpp"

namespace ppdef {

// Primitive positive formula: conjunction of atoms over theta symbols and
// equalities, variables 0..free_arity-1 free, the next evars existential.
struct PpFormula {
  int free_arity = 0;
  int evars = 0;
  std::vector<AstPtr> atoms;  // atoms over theta relation NAMES, see note

  std::string to_string(const std::vector<RelationDef>& theta) const;
};

// Semantics of a pp formula as a set of free_arity-types (sorted). Atoms
// reference theta by index (Ast::symbol holds the theta index here).
std::vector<TypeRep> pp_semantics(const PpFormula& f,
                                  const std::vector<RelationDef>& theta,
                                  const BaseStructure& base);

// Best-effort enumeration of pp definitions of the target from theta within
// the given budgets. Deterministic; returns the first hit.
std::optional<PpFormula> synthesize_pp(const RelationDef& target,
                                       const std::vector<RelationDef>& theta,
                                       const BaseStructure& base, int max_vars,
                                       int max_atoms);

// A finite counterexample shadow: a total m-ary table on one canonical age
// member that preserves theta tuple-wise and violates the target. Reported
// only if such a table exists at every size from the target arity up to
// grid_size (smallest-size table returned). Necessary-condition evidence
// only; NotFound proves nothing.
struct PartialWitness {
  FinStruct grid;                 // canonical age member the table lives on
  int m = 0;
  std::map<Tuple, int> table;     // m-tuple of grid points -> grid point
  std::vector<Tuple> violation_rows;  // m target tuples whose image leaves it
};

std::optional<PartialWitness> brute_partial_witness(const Problem& p, int grid_size,
                                                    long node_budget = 2000000);

struct ReplayCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ReplayReport {
  std::vector<ReplayCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Machine-checkable certificate replay: builds finite pointed age members of
// the given sizes (one per coordinate), forms the product grid, glues it by
// the behavior's pair images, and verifies that the quotient stays in the
// age, that the induced map preserves theta on the grid, and that it
// violates the target at the constants.
ReplayReport replay(const Behavior& b, const Problem& p, const std::vector<int>& sizes);

}  // namespace ppdef

#endif
