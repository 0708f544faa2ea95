#ifndef PPDEF_DECIDE_HPP
#define PPDEF_DECIDE_HPP

#include "ppdef/search.hpp"

namespace ppdef {

enum class Verdict { Definable, NotDefinable, Inconclusive };
std::string verdict_name(Verdict v);

struct Problem {
  std::shared_ptr<const BaseStructure> base;
  Mode mode = Mode::pp;
  RelationDef target;
  std::vector<RelationDef> theta;
  bool use_small_arity_cap = false;  // optional 2*o(2)-1 cap on the pp arity
};

struct Decision {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Behavior> witness;  // present iff NotDefinable
  SearchStats stats;
  std::string note;
};

// Number of target types (the function arity used in pp mode).
int arity_bound(const RelationDef& target);

Decision decide(const Problem& p, const SearchLimits& limits = {});

struct IdentityResult {
  enum Kind { Found, None, Inconclusive } kind = Inconclusive;
  std::optional<Behavior> behavior;
  SearchStats stats;
};

// Searches for a 4-ary behavior sigma with sigma(t1,t2,t3,t3) =
// sigma(t2,t3,t1,t2) preserving every relation of gamma.
IdentityResult check_identity(std::shared_ptr<const BaseStructure> base,
                              const std::vector<RelationDef>& gamma,
                              const SearchLimits& limits = {});

// Exhaustive recheck of the identity over all n-type triples.
bool verify_identity(const Behavior& b);

}  // namespace ppdef

#endif
