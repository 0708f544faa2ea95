#include "ppdef/decide.hpp"

#include <algorithm>
#include <chrono>

namespace ppdef {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Definable:
      return "DEFINABLE";
    case Verdict::NotDefinable:
      return "NOT-DEFINABLE";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

int arity_bound(const RelationDef& target) {
  return static_cast<int>(target.type_set.size());
}

Decision decide(const Problem& p, const SearchLimits& limits) {
  Decision d;
  const std::vector<TypeRep>& tr = p.target.type_set;

  // degenerate targets are definable outright: empty by 'false', full by
  // 'true' (both are pp formulas up to the usual conventions)
  std::vector<TypeRep> all = enumerate_types(*p.base, p.target.arity, limits.space_cap);
  if (tr.empty() || tr.size() == all.size()) {
    d.verdict = Verdict::Definable;
    d.note = tr.empty() ? "empty target" : "full target";
    return d;
  }

  if (p.mode == Mode::pp) {
    SearchProblem sp;
    sp.base = p.base;
    sp.mode = Mode::pp;
    sp.constants = tr;  // one constant per target type, enumeration order
    sp.theta = p.theta;
    sp.target = p.target;
    sp.limits = limits;
    SearchOutcome o = search(sp);
    d.stats = o.stats;
    switch (o.kind) {
      case SearchOutcome::Witness:
        d.verdict = Verdict::NotDefinable;
        d.witness = std::move(o.witness);
        break;
      case SearchOutcome::Exhausted:
        d.verdict = Verdict::Definable;
        break;
      case SearchOutcome::Limit:
        d.verdict = Verdict::Inconclusive;
        d.note = o.note;
        break;
    }
    return d;
  }

  // ep/ex: unary searches, one per target type; a single witness suffices.
  // The time budget is shared by the whole decision, not per constant.
  bool limited = false;
  std::string limit_note;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(limits.time_budget_ms);
  for (const TypeRep& c : tr) {
    SearchProblem sp;
    sp.base = p.base;
    sp.mode = p.mode;
    sp.constants = {c};
    sp.theta = p.theta;
    sp.target = p.target;
    sp.limits = limits;
    sp.limits.time_budget_ms = std::max<long>(
        0, std::chrono::duration_cast<std::chrono::milliseconds>(
               deadline - std::chrono::steady_clock::now())
               .count());
    if (sp.limits.time_budget_ms == 0) {
      limited = true;
      limit_note = "time budget exhausted";
      break;
    }
    SearchOutcome o = search(sp);
    d.stats.nodes += o.stats.nodes;
    d.stats.cells = std::max(d.stats.cells, o.stats.cells);
    d.stats.elapsed_ms += o.stats.elapsed_ms;
    if (o.kind == SearchOutcome::Witness) {
      d.verdict = Verdict::NotDefinable;
      d.witness = std::move(o.witness);
      return d;
    }
    if (o.kind == SearchOutcome::Limit) {
      limited = true;
      limit_note = o.note;
    }
  }
  if (limited) {
    d.verdict = Verdict::Inconclusive;
    d.note = limit_note;
  } else {
    d.verdict = Verdict::Definable;
  }
  return d;
}

IdentityResult check_identity(std::shared_ptr<const BaseStructure> base,
                              const std::vector<RelationDef>& gamma,
                              const SearchLimits& limits) {
  IdentityResult r;
  SearchProblem sp;
  sp.base = std::move(base);
  sp.mode = Mode::identity;
  sp.constants.assign(4, empty_type(*sp.base));
  sp.theta = gamma;
  sp.identity_constraint = true;
  sp.limits = limits;
  SearchOutcome o = search(sp);
  r.stats = o.stats;
  switch (o.kind) {
    case SearchOutcome::Witness:
      r.kind = IdentityResult::Found;
      r.behavior = std::move(o.witness);
      if (!verify_identity(*r.behavior))
        throw std::logic_error("identity witness failed the exhaustive recheck");
      break;
    case SearchOutcome::Exhausted:
      r.kind = IdentityResult::None;
      break;
    case SearchOutcome::Limit:
      r.kind = IdentityResult::Inconclusive;
      break;
  }
  return r;
}

bool verify_identity(const Behavior& b) {
  if (b.m != 4) return false;
  const size_t S = b.spaces[0].size();
  for (size_t a = 0; a < S; ++a)
    for (size_t c = 0; c < S; ++c)
      for (size_t e = 0; e < S; ++e) {
        std::vector<int> u = {static_cast<int>(a), static_cast<int>(c),
                              static_cast<int>(e), static_cast<int>(e)};
        std::vector<int> v = {static_cast<int>(c), static_cast<int>(e),
                              static_cast<int>(a), static_cast<int>(c)};
        if (!(b.value_at(u) == b.value_at(v))) return false;
      }
  return true;
}

}  // namespace ppdef
