#ifndef PPDEF_BEHAVIOR_HPP
#define PPDEF_BEHAVIOR_HPP

#include <map>
#include <memory>

#include "ppdef/formula.hpp"
#include "ppdef/pointed.hpp"

namespace ppdef {

enum class Mode { pp, ep, ex, identity };
std::string mode_name(Mode m);

// An m-ary type function: one value (an n-type) per product of pointed
// n-types, stored as a flat row-major table of value indices.
struct Behavior {
  std::shared_ptr<const BaseStructure> base;
  int m = 0;
  int n = 0;
  std::vector<TypeRep> constants;                  // size m (arity may be 0)
  std::vector<std::vector<PointedType>> spaces;    // size m
  std::vector<TypeRep> values;                     // all n-types
  std::vector<int> table;                          // size = prod |spaces[i]|
  bool complete = true;

  long cell_count() const;
  long cell_index(const std::vector<int>& idx) const;
  void unflatten(long flat, std::vector<int>& idx) const;
  const TypeRep& value_at(const std::vector<int>& idx) const;

  // Index of a pointed type inside spaces[coord]; -1 if absent.
  int space_index(int coord, const PointedType& p) const;
  void build_maps();  // call after filling spaces

 private:
  std::vector<std::map<PointedType, int>> space_maps_;
};

struct CompatConflict {
  std::vector<int> cell_p, cell_q;
  std::vector<int> I, J;
  std::string note;
};

// Projection coherence: equal pointed subtypes on equal-size index sets must
// yield equal value subtypes. Returns a conflict or nothing.
std::optional<CompatConflict> check_compatibility(const Behavior& b);

// Equality respect: free positions identified by every argument must be
// identified by the value. Necessary for the quotient construction to yield
// an equivalence relation.
std::optional<CompatConflict> check_equality_respect(const Behavior& b);

// Image of a product of pointed p-types. p == n is a table lookup; p < n
// goes through an arbitrary extension (well-defined by compatibility);
// p > n assembles the value from all n-element position subsets.
TypeRep extend_behavior(const Behavior& b, const std::vector<PointedType>& args);

// True if the behavior maps the constants' self-types outside the target.
bool check_violation(const Behavior& b, const RelationDef& target);

// Empty on success; otherwise the name of a relation whose type set is not
// preserved (ep/pp: forward; ex: both directions plus injectivity).
std::optional<std::string> check_preservation(const Behavior& b,
                                              const std::vector<RelationDef>& theta,
                                              Mode mode);

}  // namespace ppdef

#endif
