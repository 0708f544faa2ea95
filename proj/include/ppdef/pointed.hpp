#ifndef PPDEF_POINTED_HPP
#define PPDEF_POINTED_HPP

#include "ppdef/types.hpp"

namespace ppdef {

// A type of a free tuple over the base expanded by a fixed tuple of
// constants: stored as the full (k + free)-type whose first k positions are
// the constants. k == 0 degenerates to a plain type.
struct PointedType {
  int k = 0;
  TypeRep full;

  int free_arity() const { return full.arity() - k; }
  TypeRep base_type() const;  // restriction to the constant positions

  std::string encode() const;

  bool operator==(const PointedType& o) const { return k == o.k && full == o.full; }
  bool operator!=(const PointedType& o) const { return !(*this == o); }
  bool operator<(const PointedType& o) const {
    if (k != o.k) return k < o.k;
    return full < o.full;
  }
};

// All pointed types with n free positions over constants of type c,
// deterministically ordered. Equals filtering enumerate_types(k+n) by
// restriction, but is computed incrementally.
std::vector<PointedType> pointed_space(const BaseStructure& base, const TypeRep& c,
                                       int n, long cap = -1);

// Restriction to free positions I (0-based increasing, nonempty); constants
// are kept.
PointedType pointed_subtype(const PointedType& p, const std::vector<int>& I);

// The pointed k-type whose free positions repeat the constants themselves.
PointedType constant_self_type(const TypeRep& c);

// The plain type of the free positions.
TypeRep forget_constants(const PointedType& p);

}  // namespace ppdef

#endif
