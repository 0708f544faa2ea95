#ifndef PPDEF_TYPES_HPP
#define PPDEF_TYPES_HPP

#include <optional>
#include <utility>

#include "ppdef/base.hpp"

namespace ppdef {

// A complete n-type over the base: an equality pattern on the positions
// (partition[i] = block of position i, blocks numbered in increasing order
// of the base's order relation) plus the canonically ordered quotient
// structure on the blocks. Because blocks are order-sorted and the order is
// rigid, type equality is plain componentwise equality.
struct TypeRep {
  Tuple partition;
  FinStruct quotient;

  int arity() const { return static_cast<int>(partition.size()); }
  int blocks() const { return quotient.size; }
  bool identifies(int i, int j) const { return partition[i] == partition[j]; }

  std::string encode() const;

  bool operator==(const TypeRep& o) const {
    return partition == o.partition && quotient == o.quotient;
  }
  bool operator!=(const TypeRep& o) const { return !(*this == o); }
  bool operator<(const TypeRep& o) const {
    if (partition != o.partition) return partition < o.partition;
    return quotient < o.quotient;
  }
};

// Arity-0 type (used as the constants tuple of constant-free searches).
TypeRep empty_type(const BaseStructure& base);

// Type of a tuple of points inside an age member. Requires the order
// relation of a to be a strict total order on the tuple's entries.
TypeRep tuple_type(const BaseStructure& base, const FinStruct& a, const Tuple& tup);

// All n-types, deterministically ordered: block count ascending, then
// quotient enumeration order, then partition lexicographic.
std::vector<TypeRep> enumerate_types(const BaseStructure& base, int n, long cap = -1);

// Restriction of t to positions I (0-based, strictly increasing, nonempty).
TypeRep subtype(const TypeRep& t, const std::vector<int>& I);

// All (arity+1)-types whose restriction to the first arity positions is t;
// the new position is appended. Joins (new position equal to an existing
// block) come first, then new blocks by insertion rank.
std::vector<TypeRep> type_extensions(const BaseStructure& base, const TypeRep& t,
                                     long cap = -1);

struct AssembleResult {
  std::optional<TypeRep> type;
  std::string error;  // set when !type: equality clash, order clash,
                      // relation clash, underdetermined, or bound embeds
};

// Glue a p-type together from consistent restrictions. parts[i] gives the
// restriction to index set parts[i].first (0-based increasing positions).
AssembleResult assemble(const BaseStructure& base, int p,
                        const std::vector<std::pair<std::vector<int>, TypeRep>>& parts);

}  // namespace ppdef

#endif
