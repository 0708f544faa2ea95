#ifndef PPDEF_BASE_HPP
#define PPDEF_BASE_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <variant>

#include "ppdef/core.hpp"

namespace ppdef {

struct Diagnostic {
  std::string code;
  std::string message;
};

// An infinite base structure given by its signature and the finite list of
// forbidden induced substructures (bounds). Orderedness / homogeneity /
// Ramsey-ness of the intended infinite model are trusted metadata supplied by
// the caller; only finitely checkable sanity conditions are validated here.
class BaseStructure {
 public:
  Signature sig;
  std::vector<FinStruct> bounds;
  std::string name = "custom";
  int s = 1;        // max bound size
  int n_param = 3;  // working arity: max(s, max symbol arity, 3)

  BaseStructure();

  // Membership of a finite structure in the age (no bound embeds). Results
  // are memoized; the cache is shared between copies of this base.
  bool in_age(const FinStruct& a) const;

  // All members of the age with canonically increasing order (the order
  // relation is exactly {(i,j) : i<j}), of every size from 0 to n, in a
  // fixed deterministic order. cap<0 means unlimited.
  std::vector<FinStruct> enumerate_age(int n, long cap = -1) const;

  // Canonical age members of one exact size.
  std::vector<FinStruct> members_of_size(int b, long cap = -1) const;

 private:
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

// Checks a raw description and computes s and the working arity. Diagnostics
// (with stable codes) are returned instead of a base when validation fails.
std::variant<BaseStructure, std::vector<Diagnostic>> validate_base(
    const Signature& sig, std::vector<FinStruct> bounds, std::string name = "custom");

std::vector<std::string> builtin_names();
BaseStructure builtin_base(const std::string& name);  // throws std::out_of_range if unknown

}  // namespace ppdef

#endif
