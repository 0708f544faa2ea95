#include "ppdef/pointed.hpp"

#include <sstream>

namespace ppdef {

TypeRep PointedType::base_type() const {
  if (k == 0) {
    TypeRep t;
    t.quotient = FinStruct(0, static_cast<int>(full.quotient.rels.size()));
    return t;
  }
  std::vector<int> I(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) I[static_cast<size_t>(i)] = i;
  return subtype(full, I);
}

std::string PointedType::encode() const {
  std::ostringstream os;
  os << 'k' << k << '!' << full.encode();
  return os.str();
}

std::vector<PointedType> pointed_space(const BaseStructure& base, const TypeRep& c,
                                       int n, long cap) {
  std::vector<TypeRep> cur = {c};
  for (int step = 0; step < n; ++step) {
    std::vector<TypeRep> next;
    for (const TypeRep& t : cur) {
      for (TypeRep& e : type_extensions(base, t, cap)) {
        next.push_back(std::move(e));
        if (cap >= 0 && static_cast<long>(next.size()) > cap)
          throw ResourceLimitError("pointed space exceeded cap");
      }
    }
    cur = std::move(next);
  }
  std::vector<PointedType> out;
  out.reserve(cur.size());
  for (TypeRep& t : cur) out.push_back(PointedType{c.arity(), std::move(t)});
  return out;
}

PointedType pointed_subtype(const PointedType& p, const std::vector<int>& I) {
  std::vector<int> full_I;
  full_I.reserve(static_cast<size_t>(p.k) + I.size());
  for (int i = 0; i < p.k; ++i) full_I.push_back(i);
  for (int i : I) full_I.push_back(p.k + i);
  return PointedType{p.k, subtype(p.full, full_I)};
}

PointedType constant_self_type(const TypeRep& c) {
  const int k = c.arity();
  TypeRep full;
  full.partition.reserve(static_cast<size_t>(2 * k));
  for (int i = 0; i < k; ++i) full.partition.push_back(c.partition[static_cast<size_t>(i)]);
  for (int i = 0; i < k; ++i) full.partition.push_back(c.partition[static_cast<size_t>(i)]);
  full.quotient = c.quotient;
  return PointedType{k, std::move(full)};
}

TypeRep forget_constants(const PointedType& p) {
  std::vector<int> I(static_cast<size_t>(p.free_arity()));
  for (size_t i = 0; i < I.size(); ++i) I[i] = static_cast<int>(i);
  std::vector<int> full_I;
  for (size_t i = 0; i < I.size(); ++i) full_I.push_back(p.k + static_cast<int>(i));
  return subtype(p.full, full_I);
}

}  // namespace ppdef
