#ifndef PPDEF_CORE_HPP
#define PPDEF_CORE_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ppdef {

// Thrown when an enumeration or search exceeds its configured budget.
// Callers that must stay total (the deciders) catch it and report an
// inconclusive outcome instead of an answer.
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

struct Symbol {
  std::string name;
  int arity = 0;
};

// Relational signature with one distinguished binary order symbol.
struct Signature {
  std::vector<Symbol> symbols;
  int order_symbol = -1;

  int max_arity() const {
    int m = 0;
    for (const auto& s : symbols) m = m > s.arity ? m : s.arity;
    return m;
  }
  int find(std::string_view name) const {
    for (size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i].name == name) return static_cast<int>(i);
    return -1;
  }
  bool operator==(const Signature& o) const {
    if (order_symbol != o.order_symbol || symbols.size() != o.symbols.size()) return false;
    for (size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i].name != o.symbols[i].name || symbols[i].arity != o.symbols[i].arity)
        return false;
    return true;
  }
};

using Tuple = std::vector<int>;

// Finite structure over a fixed signature: points 0..size-1 and one tuple set
// per symbol. Comparison is componentwise, so equal structures compare equal
// without any isomorphism testing; canonical labeling is the caller's job.
struct FinStruct {
  int size = 0;
  std::vector<std::set<Tuple>> rels;

  FinStruct() = default;
  FinStruct(int sz, int nsym) : size(sz), rels(static_cast<size_t>(nsym)) {}

  bool has(int sym, const Tuple& t) const {
    return rels[static_cast<size_t>(sym)].count(t) != 0;
  }
  void add(int sym, Tuple t) { rels[static_cast<size_t>(sym)].insert(std::move(t)); }

  // Substructure induced on pts, relabeled so pts[i] becomes point i.
  FinStruct induced(const std::vector<int>& pts) const;

  std::string encode() const;

  bool operator==(const FinStruct& o) const { return size == o.size && rels == o.rels; }
  bool operator!=(const FinStruct& o) const { return !(*this == o); }
  bool operator<(const FinStruct& o) const {
    if (size != o.size) return size < o.size;
    return rels < o.rels;
  }
};

// All r-tuples over {0..n-1}, in lexicographic order.
std::vector<Tuple> all_tuples(int n, int r);

// True if b embeds into a as an induced substructure (relations and
// non-relations preserved, map injective).
bool embeds(const FinStruct& b, const FinStruct& a);

}  // namespace ppdef

#endif
