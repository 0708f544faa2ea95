#include "ppdef/types.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace ppdef {

std::string TypeRep::encode() const {
  std::ostringstream os;
  os << 'p';
  for (size_t i = 0; i < partition.size(); ++i) {
    if (i) os << ',';
    os << partition[i];
  }
  os << '#' << quotient.encode();
  return os.str();
}

TypeRep empty_type(const BaseStructure& base) {
  TypeRep t;
  t.quotient = FinStruct(0, static_cast<int>(base.sig.symbols.size()));
  return t;
}

TypeRep tuple_type(const BaseStructure& base, const FinStruct& a, const Tuple& tup) {
  const int ord = base.sig.order_symbol;
  std::vector<int> reps;
  for (int x : tup)
    if (std::find(reps.begin(), reps.end(), x) == reps.end()) reps.push_back(x);
  // sort representatives by the order relation of a
  for (size_t i = 0; i < reps.size(); ++i)
    for (size_t j = i + 1; j < reps.size(); ++j) {
      bool ij = a.has(ord, {reps[i], reps[j]});
      bool ji = a.has(ord, {reps[j], reps[i]});
      if (ij == ji)
        throw std::logic_error("tuple_type: order not total on tuple entries");
      if (ji) std::swap(reps[i], reps[j]);
    }
  TypeRep t;
  t.partition.resize(tup.size());
  for (size_t i = 0; i < tup.size(); ++i) {
    auto it = std::find(reps.begin(), reps.end(), tup[i]);
    t.partition[i] = static_cast<int>(it - reps.begin());
  }
  t.quotient = a.induced(reps);
  return t;
}

std::vector<TypeRep> enumerate_types(const BaseStructure& base, int n, long cap) {
  if (n < 1) throw std::invalid_argument("enumerate_types: arity must be >= 1");
  std::vector<TypeRep> out;
  for (int b = 1; b <= n; ++b) {
    const auto members = base.members_of_size(b, cap);
    // all surjections {0..n-1} -> {0..b-1}, lexicographic
    Tuple part(static_cast<size_t>(n), 0);
    while (true) {
      std::vector<char> seen(static_cast<size_t>(b), 0);
      for (int x : part) seen[static_cast<size_t>(x)] = 1;
      bool onto = std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
      if (onto) {
        for (const FinStruct& q : members) {
          TypeRep t;
          t.partition = part;
          t.quotient = q;
          out.push_back(std::move(t));
          if (cap >= 0 && static_cast<long>(out.size()) > cap)
            throw ResourceLimitError("type enumeration exceeded cap");
        }
      }
      int i = n - 1;
      while (i >= 0 && part[static_cast<size_t>(i)] == b - 1) {
        part[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++part[static_cast<size_t>(i)];
    }
  }
  return out;
}

TypeRep subtype(const TypeRep& t, const std::vector<int>& I) {
  if (I.empty()) throw std::invalid_argument("subtype: empty index set");
  std::vector<int> used;  // blocks referenced, ascending
  for (int i : I) {
    int blk = t.partition[static_cast<size_t>(i)];
    if (std::find(used.begin(), used.end(), blk) == used.end()) used.push_back(blk);
  }
  std::sort(used.begin(), used.end());
  TypeRep out;
  out.partition.reserve(I.size());
  for (int i : I) {
    int blk = t.partition[static_cast<size_t>(i)];
    out.partition.push_back(static_cast<int>(
        std::find(used.begin(), used.end(), blk) - used.begin()));
  }
  out.quotient = t.quotient.induced(used);
  return out;
}

std::vector<TypeRep> type_extensions(const BaseStructure& base, const TypeRep& t,
                                     long cap) {
  std::vector<TypeRep> out;
  const int b = t.blocks();
  const int nsym = static_cast<int>(base.sig.symbols.size());
  // joins: new position lands in an existing block
  for (int j = 0; j < b; ++j) {
    TypeRep e = t;
    e.partition.push_back(j);
    out.push_back(std::move(e));
  }
  // new block at each insertion rank
  for (int r = 0; r <= b; ++r) {
    FinStruct q(b + 1, nsym);
    auto relabel = [r](int x) { return x < r ? x : x + 1; };
    for (size_t sym = 0; sym < t.quotient.rels.size(); ++sym) {
      if (static_cast<int>(sym) == base.sig.order_symbol) continue;
      for (const Tuple& tu : t.quotient.rels[sym]) {
        Tuple m(tu.size());
        for (size_t i = 0; i < tu.size(); ++i) m[i] = relabel(tu[i]);
        q.rels[sym].insert(m);
      }
    }
    for (int i = 0; i < b + 1; ++i)
      for (int j = i + 1; j < b + 1; ++j) q.add(base.sig.order_symbol, {i, j});
    // choose relation tuples mentioning the new block
    std::vector<std::pair<int, Tuple>> cands;
    for (int sym = 0; sym < nsym; ++sym) {
      if (sym == base.sig.order_symbol) continue;
      for (const Tuple& tu : all_tuples(b + 1, base.sig.symbols[static_cast<size_t>(sym)].arity)) {
        bool mentions = false;
        for (int x : tu)
          if (x == r) mentions = true;
        if (mentions) cands.emplace_back(sym, tu);
      }
    }
    if (cands.size() > 24)
      throw ResourceLimitError("type extension space too large");
    const uint64_t total = 1ull << cands.size();
    for (uint64_t mask = 0; mask < total; ++mask) {
      FinStruct cur = q;
      for (size_t i = 0; i < cands.size(); ++i)
        if (mask & (1ull << i)) cur.add(cands[i].first, cands[i].second);
      if (!base.in_age(cur)) continue;
      TypeRep e;
      e.partition.reserve(t.partition.size() + 1);
      for (int x : t.partition) e.partition.push_back(relabel(x));
      e.partition.push_back(r);
      e.quotient = std::move(cur);
      out.push_back(std::move(e));
      if (cap >= 0 && static_cast<long>(out.size()) > cap)
        throw ResourceLimitError("type extension enumeration exceeded cap");
    }
  }
  return out;
}

AssembleResult assemble(const BaseStructure& base, int p,
                        const std::vector<std::pair<std::vector<int>, TypeRep>>& parts) {
  // 1. equality closure over positions
  std::vector<int> uf(static_cast<size_t>(p));
  for (int i = 0; i < p; ++i) uf[static_cast<size_t>(i)] = i;
  std::function<int(int)> find = [&](int x) {
    while (uf[static_cast<size_t>(x)] != x) {
      uf[static_cast<size_t>(x)] = uf[static_cast<size_t>(uf[static_cast<size_t>(x)])];
      x = uf[static_cast<size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int a2, int b2) { uf[static_cast<size_t>(find(a2))] = find(b2); };
  for (const auto& [I, t] : parts) {
    if (static_cast<int>(I.size()) != t.arity())
      return {std::nullopt, "part index set size does not match part arity"};
    for (size_t a2 = 0; a2 < I.size(); ++a2)
      for (size_t b2 = a2 + 1; b2 < I.size(); ++b2)
        if (t.identifies(static_cast<int>(a2), static_cast<int>(b2)))
          unite(I[a2], I[b2]);
  }
  for (const auto& [I, t] : parts)
    for (size_t a2 = 0; a2 < I.size(); ++a2)
      for (size_t b2 = a2 + 1; b2 < I.size(); ++b2)
        if (!t.identifies(static_cast<int>(a2), static_cast<int>(b2)) &&
            find(I[a2]) == find(I[b2]))
          return {std::nullopt, "equality clash between parts"};

  std::vector<int> classes;  // representatives
  for (int i = 0; i < p; ++i)
    if (find(i) == i) classes.push_back(i);
  auto class_of = [&](int pos) {
    int r = find(pos);
    return static_cast<int>(std::find(classes.begin(), classes.end(), r) - classes.begin());
  };
  const int K = static_cast<int>(classes.size());
  const int nsym = static_cast<int>(base.sig.symbols.size());

  // 2. atomic facts on classes, from every part; conflicts are fatal
  std::map<std::pair<int, Tuple>, bool> facts;
  for (const auto& [I, t] : parts) {
    for (int sym = 0; sym < nsym; ++sym) {
      int ar = base.sig.symbols[static_cast<size_t>(sym)].arity;
      for (const Tuple& pos : all_tuples(static_cast<int>(I.size()), ar)) {
        Tuple cls(pos.size()), blk(pos.size());
        for (size_t i = 0; i < pos.size(); ++i) {
          cls[i] = class_of(I[static_cast<size_t>(pos[i])]);
          blk[i] = t.partition[static_cast<size_t>(pos[i])];
        }
        bool val = t.quotient.has(sym, blk);
        auto [it, fresh] = facts.emplace(std::make_pair(sym, cls), val);
        if (!fresh && it->second != val)
          return {std::nullopt, "relation clash between parts on " +
                                    base.sig.symbols[static_cast<size_t>(sym)].name};
      }
    }
  }

  // 3. order the classes by the order facts; must be a strict linear order
  const int ord = base.sig.order_symbol;
  std::vector<int> wins(static_cast<size_t>(K), 0);
  for (int a2 = 0; a2 < K; ++a2)
    for (int b2 = 0; b2 < K; ++b2) {
      if (a2 == b2) continue;
      auto it = facts.find({ord, {a2, b2}});
      if (it == facts.end()) return {std::nullopt, "underdetermined: order between classes missing"};
      if (it->second) ++wins[static_cast<size_t>(b2)];
    }
  // wins[c] = number of classes below c; a linear order makes this a permutation
  std::vector<int> order_pos(static_cast<size_t>(K), -1);
  for (int c = 0; c < K; ++c) {
    int w = wins[static_cast<size_t>(c)];
    if (w < 0 || w >= K || order_pos[static_cast<size_t>(w)] != -1)
      return {std::nullopt, "order clash: class order is not linear"};
    order_pos[static_cast<size_t>(w)] = c;
  }
  // verify pairwise consistency with the sorted sequence
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      int a2 = order_pos[static_cast<size_t>(i)], b2 = order_pos[static_cast<size_t>(j)];
      auto f1 = facts.find({ord, Tuple{a2, b2}});
      auto f2 = facts.find({ord, Tuple{b2, a2}});
      if (f1 == facts.end() || f2 == facts.end() || !f1->second || f2->second)
        return {std::nullopt, "order clash: class order is not linear"};
    }

  // 4. build the quotient in sorted class order; every tuple must be known
  FinStruct q(K, nsym);
  std::vector<int> rank(static_cast<size_t>(K));  // class -> sorted rank
  for (int i = 0; i < K; ++i) rank[static_cast<size_t>(order_pos[static_cast<size_t>(i)])] = i;
  for (int sym = 0; sym < nsym; ++sym) {
    int ar = base.sig.symbols[static_cast<size_t>(sym)].arity;
    for (const Tuple& cls : all_tuples(K, ar)) {
      auto it = facts.find({sym, cls});
      if (it == facts.end())
        return {std::nullopt, "underdetermined: no part covers a " +
                                  base.sig.symbols[static_cast<size_t>(sym)].name + " tuple"};
      if (it->second) {
        Tuple m(cls.size());
        for (size_t i = 0; i < cls.size(); ++i) m[i] = rank[static_cast<size_t>(cls[i])];
        q.rels[static_cast<size_t>(sym)].insert(m);
      }
    }
  }
  if (!base.in_age(q)) return {std::nullopt, "assembled quotient leaves the age"};

  TypeRep t;
  t.partition.resize(static_cast<size_t>(p));
  for (int i = 0; i < p; ++i) t.partition[static_cast<size_t>(i)] = rank[static_cast<size_t>(class_of(i))];
  t.quotient = std::move(q);

  // 5. round-trip guard: every part must be an exact restriction
  for (const auto& [I, pt] : parts)
    if (subtype(t, I) != pt) return {std::nullopt, "assembled type contradicts a part"};
  return {t, ""};
}

}  // namespace ppdef
