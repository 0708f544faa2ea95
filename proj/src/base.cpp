#include "ppdef/base.hpp"

#include <algorithm>
#include <functional>

namespace ppdef {

struct BaseStructure::Cache {
  std::mutex mu;
  std::unordered_map<std::string, bool> in_age;
  std::vector<std::vector<FinStruct>> by_size;  // canonical members per size
};

BaseStructure::BaseStructure() : cache_(std::make_shared<Cache>()) {}

bool BaseStructure::in_age(const FinStruct& a) const {
  std::string key = a.encode();
  {
    std::lock_guard<std::mutex> lk(cache_->mu);
    auto it = cache_->in_age.find(key);
    if (it != cache_->in_age.end()) return it->second;
  }
  bool ok = true;
  for (const FinStruct& b : bounds) {
    if (embeds(b, a)) {
      ok = false;
      break;
    }
  }
  std::lock_guard<std::mutex> lk(cache_->mu);
  cache_->in_age.emplace(std::move(key), ok);
  return ok;
}

namespace {

// All subsets of the given candidate tuples added on top of base_struct,
// filtered by pred. Throws when the candidate list is too long.
void for_each_relation_choice(const FinStruct& start,
                              const std::vector<std::pair<int, Tuple>>& cands,
                              const std::function<void(const FinStruct&)>& fn) {
  if (cands.size() > 24)
    throw ResourceLimitError("relation choice space too large (" +
                             std::to_string(cands.size()) + " candidate tuples)");
  const uint64_t total = 1ull << cands.size();
  for (uint64_t mask = 0; mask < total; ++mask) {
    FinStruct cur = start;
    for (size_t i = 0; i < cands.size(); ++i)
      if (mask & (1ull << i)) cur.add(cands[i].first, cands[i].second);
    fn(cur);
  }
}

}  // namespace

std::vector<FinStruct> BaseStructure::members_of_size(int b, long cap) const {
  {
    std::lock_guard<std::mutex> lk(cache_->mu);
    if (static_cast<int>(cache_->by_size.size()) > b) return cache_->by_size[static_cast<size_t>(b)];
  }
  // Build sizes up to b incrementally: every canonical member of size k
  // restricts to a canonical member of size k-1 by dropping its largest
  // point, so extending by a new maximal point is complete.
  std::vector<std::vector<FinStruct>> local;
  {
    std::lock_guard<std::mutex> lk(cache_->mu);
    local = cache_->by_size;
  }
  if (local.empty()) {
    FinStruct empty(0, static_cast<int>(sig.symbols.size()));
    local.push_back({empty});
  }
  long produced = 0;
  while (static_cast<int>(local.size()) <= b) {
    int nb = static_cast<int>(local.size());  // new size
    std::vector<FinStruct> next;
    for (const FinStruct& parent : local.back()) {
      FinStruct grown = parent;
      grown.size = nb;
      // canonical order: new point nb-1 above everything
      for (int i = 0; i < nb - 1; ++i) grown.add(sig.order_symbol, {i, nb - 1});
      std::vector<std::pair<int, Tuple>> cands;
      for (size_t sym = 0; sym < sig.symbols.size(); ++sym) {
        if (static_cast<int>(sym) == sig.order_symbol) continue;
        for (const Tuple& t : all_tuples(nb, sig.symbols[sym].arity)) {
          bool mentions_new = false;
          for (int x : t)
            if (x == nb - 1) mentions_new = true;
          if (mentions_new) cands.emplace_back(static_cast<int>(sym), t);
        }
      }
      for_each_relation_choice(grown, cands, [&](const FinStruct& cur) {
        if (!in_age(cur)) return;
        ++produced;
        if (cap >= 0 && produced > cap)
          throw ResourceLimitError("age enumeration exceeded cap");
        next.push_back(cur);
      });
    }
    std::sort(next.begin(), next.end());
    local.push_back(std::move(next));
  }
  std::lock_guard<std::mutex> lk(cache_->mu);
  if (local.size() > cache_->by_size.size()) cache_->by_size = std::move(local);
  return cache_->by_size[static_cast<size_t>(b)];
}

std::vector<FinStruct> BaseStructure::enumerate_age(int n, long cap) const {
  std::vector<FinStruct> out;
  for (int b = 0; b <= n; ++b) {
    const auto& ms = members_of_size(b, cap);
    out.insert(out.end(), ms.begin(), ms.end());
    if (cap >= 0 && static_cast<long>(out.size()) > cap)
      throw ResourceLimitError("age enumeration exceeded cap");
  }
  return out;
}

namespace {

// Enumerates every structure of the given size over sig (all relation
// contents). Throws if the tuple space is too large.
void for_each_structure(const Signature& sig, int size,
                        const std::function<void(const FinStruct&)>& fn) {
  std::vector<std::pair<int, Tuple>> cands;
  for (size_t sym = 0; sym < sig.symbols.size(); ++sym)
    for (const Tuple& t : all_tuples(size, sig.symbols[sym].arity))
      cands.emplace_back(static_cast<int>(sym), t);
  FinStruct empty(size, static_cast<int>(sig.symbols.size()));
  for_each_relation_choice(empty, cands, fn);
}

bool order_is_linear(const FinStruct& a, int ord) {
  for (int i = 0; i < a.size; ++i)
    if (a.has(ord, {i, i})) return false;
  for (int i = 0; i < a.size; ++i)
    for (int j = i + 1; j < a.size; ++j)
      if (a.has(ord, {i, j}) == a.has(ord, {j, i})) return false;
  for (int i = 0; i < a.size; ++i)
    for (int j = 0; j < a.size; ++j)
      for (int k = 0; k < a.size; ++k) {
        if (i == j || j == k || i == k) continue;
        if (a.has(ord, {i, j}) && a.has(ord, {j, k}) && !a.has(ord, {i, k})) return false;
      }
  return true;
}

}  // namespace

std::variant<BaseStructure, std::vector<Diagnostic>> validate_base(
    const Signature& sig, std::vector<FinStruct> bounds, std::string name) {
  std::vector<Diagnostic> diags;
  if (sig.symbols.empty()) diags.push_back({"EmptySignature", "signature has no symbols"});
  if (sig.order_symbol < 0 || sig.order_symbol >= static_cast<int>(sig.symbols.size()) ||
      sig.symbols[static_cast<size_t>(sig.order_symbol)].arity != 2)
    diags.push_back({"BadOrderSymbol", "distinguished order symbol must be binary"});
  if (!diags.empty()) return diags;

  int s = 1;
  for (size_t bi = 0; bi < bounds.size(); ++bi) {
    const FinStruct& b = bounds[bi];
    if (b.size < 1)
      diags.push_back({"MalformedBound", "bound " + std::to_string(bi) + " has size < 1"});
    if (b.rels.size() != sig.symbols.size()) {
      diags.push_back({"MalformedBound",
                       "bound " + std::to_string(bi) + " has wrong relation count"});
      continue;
    }
    s = std::max(s, b.size);
    for (size_t sym = 0; sym < b.rels.size(); ++sym) {
      for (const Tuple& t : b.rels[sym]) {
        if (static_cast<int>(t.size()) != sig.symbols[sym].arity) {
          diags.push_back({"MalformedBound", "bound " + std::to_string(bi) +
                                                 ": tuple arity mismatch for " +
                                                 sig.symbols[sym].name});
          continue;
        }
        for (int x : t)
          if (x < 0 || x >= b.size)
            diags.push_back({"MalformedBound", "bound " + std::to_string(bi) +
                                                   ": point index out of range"});
      }
    }
  }
  if (!diags.empty()) return diags;

  BaseStructure base;
  base.sig = sig;
  base.bounds = std::move(bounds);
  base.name = std::move(name);
  base.s = s;
  base.n_param = std::max({s, sig.max_arity(), 3});

  // Exhaustive order-linearity audit over all structures up to size max(s,3).
  int audit = std::max(s, 3);
  std::optional<Diagnostic> bad;
  try {
    for (int sz = 1; sz <= audit && !bad; ++sz) {
      for_each_structure(sig, sz, [&](const FinStruct& a) {
        if (bad) return;
        if (base.in_age(a) && !order_is_linear(a, sig.order_symbol))
          bad = Diagnostic{"OrderNotTotal",
                           "age member of size " + std::to_string(sz) +
                               " has a non-linear order: " + a.encode()};
      });
    }
  } catch (const ResourceLimitError&) {
    // Signature too wide for the exhaustive audit; linearity then rests on
    // the caller's trusted metadata, like homogeneity already does.
  }
  if (bad) return std::vector<Diagnostic>{*bad};
  return base;
}

namespace {

// Minimal (under induced embedding) structures of size <= 3 violating the
// predicate, in deterministic order. Used to produce builtin bound lists.
std::vector<FinStruct> minimal_bad(const Signature& sig,
                                   const std::function<bool(const FinStruct&)>& good) {
  std::vector<FinStruct> kept;
  for (int sz = 1; sz <= 3; ++sz) {
    std::vector<FinStruct> bad;
    for_each_structure(sig, sz, [&](const FinStruct& a) {
      if (!good(a)) bad.push_back(a);
    });
    std::sort(bad.begin(), bad.end());
    for (const FinStruct& b : bad) {
      bool dominated = false;
      for (const FinStruct& k : kept)
        if (embeds(k, b)) {
          dominated = true;
          break;
        }
      if (!dominated) kept.push_back(b);
    }
  }
  return kept;
}

BaseStructure make_dlo() {
  Signature sig;
  sig.symbols = {{"less", 2}};
  sig.order_symbol = 0;
  auto good = [&](const FinStruct& a) { return order_is_linear(a, 0); };
  auto res = validate_base(sig, minimal_bad(sig, good), "dense_linear_order");
  return std::get<BaseStructure>(res);
}

BaseStructure make_org() {
  Signature sig;
  sig.symbols = {{"less", 2}, {"edge", 2}};
  sig.order_symbol = 0;
  auto good = [&](const FinStruct& a) {
    if (!order_is_linear(a, 0)) return false;
    for (int i = 0; i < a.size; ++i)
      if (a.has(1, {i, i})) return false;
    for (int i = 0; i < a.size; ++i)
      for (int j = i + 1; j < a.size; ++j)
        if (a.has(1, {i, j}) != a.has(1, {j, i})) return false;
    return true;
  };
  auto res = validate_base(sig, minimal_bad(sig, good), "ordered_random_graph");
  return std::get<BaseStructure>(res);
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"dense_linear_order", "ordered_random_graph"};
}

BaseStructure builtin_base(const std::string& name) {
  if (name == "dense_linear_order") {
    static const BaseStructure b = make_dlo();
    return b;
  }
  if (name == "ordered_random_graph") {
    static const BaseStructure b = make_org();
    return b;
  }
  throw std::out_of_range("unknown builtin base: " + name);
}

}  // namespace ppdef
