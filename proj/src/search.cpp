#include "ppdef/search.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>

namespace ppdef {

namespace {

struct LimitHit {
  std::string note;
};

// all nonempty proper subsets of {0..n-1}, by size then lex
std::vector<std::vector<int>> proper_subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int sz = 1; sz < n; ++sz) {
    std::vector<int> idx(static_cast<size_t>(sz));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      out.push_back(idx);
      int i = sz - 1;
      while (i >= 0 && idx[static_cast<size_t>(i)] == n - sz + i) --i;
      if (i < 0) break;
      ++idx[static_cast<size_t>(i)];
      for (int j = i + 1; j < sz; ++j)
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
  }
  return out;
}

struct BitSet {
  static int words(int bits) { return (bits + 63) / 64; }
  static bool get(const std::vector<uint64_t>& w, size_t off, int i) {
    return (w[off + static_cast<size_t>(i >> 6)] >> (i & 63)) & 1u;
  }
  static void set(std::vector<uint64_t>& w, size_t off, int i) {
    w[off + static_cast<size_t>(i >> 6)] |= uint64_t{1} << (i & 63);
  }
  static int count(const std::vector<uint64_t>& w, size_t off, int nw) {
    int c = 0;
    for (int k = 0; k < nw; ++k) c += __builtin_popcountll(w[off + static_cast<size_t>(k)]);
    return c;
  }
  static int first(const std::vector<uint64_t>& w, size_t off, int nw) {
    for (int k = 0; k < nw; ++k)
      if (w[off + static_cast<size_t>(k)])
        return k * 64 + __builtin_ctzll(w[off + static_cast<size_t>(k)]);
    return -1;
  }
};

struct Engine {
  const SearchProblem& sp;
  const BaseStructure& base;
  int m, n;

  std::vector<std::vector<TypeRep>> vals;     // vals[k], k = 1..n
  std::vector<std::map<TypeRep, int>> vmap;   // per arity
  std::vector<std::vector<int>> subs;         // proper nonempty subsets
  std::vector<std::vector<int>> proj;         // proj[s][v]: value id of subtype
  // allowed[s][w]: bitmask over n-values v with proj[s][v] == w
  std::vector<std::vector<std::vector<uint64_t>>> allowed;

  std::vector<std::vector<PointedType>> spaces;
  // per coordinate, per space element, per subset: interned pointed-subtype id
  std::vector<std::vector<std::vector<int>>> psub;

  int V = 0, W = 0;  // n-value count, words per domain

  long cells = 0;
  std::vector<int> parent;           // union-find over cells (identity mode)
  std::vector<uint64_t> dom;         // domains, indexed by cell * W (reps only used)
  std::vector<int> domsize;

  struct KeyInfo {
    int arity = 0;
    int words = 0;
    std::vector<uint64_t> cand;
    int value = -1;
    std::vector<std::pair<int, int>> cells;  // (rep, subset)
  };
  std::vector<KeyInfo> keys;
  std::map<std::vector<int>, int> key_ids;               // [subset-arity, pids...] -> key
  std::vector<std::vector<std::pair<int, int>>> rep_keys;  // per cell: (subset, key)

  std::vector<int> value_order;  // cell decision order over n-value ids

  bool post_violation = false;   // violation could not be installed structurally
  bool post_preservation = false;

  long nodes = 0;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  // trail
  struct TrailEntry {
    int kind;  // 0 = dom word, 1 = key cand word, 2 = key value, 3 = domsize
    long a;
    size_t b;
    uint64_t old;
  };
  std::vector<TrailEntry> trail;

  explicit Engine(const SearchProblem& p) : sp(p), base(*p.base), m(static_cast<int>(p.constants.size())), n(p.base->n_param) {}

  int find(int c) {
    while (parent[static_cast<size_t>(c)] != c) {
      parent[static_cast<size_t>(c)] = parent[static_cast<size_t>(parent[static_cast<size_t>(c)])];
      c = parent[static_cast<size_t>(c)];
    }
    return c;
  }

  void check_limits() {
    if (nodes > sp.limits.node_budget) throw LimitHit{"node budget exhausted"};
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    if (ms > sp.limits.time_budget_ms) throw LimitHit{"time budget exhausted"};
  }

  void check_time() {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    if (ms > sp.limits.time_budget_ms) throw LimitHit{"time budget exhausted"};
  }

  void build_values() {
    vals.assign(static_cast<size_t>(n) + 1, {});
    vmap.assign(static_cast<size_t>(n) + 1, {});
    for (int k = 1; k <= n; ++k) {
      vals[static_cast<size_t>(k)] = enumerate_types(base, k, sp.limits.space_cap);
      for (size_t i = 0; i < vals[static_cast<size_t>(k)].size(); ++i)
        vmap[static_cast<size_t>(k)].emplace(vals[static_cast<size_t>(k)][i], static_cast<int>(i));
    }
    V = static_cast<int>(vals[static_cast<size_t>(n)].size());
    W = BitSet::words(V);
    subs = proper_subsets(n);
    proj.assign(subs.size(), std::vector<int>(static_cast<size_t>(V)));
    allowed.assign(subs.size(), {});
    for (size_t s = 0; s < subs.size(); ++s) {
      int k = static_cast<int>(subs[s].size());
      allowed[s].assign(vals[static_cast<size_t>(k)].size(),
                        std::vector<uint64_t>(static_cast<size_t>(W), 0));
      for (int v = 0; v < V; ++v) {
        int w = vmap[static_cast<size_t>(k)].at(subtype(vals[static_cast<size_t>(n)][static_cast<size_t>(v)], subs[s]));
        proj[s][static_cast<size_t>(v)] = w;
        BitSet::set(allowed[s][static_cast<size_t>(w)], 0, v);
      }
    }
  }

  void build_spaces() {
    spaces.resize(static_cast<size_t>(m));
    // enforce the caps as the coordinates come in: the running cell product
    // and the total stored pointed types, so a hopeless instance bails out
    // before the remaining coordinates are materialized
    cells = 1;
    long stored = 0;
    for (int i = 0; i < m; ++i) {
      spaces[static_cast<size_t>(i)] =
          pointed_space(base, sp.constants[static_cast<size_t>(i)], n, sp.limits.space_cap);
      check_time();
      stored += static_cast<long>(spaces[static_cast<size_t>(i)].size());
      if (sp.limits.space_cap >= 0 && stored > sp.limits.space_cap)
        throw LimitHit{"pointed spaces too large"};
      cells *= static_cast<long>(spaces[static_cast<size_t>(i)].size());
      if (cells > sp.limits.max_cells) throw LimitHit{"cell table too large"};
    }
    // intern pointed subtypes per coordinate; ids shared across arities are
    // disambiguated by the subset arity stored in the key prefix
    psub.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      std::map<PointedType, int> interned;
      auto& tab = psub[static_cast<size_t>(i)];
      tab.assign(spaces[static_cast<size_t>(i)].size(),
                 std::vector<int>(subs.size()));
      for (size_t a = 0; a < spaces[static_cast<size_t>(i)].size(); ++a)
        for (size_t s = 0; s < subs.size(); ++s) {
          PointedType q = pointed_subtype(spaces[static_cast<size_t>(i)][a], subs[s]);
          auto [it, fresh] = interned.emplace(std::move(q), static_cast<int>(interned.size()));
          tab[a][s] = it->second;
        }
    }
  }

  void build_network() {
    parent.resize(static_cast<size_t>(cells));
    std::iota(parent.begin(), parent.end(), 0);
    if (sp.identity_constraint) {
      // sigma(t1,t2,t3,t3) = sigma(t2,t3,t1,t2) over plain 3-types (m = 4)
      long S = static_cast<long>(spaces[0].size());
      for (long a = 0; a < S; ++a)
        for (long b2 = 0; b2 < S; ++b2)
          for (long c = 0; c < S; ++c) {
            int u = find(static_cast<int>(((a * S + b2) * S + c) * S + c));
            int v = find(static_cast<int>(((b2 * S + c) * S + a) * S + b2));
            if (u != v) parent[static_cast<size_t>(std::max(u, v))] = std::min(u, v);
          }
      for (long c = 0; c < cells; ++c) find(static_cast<int>(c));
    }

    dom.assign(static_cast<size_t>(cells) * static_cast<size_t>(W), 0);
    domsize.assign(static_cast<size_t>(cells), 0);
    for (long c = 0; c < cells; ++c) {
      if (find(static_cast<int>(c)) != c) continue;
      for (int v = 0; v < V; ++v) BitSet::set(dom, static_cast<size_t>(c) * W, v);
      domsize[static_cast<size_t>(c)] = V;
    }

    rep_keys.assign(static_cast<size_t>(cells), {});
    std::vector<int> idx;
    std::vector<int> kv;
    for (long c = 0; c < cells; ++c) {
      int rep = find(static_cast<int>(c));
      unflatten(c, idx);
      for (size_t s = 0; s < subs.size(); ++s) {
        kv.clear();
        kv.push_back(static_cast<int>(s));
        for (int i = 0; i < m; ++i)
          kv.push_back(psub[static_cast<size_t>(i)][static_cast<size_t>(idx[static_cast<size_t>(i)])][s]);
        auto [it, fresh] = key_ids.emplace(kv, static_cast<int>(keys.size()));
        if (fresh) {
          KeyInfo ki;
          ki.arity = static_cast<int>(subs[s].size());
          int nk = static_cast<int>(vals[static_cast<size_t>(ki.arity)].size());
          ki.words = BitSet::words(nk);
          ki.cand.assign(static_cast<size_t>(ki.words), 0);
          for (int w = 0; w < nk; ++w) BitSet::set(ki.cand, 0, w);
          keys.push_back(std::move(ki));
        }
        keys[static_cast<size_t>(it->second)].cells.emplace_back(rep, static_cast<int>(s));
        rep_keys[static_cast<size_t>(rep)].emplace_back(static_cast<int>(s), it->second);
      }
    }
  }

  void unflatten(long flat, std::vector<int>& idx) const {
    idx.assign(static_cast<size_t>(m), 0);
    for (int i = m - 1; i >= 0; --i) {
      long sz = static_cast<long>(spaces[static_cast<size_t>(i)].size());
      idx[static_cast<size_t>(i)] = static_cast<int>(flat % sz);
      flat /= sz;
    }
  }

  // --- trail primitives -----------------------------------------------

  void set_dom_word(long c, int w, uint64_t nv) {
    size_t off = static_cast<size_t>(c) * W + static_cast<size_t>(w);
    trail.push_back({0, c, static_cast<size_t>(w), dom[off]});
    dom[off] = nv;
  }
  void set_domsize(long c, int nv) {
    trail.push_back({3, c, 0, static_cast<uint64_t>(domsize[static_cast<size_t>(c)])});
    domsize[static_cast<size_t>(c)] = nv;
  }
  void set_key_word(int k, int w, uint64_t nv) {
    trail.push_back({1, k, static_cast<size_t>(w), keys[static_cast<size_t>(k)].cand[static_cast<size_t>(w)]});
    keys[static_cast<size_t>(k)].cand[static_cast<size_t>(w)] = nv;
  }
  void set_key_value(int k, int v) {
    trail.push_back({2, k, 0, static_cast<uint64_t>(keys[static_cast<size_t>(k)].value)});
    keys[static_cast<size_t>(k)].value = v;
  }
  void rewind(size_t mark) {
    while (trail.size() > mark) {
      TrailEntry& e = trail.back();
      switch (e.kind) {
        case 0:
          dom[static_cast<size_t>(e.a) * W + e.b] = e.old;
          break;
        case 1:
          keys[static_cast<size_t>(e.a)].cand[e.b] = e.old;
          break;
        case 2:
          keys[static_cast<size_t>(e.a)].value = static_cast<int>(e.old);
          break;
        case 3:
          domsize[static_cast<size_t>(e.a)] = static_cast<int>(e.old);
          break;
      }
      trail.pop_back();
    }
  }

  // --- propagation ------------------------------------------------------

  std::vector<long> cell_queue;
  std::vector<int> key_queue;

  bool shrink_cell(long rep, const uint64_t* mask) {
    size_t off = static_cast<size_t>(rep) * W;
    bool changed = false;
    for (int w = 0; w < W; ++w) {
      uint64_t nv = dom[off + static_cast<size_t>(w)] & mask[w];
      if (nv != dom[off + static_cast<size_t>(w)]) {
        set_dom_word(rep, w, nv);
        changed = true;
      }
    }
    if (!changed) return true;
    int sz = BitSet::count(dom, off, W);
    set_domsize(rep, sz);
    if (sz == 0) return false;
    cell_queue.push_back(rep);
    return true;
  }

  bool shrink_key(int k, const std::vector<uint64_t>& mask) {
    KeyInfo& ki = keys[static_cast<size_t>(k)];
    bool changed = false;
    for (int w = 0; w < ki.words; ++w) {
      uint64_t nv = ki.cand[static_cast<size_t>(w)] & mask[static_cast<size_t>(w)];
      if (nv != ki.cand[static_cast<size_t>(w)]) {
        set_key_word(k, w, nv);
        changed = true;
      }
    }
    if (!changed) return true;
    if (BitSet::count(ki.cand, 0, ki.words) == 0) return false;
    key_queue.push_back(k);
    return true;
  }

  bool propagate() {
    std::vector<uint64_t> u;
    while (!cell_queue.empty() || !key_queue.empty()) {
      if (!key_queue.empty()) {
        int k = key_queue.back();
        key_queue.pop_back();
        KeyInfo& ki = keys[static_cast<size_t>(k)];
        int cnt = BitSet::count(ki.cand, 0, ki.words);
        if (cnt == 0) return false;
        if (cnt == 1 && ki.value < 0) {
          int v = BitSet::first(ki.cand, 0, ki.words);
          set_key_value(k, v);
          for (auto [rep, s] : ki.cells)
            if (!shrink_cell(rep, allowed[static_cast<size_t>(s)][static_cast<size_t>(v)].data()))
              return false;
        }
        continue;
      }
      long rep = cell_queue.back();
      cell_queue.pop_back();
      size_t off = static_cast<size_t>(rep) * W;
      for (auto [s, k] : rep_keys[static_cast<size_t>(rep)]) {
        KeyInfo& ki = keys[static_cast<size_t>(k)];
        u.assign(static_cast<size_t>(ki.words), 0);
        for (int w = 0; w < W; ++w) {
          uint64_t bits = dom[off + static_cast<size_t>(w)];
          while (bits) {
            int v = w * 64 + __builtin_ctzll(bits);
            bits &= bits - 1;
            int p = proj[static_cast<size_t>(s)][static_cast<size_t>(v)];
            BitSet::set(u, 0, p);
          }
        }
        if (!shrink_key(k, u)) return false;
      }
    }
    return true;
  }

  // --- unary pre-restrictions -------------------------------------------

  // bitmask over arity-k values with types in the given set
  std::vector<uint64_t> type_set_mask(int k, const std::vector<TypeRep>& set) {
    int nk = static_cast<int>(vals[static_cast<size_t>(k)].size());
    std::vector<uint64_t> out(static_cast<size_t>(BitSet::words(nk)), 0);
    for (const TypeRep& t : set) {
      auto it = vmap[static_cast<size_t>(k)].find(t);
      if (it != vmap[static_cast<size_t>(k)].end()) BitSet::set(out, 0, it->second);
    }
    return out;
  }
  static std::vector<uint64_t> complement(std::vector<uint64_t> mask, int bits) {
    for (auto& w : mask) w = ~w;
    int rest = bits & 63;
    if (rest) mask.back() &= (uint64_t{1} << rest) - 1;
    return mask;
  }

  bool restrict_diagonal() {
    // value must identify free positions identified by every argument
    std::vector<int> idx;
    std::vector<uint64_t> mask(static_cast<size_t>(W));
    for (long c = 0; c < cells; ++c) {
      unflatten(c, idx);
      bool restricted = false;
      std::fill(mask.begin(), mask.end(), ~uint64_t{0});
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          bool all_eq = true;
          for (int q = 0; q < m && all_eq; ++q) {
            const PointedType& p = spaces[static_cast<size_t>(q)][static_cast<size_t>(idx[static_cast<size_t>(q)])];
            if (!p.full.identifies(p.k + i, p.k + j)) all_eq = false;
          }
          if (!all_eq) continue;
          restricted = true;
          for (int w2 = 0; w2 < W; ++w2) {
            uint64_t keep = 0;
            for (int b = 0; b < 64; ++b) {
              int v = w2 * 64 + b;
              if (v >= V) break;
              if (vals[static_cast<size_t>(n)][static_cast<size_t>(v)].identifies(i, j))
                keep |= uint64_t{1} << b;
            }
            mask[static_cast<size_t>(w2)] &= keep;
          }
        }
      if (restricted && !shrink_cell(find(static_cast<int>(c)), mask.data())) return false;
    }
    return true;
  }

  bool restrict_ex_injectivity() {
    // equality pattern preserved exactly: cells and keys
    std::vector<int> idx;
    std::vector<uint64_t> mask;
    auto pattern_mask = [&](const TypeRep& in, int k) {
      int nk = static_cast<int>(vals[static_cast<size_t>(k)].size());
      std::vector<uint64_t> out(static_cast<size_t>(BitSet::words(nk)), 0);
      for (int v = 0; v < nk; ++v) {
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
          for (int j = i + 1; j < k && ok; ++j)
            if (vals[static_cast<size_t>(k)][static_cast<size_t>(v)].identifies(i, j) != in.identifies(i, j))
              ok = false;
        if (ok) BitSet::set(out, 0, v);
      }
      return out;
    };
    for (long c = 0; c < cells; ++c) {
      unflatten(c, idx);
      const PointedType& p = spaces[0][static_cast<size_t>(idx[0])];
      mask = pattern_mask(forget_constants(p), n);
      if (!shrink_cell(find(static_cast<int>(c)), mask.data())) return false;
    }
    return true;
  }

  // preservation over keys of arity p (p < n) and cells (p == n); pointed
  // subtypes are recovered from an id -> pointed type table per coordinate
  bool restrict_preservation() {
    // rebuild id -> pointed type per coordinate
    std::vector<std::map<int, PointedType>> by_id(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
      for (size_t a = 0; a < spaces[static_cast<size_t>(i)].size(); ++a)
        for (size_t s = 0; s < subs.size(); ++s)
          by_id[static_cast<size_t>(i)].emplace(
              psub[static_cast<size_t>(i)][a][s],
              pointed_subtype(spaces[static_cast<size_t>(i)][a], subs[s]));

    for (const RelationDef& rel : sp.theta) {
      int p = rel.arity;
      if (p > n) {
        post_preservation = true;
        continue;
      }
      auto in_mask = type_set_mask(p, rel.type_set);
      auto out_mask = complement(in_mask, static_cast<int>(vals[static_cast<size_t>(p)].size()));
      if (p == n) {
        std::vector<int> idx;
        for (long c = 0; c < cells; ++c) {
          unflatten(c, idx);
          bool all_in = true;
          for (int i = 0; i < m && all_in; ++i)
            if (!rel.contains(forget_constants(
                    spaces[static_cast<size_t>(i)][static_cast<size_t>(idx[static_cast<size_t>(i)])])))
              all_in = false;
          if (all_in) {
            if (!shrink_cell(find(static_cast<int>(c)), in_mask.data())) return false;
          } else if (sp.mode == Mode::ex) {
            if (!shrink_cell(find(static_cast<int>(c)), out_mask.data())) return false;
          }
        }
      } else {
        for (const auto& [kv, kid] : key_ids) {
          if (static_cast<int>(subs[static_cast<size_t>(kv[0])].size()) != p) continue;
          bool all_in = true;
          for (int i = 0; i < m && all_in; ++i)
            if (!rel.contains(forget_constants(
                    by_id[static_cast<size_t>(i)].at(kv[static_cast<size_t>(i) + 1]))))
              all_in = false;
          if (all_in) {
            if (!shrink_key(kid, in_mask)) return false;
          } else if (sp.mode == Mode::ex) {
            if (!shrink_key(kid, out_mask)) return false;
          }
        }
      }
    }
    return true;
  }

  bool restrict_violation() {
    if (!sp.target) return true;
    const RelationDef& tgt = *sp.target;
    int k = tgt.arity;
    if (k > n) {
      post_violation = true;
      return true;
    }
    auto bad = complement(type_set_mask(k, tgt.type_set),
                          static_cast<int>(vals[static_cast<size_t>(k)].size()));
    if (k == n) {
      std::vector<int> idx(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        PointedType self = constant_self_type(sp.constants[static_cast<size_t>(i)]);
        auto it = std::find(spaces[static_cast<size_t>(i)].begin(),
                            spaces[static_cast<size_t>(i)].end(), self);
        if (it == spaces[static_cast<size_t>(i)].end()) {
          post_violation = true;
          return true;
        }
        idx[static_cast<size_t>(i)] = static_cast<int>(it - spaces[static_cast<size_t>(i)].begin());
      }
      long flat = 0;
      for (int i = 0; i < m; ++i)
        flat = flat * static_cast<long>(spaces[static_cast<size_t>(i)].size()) + idx[static_cast<size_t>(i)];
      return shrink_cell(find(static_cast<int>(flat)), bad.data());
    }
    // k < n: locate the key made of the constants' self subtypes
    int s_id = -1;
    for (size_t s = 0; s < subs.size(); ++s) {
      if (static_cast<int>(subs[s].size()) != k) continue;
      bool prefix = true;
      for (int i = 0; i < k; ++i)
        if (subs[s][static_cast<size_t>(i)] != i) prefix = false;
      if (prefix) {
        s_id = static_cast<int>(s);
        break;
      }
    }
    std::vector<int> kv;
    kv.push_back(s_id);
    for (int i = 0; i < m; ++i) {
      PointedType self = constant_self_type(sp.constants[static_cast<size_t>(i)]);
      // find its interned id by scanning psub via a space element that has it
      int pid = -1;
      for (size_t a = 0; a < spaces[static_cast<size_t>(i)].size() && pid < 0; ++a)
        if (pointed_subtype(spaces[static_cast<size_t>(i)][a], subs[static_cast<size_t>(s_id)]) == self)
          pid = psub[static_cast<size_t>(i)][a][static_cast<size_t>(s_id)];
      if (pid < 0) {
        post_violation = true;
        return true;
      }
      kv.push_back(pid);
    }
    auto it = key_ids.find(kv);
    if (it == key_ids.end()) {
      post_violation = true;
      return true;
    }
    return shrink_key(it->second, bad);
  }

  // --- assignment extraction and final validation ------------------------

  Behavior make_behavior() {
    Behavior b;
    b.base = sp.base;
    b.m = m;
    b.n = n;
    b.constants = sp.constants;
    b.spaces = spaces;
    b.values = vals[static_cast<size_t>(n)];
    b.table.resize(static_cast<size_t>(cells));
    for (long c = 0; c < cells; ++c) {
      long rep = find(static_cast<int>(c));
      b.table[static_cast<size_t>(c)] = BitSet::first(dom, static_cast<size_t>(rep) * W, W);
    }
    b.build_maps();
    return b;
  }

  bool final_checks(const Behavior& b, std::string& why) {
    if (auto c = check_compatibility(b)) {
      why = "compatibility: " + c->note;
      return false;
    }
    if (auto c = check_equality_respect(b)) {
      why = "equality respect: " + c->note;
      return false;
    }
    if (sp.mode != Mode::identity) {
      if (!check_violation(b, *sp.target)) {
        why = "does not violate the target";
        return false;
      }
      if (auto r = check_preservation(b, sp.theta, sp.mode)) {
        why = "preservation of " + *r;
        return false;
      }
    } else {
      if (auto r = check_preservation(b, sp.theta, Mode::pp)) {
        why = "preservation of " + *r;
        return false;
      }
    }
    return true;
  }

  // --- search -------------------------------------------------------------

  bool dfs(std::optional<Behavior>& out) {
    check_limits();
    long pick = -1;
    int best = V + 1;
    for (long c = 0; c < cells; ++c) {
      if (find(static_cast<int>(c)) != c) continue;
      int sz = domsize[static_cast<size_t>(c)];
      if (sz > 1 && sz < best) {
        best = sz;
        pick = c;
      }
    }
    if (pick < 0) {
      Behavior b = make_behavior();
      std::string why;
      if (final_checks(b, why)) {
        out = std::move(b);
        return true;
      }
      return false;
    }
    size_t off = static_cast<size_t>(pick) * W;
    std::vector<uint64_t> single(static_cast<size_t>(W));
    for (int v : value_order) {
      if (!BitSet::get(dom, off, v)) continue;
      ++nodes;
      size_t mark = trail.size();
      std::fill(single.begin(), single.end(), 0);
      BitSet::set(single, 0, v);
      cell_queue.clear();
      key_queue.clear();
      if (shrink_cell(pick, single.data()) && propagate()) {
        if (dfs(out)) return true;
      }
      rewind(mark);
    }
    return false;
  }

  SearchOutcome run() {
    SearchOutcome out;
    try {
      build_values();
      build_spaces();
      build_network();

      value_order.resize(static_cast<size_t>(V));
      std::iota(value_order.begin(), value_order.end(), 0);
      if (sp.mode == Mode::ep) {
        // try values with fewer blocks (coarser equality) first
        std::stable_sort(value_order.begin(), value_order.end(), [&](int a, int b2) {
          return vals[static_cast<size_t>(n)][static_cast<size_t>(a)].blocks() <
                 vals[static_cast<size_t>(n)][static_cast<size_t>(b2)].blocks();
        });
      } else if (sp.mode == Mode::ex) {
        std::stable_sort(value_order.begin(), value_order.end(), [&](int a, int b2) {
          return vals[static_cast<size_t>(n)][static_cast<size_t>(a)].blocks() >
                 vals[static_cast<size_t>(n)][static_cast<size_t>(b2)].blocks();
        });
      }

      cell_queue.clear();
      key_queue.clear();
      bool feasible = restrict_diagonal();
      if (feasible && sp.mode == Mode::ex) feasible = restrict_ex_injectivity();
      if (feasible) feasible = restrict_preservation();
      if (feasible) feasible = restrict_violation();
      if (feasible) {
        // domsize bookkeeping for untouched reps was done in build_network
        for (long c = 0; c < cells; ++c)
          if (find(static_cast<int>(c)) == c)
            domsize[static_cast<size_t>(c)] = BitSet::count(dom, static_cast<size_t>(c) * W, W);
        feasible = propagate();
      }
      if (feasible) {
        trail.clear();  // root restrictions are permanent
        std::optional<Behavior> w;
        if (dfs(w)) {
          out.kind = SearchOutcome::Witness;
          out.witness = std::move(w);
        } else {
          out.kind = SearchOutcome::Exhausted;
        }
      } else {
        out.kind = SearchOutcome::Exhausted;
      }
    } catch (const LimitHit& lh) {
      out.kind = SearchOutcome::Limit;
      out.note = lh.note;
    } catch (const ResourceLimitError& re) {
      out.kind = SearchOutcome::Limit;
      out.note = re.what();
    }
    out.stats.nodes = nodes;
    out.stats.cells = cells;
    out.stats.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    return out;
  }
};

}  // namespace

SearchOutcome search(const SearchProblem& sp) {
  Engine e(sp);
  return e.run();
}

}  // namespace ppdef
