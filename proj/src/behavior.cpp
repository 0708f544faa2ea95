#include "ppdef/behavior.hpp"

#include <algorithm>
#include <functional>

namespace ppdef {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::pp:
      return "pp";
    case Mode::ep:
      return "ep";
    case Mode::ex:
      return "ex";
    case Mode::identity:
      return "identity";
  }
  return "?";
}

long Behavior::cell_count() const {
  long c = 1;
  for (const auto& s : spaces) c *= static_cast<long>(s.size());
  return c;
}

long Behavior::cell_index(const std::vector<int>& idx) const {
  long flat = 0;
  for (int i = 0; i < m; ++i)
    flat = flat * static_cast<long>(spaces[static_cast<size_t>(i)].size()) + idx[static_cast<size_t>(i)];
  return flat;
}

void Behavior::unflatten(long flat, std::vector<int>& idx) const {
  idx.assign(static_cast<size_t>(m), 0);
  for (int i = m - 1; i >= 0; --i) {
    long sz = static_cast<long>(spaces[static_cast<size_t>(i)].size());
    idx[static_cast<size_t>(i)] = static_cast<int>(flat % sz);
    flat /= sz;
  }
}

const TypeRep& Behavior::value_at(const std::vector<int>& idx) const {
  return values[static_cast<size_t>(table[static_cast<size_t>(cell_index(idx))])];
}

int Behavior::space_index(int coord, const PointedType& p) const {
  const auto& mp = space_maps_[static_cast<size_t>(coord)];
  auto it = mp.find(p);
  return it == mp.end() ? -1 : it->second;
}

void Behavior::build_maps() {
  space_maps_.assign(spaces.size(), {});
  for (size_t i = 0; i < spaces.size(); ++i)
    for (size_t a = 0; a < spaces[i].size(); ++a)
      space_maps_[i].emplace(spaces[i][a], static_cast<int>(a));
}

namespace {

// all nonempty subsets of {0..n-1} as sorted index vectors, by size then lex
std::vector<std::vector<int>> nonempty_subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int sz = 1; sz <= n; ++sz) {
    std::vector<int> idx(static_cast<size_t>(sz));
    for (int i = 0; i < sz; ++i) idx[static_cast<size_t>(i)] = i;
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

}  // namespace

std::optional<CompatConflict> check_compatibility(const Behavior& b) {
  const auto subs = nonempty_subsets(b.n);
  // key encoding -> (value subtype encoding, witness cell, witness subset)
  std::map<std::string, std::tuple<std::string, std::vector<int>, std::vector<int>>> seen;
  std::vector<int> idx;
  const long cells = b.cell_count();
  for (long flat = 0; flat < cells; ++flat) {
    b.unflatten(flat, idx);
    const TypeRep& val = b.values[static_cast<size_t>(b.table[static_cast<size_t>(flat)])];
    for (const auto& I : subs) {
      std::string key = std::to_string(I.size());
      for (int i = 0; i < b.m; ++i) {
        key += '/';
        key += pointed_subtype(b.spaces[static_cast<size_t>(i)][static_cast<size_t>(idx[static_cast<size_t>(i)])], I).encode();
      }
      std::string vsub = subtype(val, I).encode();
      auto [it, fresh] = seen.emplace(std::move(key), std::make_tuple(vsub, idx, I));
      if (!fresh && std::get<0>(it->second) != vsub) {
        CompatConflict c;
        c.cell_p = std::get<1>(it->second);
        c.I = std::get<2>(it->second);
        c.cell_q = idx;
        c.J = I;
        c.note = "projection mismatch";
        return c;
      }
    }
  }
  return std::nullopt;
}

std::optional<CompatConflict> check_equality_respect(const Behavior& b) {
  std::vector<int> idx;
  const long cells = b.cell_count();
  for (long flat = 0; flat < cells; ++flat) {
    b.unflatten(flat, idx);
    const TypeRep& val = b.values[static_cast<size_t>(b.table[static_cast<size_t>(flat)])];
    for (int i = 0; i < b.n; ++i)
      for (int j = i + 1; j < b.n; ++j) {
        bool all_eq = true;
        for (int c = 0; c < b.m && all_eq; ++c) {
          const PointedType& p = b.spaces[static_cast<size_t>(c)][static_cast<size_t>(idx[static_cast<size_t>(c)])];
          if (!p.full.identifies(p.k + i, p.k + j)) all_eq = false;
        }
        if (all_eq && !val.identifies(i, j)) {
          CompatConflict c;
          c.cell_p = idx;
          c.I = {i, j};
          c.note = "value drops an equality shared by every argument";
          return c;
        }
      }
  }
  return std::nullopt;
}

TypeRep extend_behavior(const Behavior& b, const std::vector<PointedType>& args) {
  const int p = args[0].free_arity();
  if (p == b.n) {
    std::vector<int> idx(static_cast<size_t>(b.m));
    for (int i = 0; i < b.m; ++i) {
      int a = b.space_index(i, args[static_cast<size_t>(i)]);
      if (a < 0) throw std::logic_error("extend: argument not in pointed space");
      idx[static_cast<size_t>(i)] = a;
    }
    return b.value_at(idx);
  }
  if (p < b.n) {
    // pad every argument to free arity n with arbitrary extensions; the
    // projection of the looked-up value is independent of the choice by
    // compatibility
    std::vector<PointedType> padded = args;
    for (int i = 0; i < b.m; ++i) {
      while (padded[static_cast<size_t>(i)].free_arity() < b.n) {
        auto exts = type_extensions(*b.base, padded[static_cast<size_t>(i)].full);
        padded[static_cast<size_t>(i)] =
            PointedType{padded[static_cast<size_t>(i)].k, exts.front()};
      }
    }
    TypeRep img = extend_behavior(b, padded);
    std::vector<int> I(static_cast<size_t>(p));
    for (int i2 = 0; i2 < p; ++i2) I[static_cast<size_t>(i2)] = i2;
    return subtype(img, I);
  }
  // p > n: assemble from every n-subset of the free positions
  std::vector<std::pair<std::vector<int>, TypeRep>> parts;
  for (const auto& I : nonempty_subsets(p)) {
    if (static_cast<int>(I.size()) != b.n) continue;
    std::vector<PointedType> sub(static_cast<size_t>(b.m));
    for (int i = 0; i < b.m; ++i)
      sub[static_cast<size_t>(i)] = pointed_subtype(args[static_cast<size_t>(i)], I);
    parts.emplace_back(I, extend_behavior(b, sub));
  }
  AssembleResult r = assemble(*b.base, p, parts);
  if (!r.type)
    throw std::logic_error("extend: inconsistent assembly from a compatible behavior: " +
                           r.error);
  return *r.type;
}

bool check_violation(const Behavior& b, const RelationDef& target) {
  std::vector<PointedType> selfs(static_cast<size_t>(b.m));
  for (int i = 0; i < b.m; ++i)
    selfs[static_cast<size_t>(i)] = constant_self_type(b.constants[static_cast<size_t>(i)]);
  return !target.contains(extend_behavior(b, selfs));
}

std::optional<std::string> check_preservation(const Behavior& b,
                                              const std::vector<RelationDef>& theta,
                                              Mode mode) {
  for (const RelationDef& rel : theta) {
    const int p = rel.arity;
    std::vector<std::vector<PointedType>> spaces_p(static_cast<size_t>(b.m));
    for (int i = 0; i < b.m; ++i)
      spaces_p[static_cast<size_t>(i)] =
          pointed_space(*b.base, b.constants[static_cast<size_t>(i)], p);
    std::vector<size_t> idx(static_cast<size_t>(b.m), 0);
    while (true) {
      std::vector<PointedType> args(static_cast<size_t>(b.m));
      bool all_in = true;
      for (int i = 0; i < b.m; ++i) {
        args[static_cast<size_t>(i)] = spaces_p[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]];
        if (!rel.contains(forget_constants(args[static_cast<size_t>(i)]))) all_in = false;
      }
      if (all_in || mode == Mode::ex) {
        TypeRep img = extend_behavior(b, args);
        if (all_in && !rel.contains(img)) return rel.name;
        if (mode == Mode::ex && !all_in && rel.contains(img)) return rel.name;
      }
      if (mode == Mode::ex) {
        // injectivity: equality pattern must be preserved exactly
        TypeRep in = forget_constants(args[0]);
        TypeRep img = extend_behavior(b, args);
        for (int i = 0; i < p; ++i)
          for (int j = i + 1; j < p; ++j)
            if (in.identifies(i, j) != img.identifies(i, j))
              return rel.name + " (equality pattern)";
      }
      int c = b.m - 1;
      while (c >= 0 && ++idx[static_cast<size_t>(c)] == spaces_p[static_cast<size_t>(c)].size()) {
        idx[static_cast<size_t>(c)] = 0;
        --c;
      }
      if (c < 0) break;
    }
  }
  return std::nullopt;
}

}  // namespace ppdef
