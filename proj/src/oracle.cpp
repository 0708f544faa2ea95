#include "ppdef/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>

namespace ppdef {

std::string PpFormula::to_string(const std::vector<RelationDef>& theta) const {
  std::string out;
  if (evars > 0) {
    out += "exists";
    for (int i = 0; i < evars; ++i) out += " x" + std::to_string(free_arity + i + 1);
    out += ": ";
  }
  if (atoms.empty()) return out + "true";
  for (size_t a = 0; a < atoms.size(); ++a) {
    if (a) out += " & ";
    const Ast& at = *atoms[a];
    if (at.kind == Ast::Eq) {
      out += "x" + std::to_string(at.vars[0] + 1) + " = x" + std::to_string(at.vars[1] + 1);
    } else {
      out += theta[static_cast<size_t>(at.symbol)].name + "(";
      for (size_t i = 0; i < at.vars.size(); ++i) {
        if (i) out += ",";
        out += "x" + std::to_string(at.vars[static_cast<size_t>(i)] + 1);
      }
      out += ")";
    }
  }
  return out;
}

namespace {

bool eval_pp_atom(const Ast& at, const std::vector<RelationDef>& theta,
                  const TypeRep& t) {
  if (at.kind == Ast::Eq) return t.identifies(at.vars[0], at.vars[1]);
  AstPtr renamed = rename_vars(theta[static_cast<size_t>(at.symbol)].ast, at.vars);
  return eval_on_type(*renamed, t);
}

}  // namespace

std::vector<TypeRep> pp_semantics(const PpFormula& f,
                                  const std::vector<RelationDef>& theta,
                                  const BaseStructure& base) {
  const int w = f.free_arity + f.evars;
  std::vector<int> I(static_cast<size_t>(f.free_arity));
  std::iota(I.begin(), I.end(), 0);
  std::vector<TypeRep> out;
  for (const TypeRep& t : enumerate_types(base, w)) {
    bool ok = true;
    for (const AstPtr& a : f.atoms)
      if (!eval_pp_atom(*a, theta, t)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(subtype(t, I));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

using Bits = std::vector<uint64_t>;

Bits bits_make(size_t n) { return Bits((n + 63) / 64, 0); }
void bits_set(Bits& b, size_t i) { b[i >> 6] |= uint64_t{1} << (i & 63); }
bool bits_get(const Bits& b, size_t i) { return (b[i >> 6] >> (i & 63)) & 1u; }
Bits bits_and(const Bits& a, const Bits& b) {
  Bits r = a;
  for (size_t i = 0; i < r.size(); ++i) r[i] &= b[i];
  return r;
}
bool bits_subset(const Bits& a, const Bits& b) {  // a subseteq b
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

struct Synth {
  const std::vector<RelationDef>& theta;
  const BaseStructure& base;
  int k, w, max_atoms;

  std::vector<TypeRep> types_w;
  std::vector<int> proj_id;      // w-type -> k-type id
  size_t nk = 0;
  Bits target_bits;

  struct Atom {
    AstPtr ast;
    Bits sat;
  };
  std::vector<Atom> atoms;
  std::vector<size_t> chosen;

  Bits project(const Bits& s) const {
    Bits p = bits_make(nk);
    for (size_t t = 0; t < types_w.size(); ++t)
      if (bits_get(s, t)) bits_set(p, static_cast<size_t>(proj_id[t]));
    return p;
  }

  bool dfs(size_t start, const Bits& s, std::optional<PpFormula>& out) {
    Bits p = project(s);
    if (!bits_subset(target_bits, p)) return false;  // lost a required type
    if (p == target_bits) {
      PpFormula f;
      f.free_arity = k;
      f.evars = w - k;
      for (size_t a : chosen) f.atoms.push_back(atoms[a].ast);
      out = f;
      return true;
    }
    if (static_cast<int>(chosen.size()) == max_atoms) return false;
    for (size_t a = start; a < atoms.size(); ++a) {
      Bits s2 = bits_and(s, atoms[a].sat);
      if (s2 == s) continue;  // no-op atom
      chosen.push_back(a);
      if (dfs(a + 1, s2, out)) return true;
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

std::optional<PpFormula> synthesize_pp(const RelationDef& target,
                                       const std::vector<RelationDef>& theta,
                                       const BaseStructure& base, int max_vars,
                                       int max_atoms) {
  const int k = target.arity;
  std::vector<TypeRep> types_k = enumerate_types(base, k);
  std::map<TypeRep, int> kid;
  for (size_t i = 0; i < types_k.size(); ++i) kid.emplace(types_k[i], static_cast<int>(i));

  for (int w = k; w <= max_vars; ++w) {
    Synth sy{theta, base, k, w, max_atoms, {}, {}, 0, {}, {}, {}};
    sy.types_w = enumerate_types(base, w);
    sy.nk = types_k.size();
    std::vector<int> I(static_cast<size_t>(k));
    std::iota(I.begin(), I.end(), 0);
    sy.proj_id.resize(sy.types_w.size());
    for (size_t t = 0; t < sy.types_w.size(); ++t)
      sy.proj_id[t] = kid.at(subtype(sy.types_w[t], I));
    sy.target_bits = bits_make(sy.nk);
    for (const TypeRep& t : target.type_set) bits_set(sy.target_bits, static_cast<size_t>(kid.at(t)));

    // candidate atoms: every theta relation on every var tuple, then equalities
    for (size_t r = 0; r < theta.size(); ++r) {
      const int p = theta[r].arity;
      std::vector<int> args(static_cast<size_t>(p), 0);
      while (true) {
        AstPtr a = mk_atom(static_cast<int>(r), args);
        Bits sat = bits_make(sy.types_w.size());
        for (size_t t = 0; t < sy.types_w.size(); ++t)
          if (eval_pp_atom(*a, theta, sy.types_w[t])) bits_set(sat, t);
        sy.atoms.push_back({std::move(a), std::move(sat)});
        int i = p - 1;
        while (i >= 0 && ++args[static_cast<size_t>(i)] == w) args[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
      }
    }
    for (int a = 0; a < w; ++a)
      for (int b = a + 1; b < w; ++b) {
        AstPtr e = mk_eq(a, b);
        Bits sat = bits_make(sy.types_w.size());
        for (size_t t = 0; t < sy.types_w.size(); ++t)
          if (sy.types_w[t].identifies(a, b)) bits_set(sat, t);
        sy.atoms.push_back({std::move(e), std::move(sat)});
      }

    Bits all = bits_make(sy.types_w.size());
    for (size_t t = 0; t < sy.types_w.size(); ++t) bits_set(all, t);
    std::optional<PpFormula> out;
    if (sy.dfs(0, all, out)) return out;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// brute-force table search on concrete age members

namespace {

struct Brute {
  const BaseStructure& base;
  const Problem& prob;
  FinStruct grid;
  int g = 0, m = 0;
  long budget = 0, nodes = 0;

  std::vector<std::vector<Tuple>> rel_rows;     // per theta relation
  std::vector<Tuple> target_rows;
  std::vector<int> val;                          // flat m-cell -> point, -1 free
  long cell_count = 0;

  struct Instance {
    int rel;
    bool positive;               // image must be in (true) / out (false)
    std::vector<long> cells;     // one per column
    long maxcell;
  };
  std::vector<std::vector<Instance>> by_maxcell;

  std::optional<PartialWitness> found;

  bool row_in(int rel, const Tuple& t) const {
    return prob.theta[static_cast<size_t>(rel)].contains(tuple_type(base, grid, t));
  }

  std::vector<Tuple> rows_of(const RelationDef& rel) const {
    std::vector<Tuple> out;
    for (const Tuple& t : all_tuples(g, rel.arity))
      if (rel.contains(tuple_type(base, grid, t))) out.push_back(t);
    return out;
  }

  long cell_of(const std::vector<const Tuple*>& rows, int col) const {
    long c = 0;
    for (int i = 0; i < m; ++i)
      c = c * g + (*rows[static_cast<size_t>(i)])[static_cast<size_t>(col)];
    return c;
  }

  void add_instances(int r) {
    const RelationDef& rel = prob.theta[static_cast<size_t>(r)];
    const int p = rel.arity;
    const bool reflect = prob.mode == Mode::ex;
    const std::vector<Tuple> all = reflect ? all_tuples(g, p) : std::vector<Tuple>{};
    const std::vector<Tuple>& pos = rel_rows[static_cast<size_t>(r)];
    const std::vector<Tuple>& pool = reflect ? all : pos;
    std::vector<size_t> idx(static_cast<size_t>(m), 0);
    if (pool.empty()) return;
    while (true) {
      std::vector<const Tuple*> rows(static_cast<size_t>(m));
      bool all_in = true;
      for (int i = 0; i < m; ++i) {
        rows[static_cast<size_t>(i)] = &pool[idx[static_cast<size_t>(i)]];
        if (!row_in(r, *rows[static_cast<size_t>(i)])) all_in = false;
      }
      Instance inst;
      inst.rel = r;
      inst.positive = all_in;
      inst.maxcell = -1;
      for (int col = 0; col < p; ++col) {
        long c = cell_of(rows, col);
        inst.cells.push_back(c);
        inst.maxcell = std::max(inst.maxcell, c);
      }
      if (all_in || reflect)
        by_maxcell[static_cast<size_t>(inst.maxcell)].push_back(std::move(inst));
      int i = m - 1;
      while (i >= 0 && ++idx[static_cast<size_t>(i)] == pool.size()) idx[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
    }
  }

  bool instance_ok(const Instance& inst) const {
    Tuple img;
    img.reserve(inst.cells.size());
    for (long c : inst.cells) img.push_back(val[static_cast<size_t>(c)]);
    bool in = row_in(inst.rel, img);
    return inst.positive ? in : !in;
  }

  bool violation(std::vector<Tuple>& rows_out, Tuple& img_out) const {
    if (target_rows.empty()) return false;
    std::vector<size_t> idx(static_cast<size_t>(m), 0);
    const int k = prob.target.arity;
    while (true) {
      std::vector<const Tuple*> rows(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) rows[static_cast<size_t>(i)] = &target_rows[idx[static_cast<size_t>(i)]];
      Tuple img;
      for (int col = 0; col < k; ++col) img.push_back(val[static_cast<size_t>(cell_of(rows, col))]);
      if (!prob.target.contains(tuple_type(base, grid, img))) {
        for (int i = 0; i < m; ++i) rows_out.push_back(*rows[static_cast<size_t>(i)]);
        img_out = img;
        return true;
      }
      int i = m - 1;
      while (i >= 0 && ++idx[static_cast<size_t>(i)] == target_rows.size()) idx[static_cast<size_t>(i--)] = 0;
      if (i < 0) break;
    }
    return false;
  }

  bool dfs(long cell) {
    if (cell == cell_count) {
      std::vector<Tuple> vrows;
      Tuple img;
      if (!violation(vrows, img)) return false;
      PartialWitness w;
      w.grid = grid;
      w.m = m;
      for (long c = 0; c < cell_count; ++c) {
        Tuple key(static_cast<size_t>(m));
        long f = c;
        for (int i = m - 1; i >= 0; --i) {
          key[static_cast<size_t>(i)] = static_cast<int>(f % g);
          f /= g;
        }
        w.table.emplace(std::move(key), val[static_cast<size_t>(c)]);
      }
      w.violation_rows = std::move(vrows);
      found = std::move(w);
      return true;
    }
    for (int v = 0; v < g; ++v) {
      if (++nodes > budget) throw ResourceLimitError("table search budget exhausted");
      val[static_cast<size_t>(cell)] = v;
      bool ok = true;
      if (prob.mode == Mode::ex)  // embeddings are injective
        for (long c = 0; c < cell && ok; ++c)
          if (val[static_cast<size_t>(c)] == v) ok = false;
      for (const Instance& inst : by_maxcell[static_cast<size_t>(cell)]) {
        if (!ok) break;
        if (!instance_ok(inst)) ok = false;
      }
      if (ok && dfs(cell + 1)) return true;
    }
    val[static_cast<size_t>(cell)] = -1;
    return false;
  }

  bool run() {
    cell_count = 1;
    for (int i = 0; i < m; ++i) cell_count *= g;
    val.assign(static_cast<size_t>(cell_count), -1);
    by_maxcell.assign(static_cast<size_t>(cell_count), {});
    rel_rows.clear();
    for (const RelationDef& rel : prob.theta) rel_rows.push_back(rows_of(rel));
    target_rows = rows_of(prob.target);
    for (size_t r = 0; r < prob.theta.size(); ++r) add_instances(static_cast<int>(r));
    return dfs(0);
  }
};

}  // namespace

std::optional<PartialWitness> brute_partial_witness(const Problem& p, int grid_size,
                                                    long node_budget) {
  const int m = p.mode == Mode::pp ? arity_bound(p.target) : 1;
  const int first = std::max(p.target.arity, 2);
  std::optional<PartialWitness> smallest;
  for (int g = first; g <= grid_size; ++g) {
    auto members = p.base->members_of_size(g);
    if (members.empty()) return std::nullopt;
    Brute br{*p.base, p, members.front(), g, m, node_budget};
    try {
      if (!br.run()) return std::nullopt;  // no table at this size: no evidence
    } catch (const ResourceLimitError&) {
      return std::nullopt;
    }
    if (!smallest) smallest = std::move(br.found);
  }
  return smallest;
}

// ---------------------------------------------------------------------------
// certificate replay

namespace {

// grow a pointed age member (injective type) from the constant by repeatedly
// taking a new-block extension, spread deterministically over insertion ranks
TypeRep grow_member(const BaseStructure& base, const TypeRep& c, int free_points) {
  TypeRep t = c;
  for (int step = 0; step < free_points; ++step) {
    std::vector<TypeRep> fresh;
    for (const TypeRep& e : type_extensions(base, t))
      if (e.blocks() == t.blocks() + 1) fresh.push_back(e);
    if (fresh.empty()) throw std::logic_error("replay: no proper extension");
    t = fresh[static_cast<size_t>((5 * step + 3) % static_cast<long>(fresh.size()))];
  }
  return t;
}

struct Replayer {
  const Behavior& b;
  const Problem& prob;
  std::vector<PointedType> members;  // one per coordinate, all positions distinct
  std::vector<int> free_count;
  long grid = 0;
  std::vector<std::vector<bool>> eq;  // glued relation over grid points

  void point(long flat, std::vector<int>& u) const {
    u.assign(static_cast<size_t>(b.m), 0);
    for (int i = b.m - 1; i >= 0; --i) {
      u[static_cast<size_t>(i)] = static_cast<int>(flat % free_count[static_cast<size_t>(i)]);
      flat /= free_count[static_cast<size_t>(i)];
    }
  }

  TypeRep image(const std::vector<std::vector<int>>& pts) const {
    std::vector<PointedType> args(static_cast<size_t>(b.m));
    for (int i = 0; i < b.m; ++i) {
      std::vector<int> I;
      for (const auto& u : pts) I.push_back(u[static_cast<size_t>(i)]);
      args[static_cast<size_t>(i)] = pointed_subtype(members[static_cast<size_t>(i)], I);
    }
    return extend_behavior(b, args);
  }

  bool glued(long x, long y, std::vector<int>& u, std::vector<int>& v) const {
    point(x, u);
    point(y, v);
    return image({u, v}).identifies(0, 1);
  }
};

}  // namespace

ReplayReport replay(const Behavior& b, const Problem& p, const std::vector<int>& sizes) {
  ReplayReport rep;
  auto add = [&](std::string name, bool pass, std::string detail = "") {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };
  if (static_cast<int>(sizes.size()) != b.m) {
    add("setup", false, "one size per coordinate required");
    return rep;
  }

  Replayer r{b, p, {}, {}, 1, {}};
  try {
    for (int i = 0; i < b.m; ++i) {
      TypeRep full = grow_member(*b.base, b.constants[static_cast<size_t>(i)],
                                 sizes[static_cast<size_t>(i)]);
      r.members.push_back(PointedType{b.constants[static_cast<size_t>(i)].arity(), full});
      r.free_count.push_back(sizes[static_cast<size_t>(i)]);
      r.grid *= sizes[static_cast<size_t>(i)];
    }
  } catch (const std::exception& e) {
    add("setup", false, e.what());
    return rep;
  }

  // glued relation from pair images
  std::vector<int> u, v;
  r.eq.assign(static_cast<size_t>(r.grid), std::vector<bool>(static_cast<size_t>(r.grid)));
  try {
    for (long x = 0; x < r.grid; ++x)
      for (long y = 0; y < r.grid; ++y)
        r.eq[static_cast<size_t>(x)][static_cast<size_t>(y)] = r.glued(x, y, u, v);
  } catch (const std::exception& e) {
    add("pair images", false, e.what());
    return rep;
  }
  add("pair images", true);

  bool refl = true, sym = true, trans = true;
  for (long x = 0; x < r.grid; ++x) {
    if (!r.eq[static_cast<size_t>(x)][static_cast<size_t>(x)]) refl = false;
    for (long y = 0; y < r.grid; ++y) {
      if (r.eq[static_cast<size_t>(x)][static_cast<size_t>(y)] !=
          r.eq[static_cast<size_t>(y)][static_cast<size_t>(x)])
        sym = false;
      for (long z = 0; z < r.grid; ++z)
        if (r.eq[static_cast<size_t>(x)][static_cast<size_t>(y)] &&
            r.eq[static_cast<size_t>(y)][static_cast<size_t>(z)] &&
            !r.eq[static_cast<size_t>(x)][static_cast<size_t>(z)])
          trans = false;
    }
  }
  add("glued relation reflexive", refl);
  add("glued relation symmetric", sym);
  add("glued relation transitive", trans);
  if (!(refl && sym && trans)) return rep;

  // class representatives
  std::vector<long> reps;
  for (long x = 0; x < r.grid; ++x) {
    bool fresh = true;
    for (long y : reps)
      if (r.eq[static_cast<size_t>(y)][static_cast<size_t>(x)]) fresh = false;
    if (fresh) reps.push_back(x);
  }

  // quotient substructures stay in the age
  const int qmax = std::min<int>(b.n, static_cast<int>(reps.size()));
  bool quotient_ok = true;
  std::string quotient_why;
  std::vector<size_t> comb;
  std::function<void(size_t, int)> walk = [&](size_t start, int need) {
    if (!quotient_ok) return;
    if (need == 0) {
      std::vector<std::vector<int>> pts;
      for (size_t ci : comb) {
        r.point(reps[ci], u);
        pts.push_back(u);
      }
      TypeRep img = r.image(pts);
      for (size_t i = 0; i < comb.size() && quotient_ok; ++i)
        for (size_t j = i + 1; j < comb.size() && quotient_ok; ++j)
          if (img.identifies(static_cast<int>(i), static_cast<int>(j))) {
            quotient_ok = false;
            quotient_why = "distinct classes merged by a wider image";
          }
      if (quotient_ok && !b.base->in_age(img.quotient)) {
        quotient_ok = false;
        quotient_why = "quotient substructure outside the age";
      }
      return;
    }
    for (size_t i = start; i + static_cast<size_t>(need) <= reps.size(); ++i) {
      comb.push_back(i);
      walk(i + 1, need - 1);
      comb.pop_back();
    }
  };
  try {
    for (int q = 1; q <= qmax && quotient_ok; ++q) walk(0, q);
  } catch (const std::exception& e) {
    quotient_ok = false;
    quotient_why = e.what();
  }
  add("quotient substructures in age", quotient_ok, quotient_why);

  // theta preserved on the grid
  bool pres_ok = true;
  std::string pres_why;
  try {
    for (const RelationDef& rel : p.theta) {
      const int ar = rel.arity;
      // coordinate-wise relation rows among free points
      std::vector<std::vector<Tuple>> rows(static_cast<size_t>(b.m));
      std::vector<std::vector<Tuple>> nonrows(static_cast<size_t>(b.m));
      for (int i = 0; i < b.m; ++i)
        for (const Tuple& t : all_tuples(r.free_count[static_cast<size_t>(i)], ar)) {
          TypeRep tt = forget_constants(pointed_subtype(r.members[static_cast<size_t>(i)], t));
          (rel.contains(tt) ? rows : nonrows)[static_cast<size_t>(i)].push_back(t);
        }
      auto run_block = [&](const std::vector<std::vector<Tuple>>& pool, bool want_in) {
        std::vector<size_t> idx(static_cast<size_t>(b.m), 0);
        for (int i = 0; i < b.m; ++i)
          if (pool[static_cast<size_t>(i)].empty()) return;
        while (pres_ok) {
          std::vector<std::vector<int>> pts(static_cast<size_t>(ar),
                                            std::vector<int>(static_cast<size_t>(b.m)));
          for (int i = 0; i < b.m; ++i) {
            const Tuple& t = pool[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]];
            for (int col = 0; col < ar; ++col)
              pts[static_cast<size_t>(col)][static_cast<size_t>(i)] = t[static_cast<size_t>(col)];
          }
          TypeRep img = r.image(pts);
          if (rel.contains(img) != want_in) {
            pres_ok = false;
            pres_why = rel.name;
          }
          int i = b.m - 1;
          while (i >= 0 &&
                 ++idx[static_cast<size_t>(i)] == pool[static_cast<size_t>(i)].size())
            idx[static_cast<size_t>(i--)] = 0;
          if (i < 0) break;
        }
      };
      run_block(rows, true);
      if (p.mode == Mode::ex) run_block(nonrows, false);
    }
  } catch (const std::exception& e) {
    pres_ok = false;
    pres_why = e.what();
  }
  add("theta preserved on the grid", pres_ok, pres_why);

  if (p.mode == Mode::ex) {
    // gluing must be trivial for an embedding counterexample
    bool inj = true;
    for (long x = 0; x < r.grid && inj; ++x)
      for (long y = x + 1; y < r.grid && inj; ++y)
        if (r.eq[static_cast<size_t>(x)][static_cast<size_t>(y)]) inj = false;
    add("grid map injective", inj);
  }

  bool viol = false;
  std::string viol_why;
  try {
    viol = check_violation(b, p.target);
  } catch (const std::exception& e) {
    viol_why = e.what();
  }
  add("target violated at the constants", viol, viol_why);
  return rep;
}

}  // namespace ppdef
