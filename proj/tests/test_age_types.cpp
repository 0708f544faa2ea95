#include <algorithm>
#include <set>

#include "doctest.h"
#include "ppdef/types.hpp"

using namespace ppdef;

namespace {

// independent count of weak orders on n labeled points:
// a(n) = sum_{k=1..n} C(n,k) a(n-k)
long weak_orders(int n) {
  std::vector<long> a(static_cast<size_t>(n) + 1, 0);
  a[0] = 1;
  std::vector<std::vector<long>> C(static_cast<size_t>(n) + 1,
                                   std::vector<long>(static_cast<size_t>(n) + 1, 0));
  for (int i = 0; i <= n; ++i) {
    C[static_cast<size_t>(i)][0] = 1;
    for (int j = 1; j <= i; ++j)
      C[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          C[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] +
          C[static_cast<size_t>(i - 1)][static_cast<size_t>(j)];
  }
  for (int m = 1; m <= n; ++m)
    for (int k = 1; k <= m; ++k)
      a[static_cast<size_t>(m)] += C[static_cast<size_t>(m)][static_cast<size_t>(k)] *
                                   a[static_cast<size_t>(m - k)];
  return a[static_cast<size_t>(n)];
}

// ordered surjections n -> b blocks: b! * S(n,b); computed directly
long ordered_surjections(int n, int b) {
  // inclusion-exclusion: sum_{i=0..b} (-1)^i C(b,i) (b-i)^n
  long total = 0;
  auto binom = [](int x, int y) {
    long r = 1;
    for (int i = 1; i <= y; ++i) r = r * (x - i + 1) / i;
    return r;
  };
  for (int i = 0; i <= b; ++i) {
    long pw = 1;
    for (int j = 0; j < n; ++j) pw *= (b - i);
    total += (i % 2 ? -1 : 1) * binom(b, i) * pw;
  }
  return total;
}

}  // namespace

TEST_CASE("builtin bases validate and expose the expected parameters") {
  for (const std::string& name : builtin_names()) {
    BaseStructure b = builtin_base(name);
    CHECK(b.name == name);
    CHECK(b.s == 3);
    CHECK(b.n_param == 3);
    CHECK(b.sig.order_symbol >= 0);
  }
  CHECK_THROWS_AS(builtin_base("no_such_base"), std::out_of_range);
}

TEST_CASE("dense linear order age membership") {
  BaseStructure b = builtin_base("dense_linear_order");
  const int less = b.sig.find("less");
  REQUIRE(less >= 0);

  FinStruct chain(3, 1);
  chain.add(less, {0, 1});
  chain.add(less, {1, 2});
  chain.add(less, {0, 2});
  CHECK(b.in_age(chain));

  FinStruct cycle(3, 1);
  cycle.add(less, {0, 1});
  cycle.add(less, {1, 2});
  cycle.add(less, {2, 0});
  CHECK_FALSE(b.in_age(cycle));

  FinStruct untotal(2, 1);  // two incomparable points
  CHECK_FALSE(b.in_age(untotal));

  FinStruct loop(1, 1);
  loop.add(less, {0, 0});
  CHECK_FALSE(b.in_age(loop));
}

TEST_CASE("members_of_size is canonical and complete") {
  BaseStructure dlo = builtin_base("dense_linear_order");
  for (int n = 1; n <= 5; ++n) {
    auto ms = dlo.members_of_size(n);
    CHECK(ms.size() == 1);  // one linear order per size
  }
  BaseStructure org = builtin_base("ordered_random_graph");
  CHECK(org.members_of_size(2).size() == 2);   // edge or no edge on a 2-chain
  CHECK(org.members_of_size(3).size() == 8);   // graphs on a 3-chain
  auto ms = org.members_of_size(3);
  std::set<std::string> enc;
  for (const auto& m : ms) {
    CHECK(org.in_age(m));
    enc.insert(m.encode());
  }
  CHECK(enc.size() == ms.size());
}

TEST_CASE("type space sizes match the independent counting oracles") {
  BaseStructure dlo = builtin_base("dense_linear_order");
  // weak orders: 1, 3, 13, 75, 541
  for (int n = 1; n <= 5; ++n)
    CHECK(static_cast<long>(enumerate_types(dlo, n).size()) == weak_orders(n));

  BaseStructure org = builtin_base("ordered_random_graph");
  // ordered surjections onto b blocks times graphs on b ordered vertices
  for (int n = 1; n <= 3; ++n) {
    long expect = 0;
    for (int b = 1; b <= n; ++b) {
      long graphs = 1;
      for (int i = 0; i < b * (b - 1) / 2; ++i) graphs *= 2;
      expect += ordered_surjections(n, b) * graphs;
    }
    CHECK(static_cast<long>(enumerate_types(org, n).size()) == expect);
  }
  CHECK(enumerate_types(org, 2).size() == 5);
  CHECK(enumerate_types(org, 3).size() == 61);
}

TEST_CASE("validate_base rejects malformed inputs") {
  Signature sig;
  auto r = validate_base(sig, {});
  REQUIRE(std::holds_alternative<std::vector<Diagnostic>>(r));

  // drop the order axioms: missing totality must be caught by the audit
  Signature s2;
  s2.symbols.push_back({"less", 2});
  s2.order_symbol = 0;
  std::vector<FinStruct> bounds;
  FinStruct loop(1, 1);
  loop.add(0, {0, 0});
  bounds.push_back(loop);  // only irreflexivity is forced
  auto r2 = validate_base(s2, bounds);
  REQUIRE(std::holds_alternative<std::vector<Diagnostic>>(r2));
  bool found = false;
  for (const auto& d : std::get<std::vector<Diagnostic>>(r2))
    if (d.code == "OrderNotTotal") found = true;
  CHECK(found);
}

TEST_CASE("subtype and assemble round-trip") {
  BaseStructure dlo = builtin_base("dense_linear_order");
  // p starts at 3: singleton restrictions cannot determine a 2-type
  for (int p = 3; p <= 4; ++p) {
    for (const TypeRep& t : enumerate_types(dlo, p)) {
      // rebuild t from all (p-1)-subsets
      std::vector<std::pair<std::vector<int>, TypeRep>> parts;
      std::vector<int> I;
      for (int drop = 0; drop < p; ++drop) {
        I.clear();
        for (int i = 0; i < p; ++i)
          if (i != drop) I.push_back(i);
        parts.emplace_back(I, subtype(t, I));
      }
      AssembleResult a = assemble(dlo, p, parts);
      REQUIRE(a.type.has_value());
      CHECK(*a.type == t);
    }
  }
}

TEST_CASE("assemble detects clashes") {
  BaseStructure dlo = builtin_base("dense_linear_order");
  auto t2 = enumerate_types(dlo, 2);
  // find the two strict orders x<y and y<x
  TypeRep lt, gt;
  for (const TypeRep& t : t2) {
    if (t.blocks() != 2) continue;
    if (t.partition[0] == 0 && t.partition[1] == 1) lt = t;
    if (t.partition[0] == 1 && t.partition[1] == 0) gt = t;
  }
  // inconsistent triangle: 0<1, 1<2, 2<0
  std::vector<std::pair<std::vector<int>, TypeRep>> parts = {
      {{0, 1}, lt}, {{1, 2}, lt}, {{0, 2}, gt}};
  AssembleResult a = assemble(dlo, 3, parts);
  CHECK_FALSE(a.type.has_value());
  CHECK_FALSE(a.error.empty());
}

TEST_CASE("type_extensions project back onto the original type") {
  BaseStructure org = builtin_base("ordered_random_graph");
  std::vector<int> I = {0, 1};
  for (const TypeRep& t : enumerate_types(org, 2)) {
    auto exts = type_extensions(org, t);
    CHECK(!exts.empty());
    std::set<std::string> seen;
    for (const TypeRep& e : exts) {
      CHECK(subtype(e, I) == t);
      CHECK(seen.insert(e.encode()).second);  // no duplicates
    }
  }
}
