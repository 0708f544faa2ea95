#include <sstream>

#include "doctest.h"
#include "ppdef/certificate.hpp"

using namespace ppdef;

namespace {

std::shared_ptr<const BaseStructure> dlo() {
  static auto b = std::make_shared<BaseStructure>(builtin_base("dense_linear_order"));
  return b;
}

RelationDef rel(const std::string& name, int arity, const std::string& text) {
  auto r = parse_formula(text, dlo()->sig, arity);
  REQUIRE(std::holds_alternative<AstPtr>(r));
  return make_relation(name, arity, std::get<AstPtr>(r), *dlo());
}

}  // namespace

TEST_CASE("synthesize_pp recovers the projection definition of <") {
  RelationDef lt = rel("Lt", 2, "x1 < x2");
  RelationDef chain = rel("Chain", 3, "x1<x2 & x2<x3");
  auto f = synthesize_pp(lt, {chain}, *dlo(), 3, 6);
  REQUIRE(f.has_value());
  CHECK(f->free_arity == 2);
  CHECK(f->evars == 1);
  CHECK(pp_semantics(*f, {chain}, *dlo()) == lt.type_set);
}

TEST_CASE("synthesize_pp fails honestly where no pp definition exists") {
  RelationDef lt = rel("Lt", 2, "x1 < x2");
  RelationDef leq = rel("Leq", 2, "x1 < x2 | x1 = x2");
  CHECK_FALSE(synthesize_pp(leq, {lt}, *dlo(), 4, 6).has_value());
  CHECK_FALSE(synthesize_pp(lt, {leq}, *dlo(), 4, 6).has_value());
}

TEST_CASE("pp_semantics of the empty conjunction is the full space") {
  PpFormula f;
  f.free_arity = 2;
  f.evars = 0;
  CHECK(pp_semantics(f, {}, *dlo()).size() == enumerate_types(*dlo(), 2).size());
}

TEST_CASE("brute table search finds the componentwise minimum on the 3-chain") {
  Problem p;
  p.base = dlo();
  p.mode = Mode::pp;
  p.target = rel("Betw", 3, "(x1<x2 & x2<x3) | (x3<x2 & x2<x1)");
  p.theta = {rel("Lt", 2, "x1 < x2")};
  auto w = brute_partial_witness(p, 4);
  REQUIRE(w.has_value());
  CHECK(w->m == 2);
  CHECK(w->grid.size == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(w->table.at({i, j}) == std::min(i, j));
  CHECK_FALSE(w->violation_rows.empty());
}

TEST_CASE("brute table search respects the every-size requirement") {
  // x1<x2 is pp-definable from the chain relation, so no genuine witness
  // exists; small grids admit spurious tables which must be filtered out
  Problem p;
  p.base = dlo();
  p.mode = Mode::pp;
  p.target = rel("Lt", 2, "x1 < x2");
  p.theta = {rel("Chain", 3, "x1<x2 & x2<x3")};
  CHECK_FALSE(brute_partial_witness(p, 4).has_value());
}

TEST_CASE("replay validates genuine witnesses and rejects corrupted ones") {
  Problem p;
  p.base = dlo();
  p.mode = Mode::pp;
  p.target = rel("Leq", 2, "x1 < x2 | x1 = x2");
  p.theta = {rel("Lt", 2, "x1 < x2")};
  Decision d = decide(p);
  REQUIRE(d.verdict == Verdict::NotDefinable);
  REQUIRE(d.witness.has_value());

  const int k = p.target.arity;
  for (int extra : {1, 2}) {
    std::vector<int> sizes(static_cast<size_t>(d.witness->m), k + extra);
    ReplayReport rep = replay(*d.witness, p, sizes);
    for (const auto& c : rep.checks) {
      INFO(c.name << " " << c.detail);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("certificates round-trip and detect tampering") {
  Problem p;
  p.base = dlo();
  p.mode = Mode::pp;
  p.target = rel("Leq", 2, "x1 < x2 | x1 = x2");
  p.theta = {rel("Lt", 2, "x1 < x2")};
  Decision d = decide(p);
  REQUIRE(d.witness.has_value());
  std::vector<int> sizes(static_cast<size_t>(d.witness->m), 4);
  ReplayReport rep = replay(*d.witness, p, sizes);
  REQUIRE(rep.all_pass());

  std::ostringstream os;
  write_certificate(os, p, *d.witness, rep, sizes);
  std::string text = os.str();

  {
    std::istringstream is(text);
    CertificateCheck c = check_certificate(is, p);
    INFO(c.message);
    CHECK(c.ok);
  }
  {
    // tamper with one table entry
    std::string bad = text;
    auto pos = bad.find("\nrow 32: ");
    REQUIRE(pos != std::string::npos);
    pos += 9;
    bad[pos] = bad[pos] == '0' ? '1' : '0';
    std::istringstream is(bad);
    CHECK_FALSE(check_certificate(is, p).ok);
  }
  {
    // a different problem must be rejected by the digest
    Problem q = p;
    q.mode = Mode::ep;
    std::istringstream is(text);
    CHECK_FALSE(check_certificate(is, q).ok);
  }
}
