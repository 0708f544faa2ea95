#include "doctest.h"
#include "ppdef/formula.hpp"

using namespace ppdef;

namespace {

BaseStructure dlo() { return builtin_base("dense_linear_order"); }

AstPtr parse_ok(const std::string& text, const Signature& sig, int arity) {
  auto r = parse_formula(text, sig, arity);
  REQUIRE(std::holds_alternative<AstPtr>(r));
  return std::get<AstPtr>(r);
}

std::string parse_err(const std::string& text, const Signature& sig, int arity) {
  auto r = parse_formula(text, sig, arity);
  REQUIRE(std::holds_alternative<ParseError>(r));
  return std::get<ParseError>(r).message;
}

}  // namespace

TEST_CASE("parser accepts the documented syntax") {
  BaseStructure b = dlo();
  CHECK(parse_ok("x1 < x2", b.sig, 2));
  CHECK(parse_ok("less(x1, x2)", b.sig, 2));
  CHECK(parse_ok("x1 = x2 | !(x2 < x1)", b.sig, 2));
  CHECK(parse_ok("(x1<x2 & x2<x3) | (x3<x2 & x2<x1)", b.sig, 3));
  CHECK(parse_ok("true", b.sig, 1));
  CHECK(parse_ok("false", b.sig, 1));
}

TEST_CASE("parser rejects malformed input with positions") {
  BaseStructure b = dlo();
  CHECK(!parse_err("exists x2: x1 < x2", b.sig, 2).empty());
  CHECK(!parse_err("x1 < x3", b.sig, 2).empty());       // variable out of range
  CHECK(!parse_err("edge(x1,x2)", b.sig, 2).empty());   // unknown symbol
  CHECK(!parse_err("less(x1)", b.sig, 2).empty());      // arity mismatch
  CHECK(!parse_err("x1 < x2 x2", b.sig, 2).empty());    // trailing input
  CHECK(!parse_err("x1 <", b.sig, 2).empty());
  CHECK(!parse_err("", b.sig, 2).empty());
}

TEST_CASE("evaluation against complete types") {
  BaseStructure b = dlo();
  AstPtr lt = parse_ok("x1 < x2", b.sig, 2);
  AstPtr leq = parse_ok("x1 < x2 | x1 = x2", b.sig, 2);
  int n_lt = 0, n_leq = 0;
  for (const TypeRep& t : enumerate_types(b, 2)) {
    if (eval_on_type(*lt, t)) ++n_lt;
    if (eval_on_type(*leq, t)) ++n_leq;
  }
  CHECK(n_lt == 1);
  CHECK(n_leq == 2);
  CHECK(types_of(*lt, 2, b).size() == 1);
  CHECK(types_of(*leq, 2, b).size() == 2);
}

TEST_CASE("relation definitions expose sorted type sets") {
  BaseStructure b = dlo();
  RelationDef betw = make_relation(
      "Betw", 3, parse_ok("(x1<x2 & x2<x3) | (x3<x2 & x2<x1)", b.sig, 3), b);
  CHECK(betw.type_set.size() == 2);
  for (const TypeRep& t : betw.type_set) CHECK(betw.contains(t));
  RelationDef none = make_relation("None", 1, parse_ok("x1 < x1", b.sig, 1), b);
  CHECK(none.type_set.empty());
}

TEST_CASE("rename_vars substitutes consistently") {
  BaseStructure b = dlo();
  AstPtr lt = parse_ok("x1 < x2", b.sig, 2);
  AstPtr swapped = rename_vars(lt, {1, 0});
  for (const TypeRep& t : enumerate_types(b, 2))
    CHECK(eval_on_type(*swapped, t) == eval_on_type(*lt, subtype(t, {1, 0})));
}

TEST_CASE("round trip through to_string") {
  BaseStructure b = dlo();
  AstPtr f = parse_ok("(x1<x2 & x2<x3) | !(x1 = x3)", b.sig, 3);
  AstPtr g = parse_ok(to_string(*f, b.sig), b.sig, 3);
  for (const TypeRep& t : enumerate_types(b, 3))
    CHECK(eval_on_type(*f, t) == eval_on_type(*g, t));
}
