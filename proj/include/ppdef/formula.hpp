#ifndef PPDEF_FORMULA_HPP
#define PPDEF_FORMULA_HPP

#include <memory>
#include <variant>

#include "ppdef/types.hpp"

namespace ppdef {

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

// Quantifier-free formula over the base signature plus equality.
// Variables are 0-based position indices (surface syntax x1.. is 1-based).
struct Ast {
  enum Kind { Atom, Eq, Not, And, Or, TrueK, FalseK } kind = TrueK;
  int symbol = -1;         // Atom: signature symbol index
  std::vector<int> vars;   // Atom arguments; Eq uses vars[0], vars[1]
  AstPtr lhs, rhs;         // Not uses lhs only
};

AstPtr mk_atom(int symbol, std::vector<int> vars);
AstPtr mk_eq(int a, int b);
AstPtr mk_not(AstPtr a);
AstPtr mk_and(AstPtr a, AstPtr b);
AstPtr mk_or(AstPtr a, AstPtr b);
AstPtr mk_const(bool v);

struct ParseError {
  size_t pos = 0;
  std::string message;
};

// Parses "x1 < x2 & !(edge(x1,x3) | x2 = x3)" style syntax. Variables must
// be x1..x<arity>; quantifier keywords are rejected.
std::variant<AstPtr, ParseError> parse_formula(const std::string& text,
                                               const Signature& sig, int arity);

// Truth of a quantifier-free formula on a complete type.
bool eval_on_type(const Ast& f, const TypeRep& t);

// The set of k-types satisfying f, sorted.
std::vector<TypeRep> types_of(const Ast& f, int k, const BaseStructure& base);

// f with every variable v replaced by map[v].
AstPtr rename_vars(const AstPtr& f, const std::vector<int>& map);

std::string to_string(const Ast& f, const Signature& sig);

// Named relation with its defining formula and precomputed type set.
struct RelationDef {
  std::string name;
  int arity = 0;
  AstPtr ast;
  std::vector<TypeRep> type_set;  // sorted

  bool contains(const TypeRep& t) const;
};

RelationDef make_relation(std::string name, int arity, AstPtr ast,
                          const BaseStructure& base);

}  // namespace ppdef

#endif
