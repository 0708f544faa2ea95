#include "ppdef/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ppdef {

AstPtr mk_atom(int symbol, std::vector<int> vars) {
  auto a = std::make_shared<Ast>();
  a->kind = Ast::Atom;
  a->symbol = symbol;
  a->vars = std::move(vars);
  return a;
}
AstPtr mk_eq(int x, int y) {
  auto a = std::make_shared<Ast>();
  a->kind = Ast::Eq;
  a->vars = {x, y};
  return a;
}
AstPtr mk_not(AstPtr c) {
  auto a = std::make_shared<Ast>();
  a->kind = Ast::Not;
  a->lhs = std::move(c);
  return a;
}
AstPtr mk_and(AstPtr l, AstPtr r) {
  auto a = std::make_shared<Ast>();
  a->kind = Ast::And;
  a->lhs = std::move(l);
  a->rhs = std::move(r);
  return a;
}
AstPtr mk_or(AstPtr l, AstPtr r) {
  auto a = std::make_shared<Ast>();
  a->kind = Ast::Or;
  a->lhs = std::move(l);
  a->rhs = std::move(r);
  return a;
}
AstPtr mk_const(bool v) {
  auto a = std::make_shared<Ast>();
  a->kind = v ? Ast::TrueK : Ast::FalseK;
  return a;
}

namespace {

struct Parser {
  const std::string& text;
  const Signature& sig;
  int arity;
  size_t pos = 0;
  std::optional<ParseError> err;

  void fail(size_t at, std::string msg) {
    if (!err) err = ParseError{at, std::move(msg)};
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }

  int variable(const std::string& name, size_t at) {
    if (name.size() < 2 || name[0] != 'x') {
      fail(at, "expected variable x1..x" + std::to_string(arity));
      return -1;
    }
    for (size_t i = 1; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
        fail(at, "expected variable x1..x" + std::to_string(arity));
        return -1;
      }
    int v = std::stoi(name.substr(1));
    if (v < 1 || v > arity) {
      fail(at, "variable " + name + " out of range (arity " + std::to_string(arity) + ")");
      return -1;
    }
    return v - 1;
  }

  AstPtr primary() {
    skip_ws();
    size_t at = pos;
    if (eat('(')) {
      AstPtr inner = disj();
      if (!inner) return nullptr;
      if (!eat(')')) {
        fail(pos, "expected ')'");
        return nullptr;
      }
      return inner;
    }
    if (eat('!')) {
      AstPtr inner = primary();
      if (!inner) return nullptr;
      return mk_not(std::move(inner));
    }
    std::string name = ident();
    if (name.empty()) {
      fail(at, "expected atom");
      return nullptr;
    }
    if (name == "true") return mk_const(true);
    if (name == "false") return mk_const(false);
    if (name == "exists" || name == "forall") {
      fail(at, "quantifiers are not allowed in quantifier-free definitions");
      return nullptr;
    }
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      int sym = sig.find(name);
      if (sym < 0) {
        fail(at, "unknown relation symbol '" + name + "'");
        return nullptr;
      }
      ++pos;  // '('
      std::vector<int> vars;
      while (true) {
        size_t vat = pos;
        std::string vn = ident();
        int v = variable(vn, vat);
        if (v < 0) return nullptr;
        vars.push_back(v);
        if (eat(',')) continue;
        if (eat(')')) break;
        fail(pos, "expected ',' or ')'");
        return nullptr;
      }
      if (static_cast<int>(vars.size()) != sig.symbols[static_cast<size_t>(sym)].arity) {
        fail(at, "arity mismatch for '" + name + "'");
        return nullptr;
      }
      return mk_atom(sym, std::move(vars));
    }
    // infix: x < y or x = y
    int v1 = variable(name, at);
    if (v1 < 0) return nullptr;
    skip_ws();
    if (eat('<')) {
      size_t vat = pos;
      int v2 = variable(ident(), vat);
      if (v2 < 0) return nullptr;
      return mk_atom(sig.order_symbol, {v1, v2});
    }
    if (eat('=')) {
      size_t vat = pos;
      int v2 = variable(ident(), vat);
      if (v2 < 0) return nullptr;
      return mk_eq(v1, v2);
    }
    fail(pos, "expected '<' or '=' after variable");
    return nullptr;
  }

  AstPtr conj() {
    AstPtr l = primary();
    if (!l) return nullptr;
    while (true) {
      skip_ws();
      if (!eat('&')) return l;
      AstPtr r = primary();
      if (!r) return nullptr;
      l = mk_and(std::move(l), std::move(r));
    }
  }

  AstPtr disj() {
    AstPtr l = conj();
    if (!l) return nullptr;
    while (true) {
      skip_ws();
      if (!eat('|')) return l;
      AstPtr r = conj();
      if (!r) return nullptr;
      l = mk_or(std::move(l), std::move(r));
    }
  }
};

}  // namespace

std::variant<AstPtr, ParseError> parse_formula(const std::string& text,
                                               const Signature& sig, int arity) {
  Parser p{text, sig, arity};
  AstPtr a = p.disj();
  if (a) {
    p.skip_ws();
    if (p.pos != text.size()) p.fail(p.pos, "unexpected trailing input");
  }
  if (p.err) return *p.err;
  return a;
}

bool eval_on_type(const Ast& f, const TypeRep& t) {
  switch (f.kind) {
    case Ast::TrueK:
      return true;
    case Ast::FalseK:
      return false;
    case Ast::Eq:
      return t.identifies(f.vars[0], f.vars[1]);
    case Ast::Atom: {
      Tuple blocks(f.vars.size());
      for (size_t i = 0; i < f.vars.size(); ++i)
        blocks[i] = t.partition[static_cast<size_t>(f.vars[i])];
      return t.quotient.has(f.symbol, blocks);
    }
    case Ast::Not:
      return !eval_on_type(*f.lhs, t);
    case Ast::And:
      return eval_on_type(*f.lhs, t) && eval_on_type(*f.rhs, t);
    case Ast::Or:
      return eval_on_type(*f.lhs, t) || eval_on_type(*f.rhs, t);
  }
  return false;
}

std::vector<TypeRep> types_of(const Ast& f, int k, const BaseStructure& base) {
  std::vector<TypeRep> out;
  for (const TypeRep& t : enumerate_types(base, k))
    if (eval_on_type(f, t)) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

AstPtr rename_vars(const AstPtr& f, const std::vector<int>& map) {
  switch (f->kind) {
    case Ast::TrueK:
    case Ast::FalseK:
      return f;
    case Ast::Eq:
      return mk_eq(map[static_cast<size_t>(f->vars[0])], map[static_cast<size_t>(f->vars[1])]);
    case Ast::Atom: {
      std::vector<int> vs(f->vars.size());
      for (size_t i = 0; i < vs.size(); ++i) vs[i] = map[static_cast<size_t>(f->vars[i])];
      return mk_atom(f->symbol, std::move(vs));
    }
    case Ast::Not:
      return mk_not(rename_vars(f->lhs, map));
    case Ast::And:
      return mk_and(rename_vars(f->lhs, map), rename_vars(f->rhs, map));
    case Ast::Or:
      return mk_or(rename_vars(f->lhs, map), rename_vars(f->rhs, map));
  }
  return f;
}

std::string to_string(const Ast& f, const Signature& sig) {
  std::ostringstream os;
  switch (f.kind) {
    case Ast::TrueK:
      os << "true";
      break;
    case Ast::FalseK:
      os << "false";
      break;
    case Ast::Eq:
      os << 'x' << f.vars[0] + 1 << " = x" << f.vars[1] + 1;
      break;
    case Ast::Atom:
      os << sig.symbols[static_cast<size_t>(f.symbol)].name << '(';
      for (size_t i = 0; i < f.vars.size(); ++i) {
        if (i) os << ',';
        os << 'x' << f.vars[i] + 1;
      }
      os << ')';
      break;
    case Ast::Not:
      os << "!(" << to_string(*f.lhs, sig) << ')';
      break;
    case Ast::And:
      os << '(' << to_string(*f.lhs, sig) << " & " << to_string(*f.rhs, sig) << ')';
      break;
    case Ast::Or:
      os << '(' << to_string(*f.lhs, sig) << " | " << to_string(*f.rhs, sig) << ')';
      break;
  }
  return os.str();
}

bool RelationDef::contains(const TypeRep& t) const {
  return std::binary_search(type_set.begin(), type_set.end(), t);
}

RelationDef make_relation(std::string name, int arity, AstPtr ast,
                          const BaseStructure& base) {
  RelationDef r;
  r.name = std::move(name);
  r.arity = arity;
  r.ast = std::move(ast);
  r.type_set = types_of(*r.ast, arity, base);
  return r;
}

}  // namespace ppdef
