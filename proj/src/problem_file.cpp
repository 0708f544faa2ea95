#include "ppdef/problem_file.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>

#include "ppdef/certificate.hpp"

namespace ppdef {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

// "name/arity" -> (name, arity)
bool split_slash(const std::string& s, std::string& name, int& arity) {
  auto p = s.find('/');
  if (p == std::string::npos || p == 0 || p + 1 == s.size()) return false;
  name = s.substr(0, p);
  try {
    arity = std::stoi(s.substr(p + 1));
  } catch (...) {
    return false;
  }
  return arity > 0;
}

// "less(1,2)" -> symbol name + 1-based point list
bool parse_bound_atom(const std::string& s, std::string& name, Tuple& pts) {
  auto l = s.find('(');
  if (l == std::string::npos || s.back() != ')') return false;
  name = s.substr(0, l);
  pts.clear();
  std::string body = s.substr(l + 1, s.size() - l - 2);
  std::istringstream is(body);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      pts.push_back(std::stoi(tok) - 1);
    } catch (...) {
      return false;
    }
  }
  return !pts.empty();
}

FileError err(int code, int line, std::string msg) {
  return FileError{code, line, std::move(msg)};
}

}  // namespace

std::variant<ProblemFile, FileError> parse_problem_file(std::istream& is) {
  ProblemFile pf;
  std::string line;
  int ln = 0;

  Signature pending_sig;
  std::vector<FinStruct> pending_bounds;
  bool in_base = false, have_base = false;

  auto finish_base = [&](int at) -> std::optional<FileError> {
    auto r = validate_base(pending_sig, pending_bounds, "custom");
    if (std::holds_alternative<std::vector<Diagnostic>>(r)) {
      const auto& ds = std::get<std::vector<Diagnostic>>(r);
      std::string msg = "invalid base";
      if (!ds.empty()) msg = ds.front().code + ": " + ds.front().message;
      return err(3, at, msg);
    }
    pf.base = std::make_shared<BaseStructure>(std::get<BaseStructure>(std::move(r)));
    have_base = true;
    return std::nullopt;
  };

  while (std::getline(is, line)) {
    ++ln;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) continue;

    if (in_base) {
      if (tok[0] == "end") {
        in_base = false;
        if (auto e = finish_base(ln)) return *e;
        continue;
      }
      if (tok[0] == "signature") {
        if (tok.size() < 2) return err(2, ln, "signature needs name/arity");
        std::string name;
        int ar = 0;
        if (!split_slash(tok[1], name, ar)) return err(2, ln, "bad symbol " + tok[1]);
        bool is_order = tok.size() > 2 && tok[2] == "order";
        if (tok.size() > 2 && !is_order) return err(2, ln, "unexpected token " + tok[2]);
        pending_sig.symbols.push_back({name, ar});
        if (is_order) pending_sig.order_symbol = static_cast<int>(pending_sig.symbols.size()) - 1;
        continue;
      }
      if (tok[0] == "bound" && tok.size() >= 3 && tok[1] == "on") {
        std::string head = tok[2];
        if (!head.empty() && head.back() == ':') head.pop_back();
        int size = 0;
        try {
          size = std::stoi(head);
        } catch (...) {
          return err(2, ln, "bad bound size");
        }
        if (size <= 0) return err(2, ln, "bad bound size");
        FinStruct st;
        st.size = size;
        st.rels.assign(pending_sig.symbols.size(), {});
        for (size_t i = 3; i < tok.size(); ++i) {
          std::string name;
          Tuple pts;
          if (!parse_bound_atom(tok[i], name, pts)) return err(2, ln, "bad atom " + tok[i]);
          int sym = pending_sig.find(name);
          if (sym < 0) return err(2, ln, "unknown symbol " + name);
          if (static_cast<int>(pts.size()) != pending_sig.symbols[static_cast<size_t>(sym)].arity)
            return err(2, ln, "arity mismatch in " + tok[i]);
          for (int p : pts)
            if (p < 0 || p >= size) return err(2, ln, "point out of range in " + tok[i]);
          st.add(sym, pts);
        }
        pending_bounds.push_back(std::move(st));
        continue;
      }
      return err(2, ln, "unexpected line inside base block");
    }

    if (tok[0] == "base") {
      if (have_base) return err(2, ln, "base already declared");
      if (tok.size() == 3 && tok[1] == "builtin") {
        try {
          pf.base = std::make_shared<BaseStructure>(builtin_base(tok[2]));
        } catch (const std::exception& e) {
          return err(2, ln, e.what());
        }
        have_base = true;
      } else if (tok.size() == 2 && tok[1] == "begin") {
        in_base = true;
      } else {
        return err(2, ln, "expected 'base builtin <name>' or 'base begin'");
      }
      continue;
    }

    if (tok[0] == "relation") {
      if (!have_base) return err(2, ln, "relation before base");
      // relation Name/arity := formula
      auto pos = line.find(":=");
      if (tok.size() < 2 || pos == std::string::npos)
        return err(2, ln, "expected 'relation Name/arity := formula'");
      std::string name;
      int ar = 0;
      if (!split_slash(tok[1], name, ar)) return err(2, ln, "bad relation " + tok[1]);
      for (const RelationDef& r : pf.relations)
        if (r.name == name) return err(2, ln, "duplicate relation " + name);
      auto parsed = parse_formula(line.substr(pos + 2), pf.base->sig, ar);
      if (std::holds_alternative<ParseError>(parsed))
        return err(2, ln, std::get<ParseError>(parsed).message);
      try {
        pf.relations.push_back(
            make_relation(name, ar, std::get<AstPtr>(parsed), *pf.base));
      } catch (const std::exception& e) {
        return err(2, ln, e.what());
      }
      continue;
    }

    if (tok[0] == "query") {
      if (!have_base) return err(2, ln, "query before base");
      Query q;
      q.id = static_cast<int>(pf.queries.size()) + 1;
      size_t from_at;
      if (tok.size() >= 3 && tok[1] == "identity" && tok[2] == "from") {
        q.mode = Mode::identity;
        from_at = 3;
      } else if (tok.size() >= 4 && tok[3] == "from") {
        if (tok[1] == "pp")
          q.mode = Mode::pp;
        else if (tok[1] == "ep")
          q.mode = Mode::ep;
        else if (tok[1] == "ex")
          q.mode = Mode::ex;
        else
          return err(2, ln, "unknown mode " + tok[1]);
        q.target = tok[2];
        from_at = 4;
      } else {
        return err(2, ln, "malformed query");
      }
      for (size_t i = from_at; i < tok.size(); ++i) {
        std::string name = tok[i];
        name.erase(std::remove(name.begin(), name.end(), ','), name.end());
        if (name.empty()) continue;
        q.from.push_back(name);
      }
      if (q.from.empty()) return err(2, ln, "query needs at least one relation");
      auto known = [&](const std::string& name) {
        for (const RelationDef& r : pf.relations)
          if (r.name == name) return true;
        return false;
      };
      if (!q.target.empty() && !known(q.target))
        return err(2, ln, "unknown relation " + q.target);
      for (const std::string& f : q.from)
        if (!known(f)) return err(2, ln, "unknown relation " + f);
      pf.queries.push_back(std::move(q));
      continue;
    }

    if (tok[0] == "option") {
      if (tok.size() != 3) return err(2, ln, "expected 'option <key> <value>'");
      long v = 0;
      bool numeric = true;
      try {
        v = std::stol(tok[2]);
      } catch (...) {
        numeric = false;
      }
      if (tok[1] == "parallel") {
        if (tok[2] == "on")
          pf.options.parallel = true;
        else if (tok[2] == "off")
          pf.options.parallel = false;
        else
          return err(2, ln, "parallel is on/off");
        continue;
      }
      if (!numeric) return err(2, ln, "bad value " + tok[2]);
      if (tok[1] == "node_budget")
        pf.options.limits.node_budget = v;
      else if (tok[1] == "time_budget_ms")
        pf.options.limits.time_budget_ms = v;
      else if (tok[1] == "replay_sizes")
        pf.options.replay_size = static_cast<int>(v);
      else if (tok[1] == "oracle_max_vars")
        pf.options.oracle_max_vars = static_cast<int>(v);
      else if (tok[1] == "oracle_max_atoms")
        pf.options.oracle_max_atoms = static_cast<int>(v);
      else
        return err(2, ln, "unknown option " + tok[1]);
      continue;
    }

    return err(2, ln, "unknown directive " + tok[0]);
  }
  if (in_base) return err(2, ln, "unterminated base block");
  if (!have_base) return err(2, ln == 0 ? 1 : ln, "no base declared");
  return pf;
}

namespace {

const RelationDef* find_rel(const ProblemFile& pf, const std::string& name) {
  for (const RelationDef& r : pf.relations)
    if (r.name == name) return &r;
  return nullptr;
}

struct QueryResult {
  std::string line;
  bool inconclusive = false;
  std::optional<Problem> problem;   // set when a certificate can be emitted
  std::optional<Behavior> witness;
};

QueryResult run_query(const ProblemFile& pf, const Query& q) {
  QueryResult res;
  std::ostringstream os;
  std::vector<RelationDef> theta;
  for (const std::string& f : q.from) theta.push_back(*find_rel(pf, f));

  auto from_list = [&] {
    std::string s = "{";
    for (size_t i = 0; i < q.from.size(); ++i) s += (i ? "," : "") + q.from[i];
    return s + "}";
  };

  if (q.mode == Mode::identity) {
    IdentityResult r = check_identity(pf.base, theta, pf.options.limits);
    os << "QUERY " << q.id << ": identity from " << from_list() << " => ";
    switch (r.kind) {
      case IdentityResult::Found:
        os << "FOUND";
        break;
      case IdentityResult::None:
        os << "NOT-FOUND";
        break;
      case IdentityResult::Inconclusive:
        os << "INCONCLUSIVE";
        res.inconclusive = true;
        break;
    }
    res.line = os.str();
    return res;
  }

  Problem p;
  p.base = pf.base;
  p.mode = q.mode;
  p.target = *find_rel(pf, q.target);
  p.theta = theta;
  Decision d = decide(p, pf.options.limits);
  os << "QUERY " << q.id << ": " << mode_name(q.mode) << " " << q.target << " from "
     << from_list() << " => " << verdict_name(d.verdict);
  res.line = os.str();
  res.inconclusive = d.verdict == Verdict::Inconclusive;
  if (d.verdict == Verdict::NotDefinable && d.witness) {
    res.problem = std::move(p);
    res.witness = std::move(d.witness);
  }
  return res;
}

}  // namespace

int run_problem_file(const ProblemFile& pf, std::ostream& out,
                     const std::string& certificate_dir) {
  std::vector<QueryResult> results(pf.queries.size());
  if (pf.options.parallel && pf.queries.size() > 1) {
    std::vector<std::future<QueryResult>> futs;
    for (const Query& q : pf.queries)
      futs.push_back(std::async(std::launch::async, [&pf, &q] { return run_query(pf, q); }));
    for (size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < pf.queries.size(); ++i) results[i] = run_query(pf, pf.queries[i]);
  }

  bool any_inconclusive = false;
  for (size_t i = 0; i < results.size(); ++i) {
    out << results[i].line << "\n";
    any_inconclusive = any_inconclusive || results[i].inconclusive;
    if (!certificate_dir.empty() && results[i].problem) {
      const Problem& p = *results[i].problem;
      const Behavior& b = *results[i].witness;
      int sz = pf.options.replay_size > 0 ? pf.options.replay_size : p.target.arity + 2;
      std::vector<int> sizes(static_cast<size_t>(b.m), sz);
      ReplayReport rep = replay(b, p, sizes);
      std::string path = certificate_dir + "/query" +
                         std::to_string(pf.queries[i].id) + ".cert";
      std::ofstream cf(path);
      write_certificate(cf, p, b, rep, sizes);
      out << "CERTIFICATE " << pf.queries[i].id << ": " << path
          << (rep.all_pass() ? " (verified)" : " (replay failed)") << "\n";
    }
  }
  return any_inconclusive ? 4 : 0;
}

}  // namespace ppdef
