#include "ppdef/certificate.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace ppdef {

namespace {

void fnv(uint64_t& h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  h ^= '\n';
  h *= 1099511628211ull;
}

std::string hex(uint64_t h) {
  static const char* d = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = d[h & 15];
    h >>= 4;
  }
  return out;
}

}  // namespace

std::string problem_digest(const Problem& p) {
  uint64_t h = 1469598103934665603ull;
  fnv(h, p.base->name);
  for (const FinStruct& b : p.base->bounds) fnv(h, b.encode());
  fnv(h, mode_name(p.mode));
  fnv(h, p.target.name);
  fnv(h, std::to_string(p.target.arity));
  fnv(h, to_string(*p.target.ast, p.base->sig));
  for (const RelationDef& r : p.theta) {
    fnv(h, r.name);
    fnv(h, std::to_string(r.arity));
    fnv(h, to_string(*r.ast, p.base->sig));
  }
  return hex(h);
}

void write_certificate(std::ostream& os, const Problem& p, const Behavior& b,
                       const ReplayReport& rep, const std::vector<int>& replay_sizes) {
  os << "certificate v1\n";
  os << "digest: " << problem_digest(p) << "\n";
  os << "mode: " << mode_name(p.mode) << "\n";
  os << "target: " << p.target.name << "/" << p.target.arity << "\n";
  os << "m: " << b.m << "\n";
  os << "n: " << b.n << "\n";
  // constants identified by their index in the target type set
  for (int i = 0; i < b.m; ++i) {
    const auto& ts = p.target.type_set;
    auto it = std::find(ts.begin(), ts.end(), b.constants[static_cast<size_t>(i)]);
    os << "constant " << i << ": "
       << (it == ts.end() ? -1 : static_cast<int>(it - ts.begin())) << " "
       << b.constants[static_cast<size_t>(i)].encode() << "\n";
  }
  for (int i = 0; i < b.m; ++i)
    os << "space " << i << ": " << b.spaces[static_cast<size_t>(i)].size() << "\n";
  os << "values: " << b.values.size() << "\n";
  for (size_t v = 0; v < b.values.size(); ++v)
    os << "value " << v << ": " << b.values[v].encode() << "\n";
  os << "cells: " << b.table.size() << "\n";
  for (size_t i = 0; i < b.table.size(); i += 32) {
    os << "row " << i << ":";
    for (size_t j = i; j < std::min(i + 32, b.table.size()); ++j) os << " " << b.table[j];
    os << "\n";
  }
  os << "replay-sizes:";
  for (int s : replay_sizes) os << " " << s;
  os << "\n";
  for (const ReplayCheck& c : rep.checks)
    os << "check: " << (c.pass ? "PASS" : "FAIL") << " " << c.name
       << (c.detail.empty() ? "" : " -- " + c.detail) << "\n";
  os << "status: " << (rep.all_pass() ? "VERIFIED" : "FAILED") << "\n";
}

namespace {

bool take(std::istream& is, const std::string& prefix, std::string& rest) {
  std::string line;
  if (!std::getline(is, line)) return false;
  if (line.rfind(prefix, 0) != 0) return false;
  rest = line.substr(prefix.size());
  return true;
}

}  // namespace

CertificateCheck check_certificate(std::istream& is, const Problem& p) {
  CertificateCheck out;
  std::string rest, line;
  if (!take(is, "certificate v1", rest)) {
    out.message = "bad header";
    return out;
  }
  if (!take(is, "digest: ", rest)) {
    out.message = "missing digest";
    return out;
  }
  if (rest != problem_digest(p)) {
    out.message = "digest does not match the problem";
    return out;
  }
  if (!take(is, "mode: ", rest) || rest != mode_name(p.mode)) {
    out.message = "mode mismatch";
    return out;
  }
  if (!take(is, "target: ", rest)) {
    out.message = "missing target";
    return out;
  }
  int m = 0, n = 0;
  if (!take(is, "m: ", rest)) {
    out.message = "missing m";
    return out;
  }
  m = std::stoi(rest);
  if (!take(is, "n: ", rest) || std::stoi(rest) != p.base->n_param) {
    out.message = "n mismatch";
    return out;
  }
  n = p.base->n_param;

  Behavior b;
  b.base = p.base;
  b.m = m;
  b.n = n;
  for (int i = 0; i < m; ++i) {
    if (!take(is, "constant " + std::to_string(i) + ": ", rest)) {
      out.message = "missing constant " + std::to_string(i);
      return out;
    }
    std::istringstream ls(rest);
    int ti = -1;
    ls >> ti;
    if (ti < 0 || ti >= static_cast<int>(p.target.type_set.size())) {
      out.message = "constant index out of range";
      return out;
    }
    b.constants.push_back(p.target.type_set[static_cast<size_t>(ti)]);
    std::string enc;
    ls >> enc;
    if (enc != b.constants.back().encode()) {
      out.message = "constant encoding mismatch";
      return out;
    }
  }
  try {
    for (int i = 0; i < m; ++i) {
      b.spaces.push_back(pointed_space(*p.base, b.constants[static_cast<size_t>(i)], n));
      if (!take(is, "space " + std::to_string(i) + ": ", rest) ||
          std::stoul(rest) != b.spaces.back().size()) {
        out.message = "space size mismatch";
        return out;
      }
    }
    b.values = enumerate_types(*p.base, n);
  } catch (const std::exception& e) {
    out.message = e.what();
    return out;
  }
  if (!take(is, "values: ", rest) || std::stoul(rest) != b.values.size()) {
    out.message = "value count mismatch";
    return out;
  }
  for (size_t v = 0; v < b.values.size(); ++v) {
    if (!take(is, "value " + std::to_string(v) + ": ", rest) || rest != b.values[v].encode()) {
      out.message = "value legend mismatch";
      return out;
    }
  }
  long cells = 1;
  for (const auto& s : b.spaces) cells *= static_cast<long>(s.size());
  if (!take(is, "cells: ", rest) || std::stol(rest) != cells) {
    out.message = "cell count mismatch";
    return out;
  }
  b.table.assign(static_cast<size_t>(cells), -1);
  for (long i = 0; i < cells; i += 32) {
    if (!take(is, "row " + std::to_string(i) + ":", rest)) {
      out.message = "missing table row at " + std::to_string(i);
      return out;
    }
    std::istringstream ls(rest);
    for (long j = i; j < std::min(i + 32, cells); ++j) {
      int v;
      if (!(ls >> v) || v < 0 || v >= static_cast<int>(b.values.size())) {
        out.message = "bad table entry at " + std::to_string(j);
        return out;
      }
      b.table[static_cast<size_t>(j)] = v;
    }
  }
  std::vector<int> sizes;
  if (!take(is, "replay-sizes:", rest)) {
    out.message = "missing replay sizes";
    return out;
  }
  {
    std::istringstream ls(rest);
    int s;
    while (ls >> s) sizes.push_back(s);
  }
  if (static_cast<int>(sizes.size()) != m) {
    out.message = "replay size count mismatch";
    return out;
  }
  b.build_maps();

  // re-run every check from scratch
  try {
    if (auto c = check_compatibility(b)) {
      out.message = "compatibility failed: " + c->note;
      return out;
    }
    if (auto c = check_equality_respect(b)) {
      out.message = "equality respect failed: " + c->note;
      return out;
    }
    if (!check_violation(b, p.target)) {
      out.message = "behavior does not violate the target";
      return out;
    }
    if (auto r = check_preservation(b, p.theta, p.mode)) {
      out.message = "preservation failed for " + *r;
      return out;
    }
    ReplayReport rep = replay(b, p, sizes);
    if (!rep.all_pass()) {
      for (const ReplayCheck& c : rep.checks)
        if (!c.pass) {
          out.message = "replay failed: " + c.name +
                        (c.detail.empty() ? "" : " (" + c.detail + ")");
          return out;
        }
    }
  } catch (const std::exception& e) {
    out.message = e.what();
    return out;
  }
  out.ok = true;
  out.message = "certificate verified";
  return out;
}

}  // namespace ppdef
