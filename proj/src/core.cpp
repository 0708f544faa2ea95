#include "ppdef/core.hpp"

#include <algorithm>
#include <sstream>

namespace ppdef {

FinStruct FinStruct::induced(const std::vector<int>& pts) const {
  std::vector<int> where(static_cast<size_t>(size), -1);
  for (size_t i = 0; i < pts.size(); ++i) where[static_cast<size_t>(pts[i])] = static_cast<int>(i);
  FinStruct out(static_cast<int>(pts.size()), static_cast<int>(rels.size()));
  Tuple mapped;
  for (size_t sym = 0; sym < rels.size(); ++sym) {
    for (const Tuple& t : rels[sym]) {
      bool inside = true;
      mapped.clear();
      for (int p : t) {
        if (where[static_cast<size_t>(p)] < 0) {
          inside = false;
          break;
        }
        mapped.push_back(where[static_cast<size_t>(p)]);
      }
      if (inside) out.rels[sym].insert(mapped);
    }
  }
  return out;
}

std::string FinStruct::encode() const {
  std::ostringstream os;
  os << size;
  for (size_t sym = 0; sym < rels.size(); ++sym) {
    os << '|' << sym << ':';
    for (const Tuple& t : rels[sym]) {
      os << '(';
      for (size_t i = 0; i < t.size(); ++i) {
        if (i) os << ',';
        os << t[i];
      }
      os << ')';
    }
  }
  return os.str();
}

std::vector<Tuple> all_tuples(int n, int r) {
  std::vector<Tuple> out;
  if (r == 0) {
    out.push_back({});
    return out;
  }
  if (n == 0) return out;
  Tuple cur(static_cast<size_t>(r), 0);
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[static_cast<size_t>(i)] == n - 1) {
      cur[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++cur[static_cast<size_t>(i)];
  }
  return out;
}

namespace {

// Checks the atomic diagram restricted to tuples that mention point p and
// only assigned points.
bool diagram_ok(const FinStruct& b, const FinStruct& a, const std::vector<int>& img,
                int p) {
  for (size_t sym = 0; sym < b.rels.size(); ++sym) {
    int ar = 0;
    // arity is implicit in the tuples; derive from any tuple of a or b
    if (!b.rels[sym].empty())
      ar = static_cast<int>(b.rels[sym].begin()->size());
    else if (!a.rels[sym].empty())
      ar = static_cast<int>(a.rels[sym].begin()->size());
    else
      continue;
    // enumerate tuples over assigned points of b containing p
    std::vector<int> assigned;
    for (int q = 0; q < b.size; ++q)
      if (img[static_cast<size_t>(q)] >= 0) assigned.push_back(q);
    for (const Tuple& t : all_tuples(static_cast<int>(assigned.size()), ar)) {
      Tuple bt(t.size()), at(t.size());
      bool mentions = false;
      for (size_t i = 0; i < t.size(); ++i) {
        bt[i] = assigned[static_cast<size_t>(t[i])];
        if (bt[i] == p) mentions = true;
        at[i] = img[static_cast<size_t>(bt[i])];
      }
      if (!mentions) continue;
      if (b.has(static_cast<int>(sym), bt) != a.has(static_cast<int>(sym), at))
        return false;
    }
  }
  return true;
}

bool embed_rec(const FinStruct& b, const FinStruct& a, std::vector<int>& img,
               std::vector<char>& used, int p) {
  if (p == b.size) return true;
  for (int x = 0; x < a.size; ++x) {
    if (used[static_cast<size_t>(x)]) continue;
    img[static_cast<size_t>(p)] = x;
    used[static_cast<size_t>(x)] = 1;
    if (diagram_ok(b, a, img, p) && embed_rec(b, a, img, used, p + 1)) return true;
    used[static_cast<size_t>(x)] = 0;
    img[static_cast<size_t>(p)] = -1;
  }
  return false;
}

}  // namespace

bool embeds(const FinStruct& b, const FinStruct& a) {
  if (b.size > a.size) return false;
  std::vector<int> img(static_cast<size_t>(b.size), -1);
  std::vector<char> used(static_cast<size_t>(a.size), 0);
  return embed_rec(b, a, img, used, 0);
}

}  // namespace ppdef
