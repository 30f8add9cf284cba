#include "multiindex.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace curvnd {

namespace {

void compose(int parts, int total, int pos, Multiindex& cur, std::vector<Multiindex>& out) {
  if (pos == parts - 1) {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (int v = total; v >= 0; --v) {
    cur[pos] = v;
    compose(parts, total - v, pos + 1, cur, out);
  }
}

int sum(const Multiindex& a) { return std::accumulate(a.begin(), a.end(), 0); }

}  // namespace

std::vector<Multiindex> compositions(int parts, int total) {
  std::vector<Multiindex> out;
  if (parts <= 0) {
    if (total == 0) out.emplace_back();
    return out;
  }
  Multiindex cur(parts, 0);
  compose(parts, total, 0, cur, out);
  return out;
}

std::vector<int> expand(const Multiindex& alpha) {
  std::vector<int> seq;
  for (int i = 0; i < static_cast<int>(alpha.size()); ++i)
    for (int r = 0; r < alpha[i]; ++r) seq.push_back(i);
  return seq;
}

Multiindex count(const std::vector<int>& seq, int parts) {
  Multiindex a(parts, 0);
  for (int i : seq) ++a[i];
  return a;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_multinomial_weight(const Multiindex& a, const Multiindex& b, const Multiindex& c) {
  int s = sum(a);
  double w = 3.0 * log_factorial(s);
  for (int x : a) w -= log_factorial(x);
  for (int x : b) w -= log_factorial(x);
  for (int x : c) w -= log_factorial(x);
  return w;
}

int MultiindexTriple::order() const { return sum(alpha); }

bool MultiindexTriple::valid() const {
  int s = sum(alpha);
  for (const auto* m : {&alpha, &beta, &gamma})
    for (int x : *m)
      if (x < 0) return false;
  return sum(beta) == s && sum(gamma) == s;
}

std::vector<int> MultiindexTriple::flat() const {
  std::vector<int> f(alpha);
  f.insert(f.end(), beta.begin(), beta.end());
  f.insert(f.end(), gamma.begin(), gamma.end());
  return f;
}

std::string MultiindexTriple::str() const {
  std::ostringstream os;
  auto put = [&](const Multiindex& m) {
    os << '(';
    for (std::size_t i = 0; i < m.size(); ++i) os << (i ? "," : "") << m[i];
    os << ')';
  };
  put(alpha);
  os << ';';
  put(beta);
  os << ';';
  put(gamma);
  return os.str();
}

MultiindexTriple origin_triple(int d1, int k, int d) {
  return {Multiindex(d1, 0), Multiindex(k, 0), Multiindex(d, 0)};
}

std::vector<MultiindexTriple> all_triples(int d1, int k, int d, int smax) {
  std::vector<MultiindexTriple> out;
  for (int s = 1; s <= smax; ++s) {
    auto as = compositions(d1, s);
    auto bs = compositions(k, s);
    auto cs = compositions(d, s);
    for (const auto& a : as)
      for (const auto& b : bs)
        for (const auto& c : cs) out.push_back({a, b, c});
  }
  return out;
}

}  // namespace curvnd
