#pragma once

#include <compare>
#include <string>
#include <vector>

namespace curvnd {

using Multiindex = std::vector<int>;

// All multiindices in Z_{>=0}^parts with |alpha| = total, in lexicographic order
// starting from (total, 0, ..., 0).
std::vector<Multiindex> compositions(int parts, int total);

// Nondecreasing index sequence counted by alpha: (2,0,1) -> {0,0,2}.
std::vector<int> expand(const Multiindex& alpha);

Multiindex count(const std::vector<int>& seq, int parts);

double log_factorial(int n);
double log_multinomial_weight(const Multiindex& a, const Multiindex& b, const Multiindex& c);

struct MultiindexTriple {
  Multiindex alpha, beta, gamma;

  int order() const;
  bool valid() const;
  // Coordinates in R^{d1+k+d}.
  std::vector<int> flat() const;
  std::string str() const;
  auto operator<=>(const MultiindexTriple&) const = default;
};

MultiindexTriple origin_triple(int d1, int k, int d);

// Every triple with 1 <= |alpha| = |beta| = |gamma| <= smax.
std::vector<MultiindexTriple> all_triples(int d1, int k, int d, int smax);

}  // namespace curvnd
