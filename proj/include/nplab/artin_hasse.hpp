#pragma once

#include <vector>

#include "nplab/rational.hpp"
#include "nplab/series.hpp"
#include "nplab/zmod.hpp"

namespace nplab {

// Coefficients c_i of E(pi) = exp(sum_j pi^{p^j} / p^j).
struct ArtinHasseTable {
  u64 p = 0;
  int N = 0;
  std::vector<Rational> exact;
  std::vector<Zmod> reduced;  // mod p^N

  int size() const { return (int)exact.size(); }
  const Zmod& operator[](int i) const { return reduced.at(i); }
  u64 mod_p(int i) const { return reduced.at(i).residue() % p; }
};

ArtinHasseTable artin_hasse(u64 p, int i_max, int N);

// E(pi) truncated at pi^M, coefficients mod p^N
Series<Zmod> artin_hasse_series(const ArtinHasseTable& t, int M);

// (1+T)^a = sum binom(a, j) T^j for j <= M, reduced mod p^{N_out}.
// a must carry precision N >= N_out + floor(M/(p-1)) + 1.
Series<Zmod> binomial_series(const Zmod& a, int M, int N_out);

}  // namespace nplab
