#pragma once

#include <vector>

#include "nplab/dwork.hpp"
#include "nplab/lattice.hpp"
#include "nplab/series.hpp"

namespace nplab {

// point-count ceiling for the brute-force sums
constexpr double kOracleMaxPoints = 1e8;

// SCALE_EXCEEDED if q^{kn} is past the ceiling
void check_oracle_scale(u64 q, int n, int k);

// S*(k, T) = sum over x in (F_{q^k}^*)^n of (1+T)^{Tr f^(x^)}, mod (p^N, T^{M+1}).
// Only m(f) = 1.  seed picks the defining polynomial of Z_{q^k}.
Series<Zmod> exp_sum(const FPoly& f, int k, int M, int N, u64 seed = 0);

// u_0..u_L of exp(sum_k -(q^k-1)^{-n} S*(k,T) s^k / k); needs L < p
std::vector<Series<Zmod>> char_series(const std::vector<Series<Zmod>>& S, u64 q, int n, int L);

struct OracleRun {
  int L = 0, M = 0, N = 0;
  std::vector<Series<Zmod>> S;  // S[1..L], S[0] unused
  std::vector<Series<Zmod>> u;  // in T
  std::vector<int> valuations;  // val_T(u_l), kInfVal if zero mod T^{M+1}
};

OracleRun oracle_run(const FPoly& f, int L, int M, int N, u64 seed = 0);

// rewrite a series in T as a series in pi, where 1 + T = E(pi)
Series<Zmod> t_to_pi(const Series<Zmod>& s, const ArtinHasseTable& t);

struct VertexCheck {
  long k = 0;
  Side side = Side::Open;
  long x = 0;
  long h = 0;
  int val = kInfVal;
  bool generic = false;  // val_T(u_x) == h
};

struct NpCheckReport {
  std::vector<VertexCheck> vertices;
  bool above_ihp = true;  // val_T(u_l) >= IHP(l) for all computed l
  bool passes = true;     // every vertex generic and above_ihp
  OracleRun run;
};

// vertices x_k^+- for k in [kmin, kmax]; k = 0 is u_0 = 1
NpCheckReport np_check(const Parallelotope& d, const FPoly& f, long kmin, long kmax, int M = -1);
// same, reusing a run that reaches x_kmax^+ and the largest vertex height
NpCheckReport np_check(const Parallelotope& d, const FPoly& f, long kmin, long kmax, const OracleRun& run);

struct CompareReport {
  int L = 0, M = 0, N = 0;
  std::vector<Series<Zmod>> oracle;  // converted to pi
  std::vector<Series<Zmod>> dwork;
  std::vector<int> val_oracle, val_dwork;
  std::vector<bool> match;
  bool ok = true;
  long first_l = -1;  // first mismatch
  int first_deg = -1;
};

// u_l from both paths mod (p^N, pi^{M+1}); strict throws MISMATCH
CompareReport compare(const Parallelotope& d, const FPoly& f, int L, int M, int N = 1, bool strict = false);
CompareReport compare(const Parallelotope& d, const FPoly& f, const OracleRun& run, bool strict = false);

}  // namespace nplab
