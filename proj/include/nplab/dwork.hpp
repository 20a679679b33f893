#pragma once

#include <map>
#include <string>
#include <vector>

#include "nplab/artin_hasse.hpp"
#include "nplab/galois.hpp"
#include "nplab/graded_det.hpp"
#include "nplab/lattice.hpp"
#include "nplab/linalg.hpp"
#include "nplab/mpoly.hpp"
#include "nplab/series.hpp"

namespace nplab {

// f = sum a_P x^P with a_P in F_q; fq is the residue field (N = 1).
struct FPoly {
  RingPtr fq;
  std::map<IVec, Zq> coeff;

  u64 p() const { return fq->p; }
  int m() const { return fq->m; }
  std::string str() const;
};

// every exponent in Delta^+ and every vertex coefficient nonzero
void check_polytope(const Parallelotope& d, const FPoly& f);
// degree over F_p of the field generated by the coefficients
int field_degree(const FPoly& f);
// f over F_p from integer coefficients
FPoly make_fpoly(long p, const std::map<IVec, long>& c);
// uniformly random coefficients on Delta^+, vertex coefficients nonzero
FPoly random_fpoly(const Parallelotope& d, const RingPtr& fq, u64 seed);

enum class EMode { Numeric, Full, Res };
const char* mode_name(EMode m);

// Delta^+ minus the origin, in canonical order: the full-mode variables
std::vector<IVec> universal_points(const Parallelotope& d);

// coefficients e_Q of prod_{P != O} E(a_P pi x^P), for w(Q) <= M
template <class R>
struct ECoefficients {
  EMode mode = EMode::Numeric;
  int M = 0;
  std::map<IVec, Series<R>> e;
  R zero;

  Series<R> get(const IVec& Q) const {
    auto it = e.find(Q);
    return it == e.end() ? Series<R>(M, zero) : it->second;
  }
};

ECoefficients<Zq> expand_E(const Parallelotope& d, const FPoly& f, int N, int M, const ArtinHasseTable& table);
// universal coefficients mod p; Full uses one variable per universal_points
// entry, Res uses a_1..a_n with a_{V_S} = a_{#S} and other a_P = 0
ECoefficients<MPoly> expand_E_universal(const Parallelotope& d, u64 p, EMode mode, int M);

struct DworkMatrix {
  std::vector<LatticePoint> basis;
  Mat<Series<Zq>> N;  // N(i, j) = N_{Q', Q} with Q' = basis[i], Q = basis[j]
  int m = 1;
  int M = 0;
  Rational W;
};

// basis: cone points with w <= W
DworkMatrix dwork_matrix(const Parallelotope& d, long p, const ECoefficients<Zq>& E, const Zq& aO, const Rational& W);

// default cutoff (M+1)/(p-1) + 1
Rational default_cutoff(long p, int M);

struct FredholmSeries {
  std::vector<Series<Zmod>> u;  // u_0..u_L in pi
  int m = 1;
  int M = 0;
  std::vector<int> valuations;  // kInfVal means >= M+1
};

// det(I - s sigma^{m-1}(N) ... N); TRUNCATION_UNSOUND if the basis misses
// a point whose row could reach below pi^{M+1}
FredholmSeries fredholm(const Parallelotope& d, long p, const DworkMatrix& N, int L);
// the whole pipeline at p-adic precision N
FredholmSeries fredholm(const Parallelotope& d, const FPoly& f, int L, int M, int N);
FredholmSeries fredholm(const Parallelotope& d, const FPoly& f, int L, int M, int N, const Rational& W);

// --- leading coefficients ---

// coefficient of pi^j in the universal e_X (mod p), by enumerating the
// decompositions X = sum j_P P with sum j_P = j
MPoly universal_coefficient(const Parallelotope& d, u64 p, EMode mode, const IVec& X, long j,
                            const ArtinHasseTable& table);

// the matrix whose determinant is the pi^h coefficient of
// det(e~_{pQ'-Q})_{Q,Q' in Delta_k^+-}, with its grading
GradedMatrix leading_matrix(const Parallelotope& d, u64 p, long k, Side side, EMode mode, const ArtinHasseTable& table);

struct LeadingResult {
  long k = 0;
  Side side = Side::Open;
  EMode mode = EMode::Full;  // mode actually used
  bool factored = false;     // product of block determinants
  long size = 0;
  long h = 0;
  MPoly poly;                  // whole determinant (unset when factored)
  std::vector<MPoly> factors;  // block determinants when factored
  GradedDetStats stats;
  bool nonzero = false;
};

// Full mode falls back to Res, then to block factorization, on OUT_OF_MEMORY
LeadingResult leading_coefficient(const Parallelotope& d, u64 p, long k, Side side, EMode mode,
                                  long max_evals = 400000);

struct VerifyReport {
  bool hypothesis = true;
  std::vector<LeadingResult> results;
  bool passed = true;
  std::vector<std::pair<long, Side>> failures;
};

VerifyReport verify_generic(const Parallelotope& d, u64 p, long kmin, long kmax, long max_evals = 400000);

// all 2(n+2) specializations of the leading coefficients nonzero
bool ozar_membership(const Parallelotope& d, const FPoly& f);
// the specialization at one (k, side), as an element of F_q
Zq specialized_leading(const Parallelotope& d, const FPoly& f, long k, Side side);

struct BlockFactorization {
  MPoly direct;
  std::vector<BlockDecomposition> blocks;
  std::vector<MPoly> factors;
  int sign = 1;  // direct = sign * product
  bool equal = false;
};

// FACTORIZATION_MISMATCH unless direct == sign * prod factors
BlockFactorization res_block_factorization(const Parallelotope& d, u64 p, long k, Side side, long max_evals = 400000);

// the block determinant det(e~res_{P0 - eta(P0) + pQ - Q'}) at its leading
// pi power, and that power
MPoly block_determinant(const Parallelotope& d, u64 p, const IVec& P0, const std::vector<LatticePoint>& pts,
                        long* pi_power = nullptr, long max_evals = 400000);

// --- section 5 calculus ---

// xi(w) = prod_i c_{w_i - w_{i-1}}, w_0 = 0, c_s = 0 for s < 0
Zmod xi(const std::vector<long>& w, const ArtinHasseTable& table);
// V_{l,k} in increasing partial order
std::vector<std::vector<long>> v_set(int l, long k);

struct MatrixMResult {
  Mat<Zmod> M;
  Zmod det;  // mod p
  // l = 1: sign (-1)^{k(k+1)/2} and the exponents e with det = sign c_{w1}^e
  bool closed_form_k_plus_1 = false;
  bool closed_form_k_minus_1 = false;
};

MatrixMResult matrix_M(const std::vector<long>& w, long k, long p, const ArtinHasseTable& table);

// partial degree (t_n, ..., t_1) of a polynomial in a_1..a_n; empty if zero
std::vector<int> partial_degree(const MPoly& g);
bool deg_less(const std::vector<int>& a, const std::vector<int>& b);
MPoly leading_part(const MPoly& g);

// gamma(Q1) for Q1 in Lambda: monomial in a_1..a_n and its pi power
MPoly gamma_monomial(const Parallelotope& d, u64 p, const IVec& Q1, long* pi_power);

struct BlockLeading {
  Zmod unit;        // det M((z_1..z_l), K) mod p
  MPoly monomial;   // prod gamma(Qz + (p-1) Q1)
  long pi_power = 0;
  long expected_pi_power = 0;
  std::vector<long> z;  // chain coordinates of Qz
  MPoly direct_leading;  // LD of the actual block determinant
  long direct_pi_power = 0;
  bool matches_block = false;
};

// NOT_A_UNIT if det M vanishes mod p
BlockLeading block_leading_determinant(const Parallelotope& d, u64 p, const BlockDecomposition& b,
                                       long max_evals = 400000);

}  // namespace nplab
