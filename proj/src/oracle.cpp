#include "nplab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nplab/artin_hasse.hpp"
#include "nplab/error.hpp"
#include "nplab/polygon.hpp"

namespace nplab {

void check_oracle_scale(u64 q, int n, int k) {
  double pts = std::pow((double)q, (double)k * n);
  if (pts > kOracleMaxPoints)
    throw Error(ErrorCode::ScaleExceeded, "q^(kn) = " + std::to_string(q) + "^" + std::to_string(k * n) +
                                              " is past the brute-force ceiling");
}

namespace {

int fpoly_nvars(const FPoly& f) {
  if (f.coeff.empty()) throw Error(ErrorCode::Domain, "f has no terms");
  return (int)f.coeff.begin()->first.size();
}

// working precision so that binomial_series can return p^N digits
int working_precision(u64 p, int M, int N) { return N + M / (int)(p - 1) + 1; }

}  // namespace

Series<Zmod> exp_sum(const FPoly& f, int k, int M, int N, u64 seed) {
  if (k < 1) throw Error(ErrorCode::Domain, "k must be at least 1");
  if (field_degree(f) != 1) throw Error(ErrorCode::Domain, "the oracle needs coefficients in F_p");
  const u64 p = f.p();
  const int n = fpoly_nvars(f);
  check_oracle_scale(p, n, k);
  const int Nw = working_precision(p, M, N);
  RingPtr R;
  try {
    R = make_galois_ring(p, k, Nw, seed);
  } catch (const Error&) {
    throw Error(ErrorCode::PrecisionExhausted, "p^" + std::to_string(Nw) + " does not fit a machine word");
  }
  const u64 order = R->q() - 1;

  Zq omega = teichmuller(primitive_element(R));
  struct Term {
    Coeffs cur;
    std::vector<Coeffs> step;  // omega^{P_i}
  };
  std::vector<Term> terms;
  for (const auto& [P, a] : f.coeff) {
    if (a.is_zero()) continue;
    Term t;
    t.cur = teichmuller(Zq::scalar(R, (long)a.to_scalar().residue())).coeffs();
    for (int i = 0; i < n; ++i) {
      long e = P[i] % (long)order;
      if (e < 0) e += (long)order;
      t.step.push_back(omega.pow((u64)e).coeffs());
    }
    terms.push_back(std::move(t));
  }

  // odometer over exponent vectors e in [0, order)^n; x^ = omega^e.
  // Wrapping e_i back to 0 needs no correction since omega^order = 1.
  std::map<u64, u64> hist;
  std::vector<u64> e(n, 0);
  Coeffs acc, tmp;
  for (;;) {
    acc.fill(0);
    for (const auto& t : terms) {
      R->add(acc, t.cur, tmp);
      acc = tmp;
    }
    ++hist[R->trace_of(acc)];
    int i = 0;
    for (; i < n; ++i) {
      for (auto& t : terms) {
        R->mul(t.cur, t.step[i], tmp);
        t.cur = tmp;
      }
      if (++e[i] < order) break;
      e[i] = 0;
    }
    if (i == n) break;
  }

  Zmod zero(0, p, N);
  Series<Zmod> S(M, zero);
  for (const auto& [tr, cnt] : hist) {
    Series<Zmod> b = binomial_series(Zmod((long)tr, p, Nw), M, N);
    S += b.scale(Zmod((long)(cnt % zero.modulus()), p, N));
  }
  return S;
}

std::vector<Series<Zmod>> char_series(const std::vector<Series<Zmod>>& S, u64 q, int n, int L) {
  if (L < 0) throw Error(ErrorCode::Domain, "negative index");
  if ((int)S.size() <= L) throw Error(ErrorCode::Domain, "need S[1..L]");
  const u64 p = prime_factors(q).at(0);
  if ((u64)L >= p) throw Error(ErrorCode::IndexTooLarge, "L = " + std::to_string(L) + " needs division by p");
  std::vector<Series<Zmod>> u;
  if (L == 0) {
    u.push_back(1);
    return u;
  }
  const Series<Zmod>& s1 = S[1];
  const Zmod zero = s1[0] * Zmod(0);
  const int M = s1.M(), N = zero.N();
  // k g_k = -(q^k - 1)^{-n} S(k)
  std::vector<Series<Zmod>> kg(L + 1);
  for (int k = 1; k <= L; ++k) {
    Zmod c = (Zmod((long)(ipow(q, k) % zero.modulus()), p, N) - Zmod(1, p, N)).inverse().pow((u64)n);
    kg[k] = S[k];
    kg[k].scale(-c);
  }
  u.push_back(Series<Zmod>::constant(Zmod(1, p, N), M, zero));
  for (int l = 1; l <= L; ++l) {
    Series<Zmod> acc(M, zero);
    for (int k = 1; k <= l; ++k) acc += kg[k] * u[l - k];
    acc.scale(Zmod(l, p, N).inverse());
    u.push_back(acc);
  }
  return u;
}

OracleRun oracle_run(const FPoly& f, int L, int M, int N, u64 seed) {
  OracleRun r;
  r.L = L;
  r.M = M;
  r.N = N;
  const u64 p = f.p();
  if ((u64)L >= p) throw Error(ErrorCode::IndexTooLarge, "L = " + std::to_string(L) + " needs division by p");
  r.S.resize(L + 1);
  for (int k = 1; k <= L; ++k) r.S[k] = exp_sum(f, k, M, N, seed);
  if (L == 0) {
    r.u = {Series<Zmod>::constant(Zmod(1, p, N), M, Zmod(0, p, N))};
  } else {
    r.u = char_series(r.S, p, fpoly_nvars(f), L);
  }
  for (const auto& s : r.u) r.valuations.push_back(s.val());
  return r;
}

Series<Zmod> t_to_pi(const Series<Zmod>& s, const ArtinHasseTable& t) {
  const int M = s.M();
  const Zmod zero = s[0] * Zmod(0);
  Series<Zmod> T = artin_hasse_series(t, M) - Series<Zmod>::constant(Zmod(1, zero.p(), zero.N()), M, zero);
  Series<Zmod> r = Series<Zmod>::constant(s[M], M, zero);
  for (int j = M - 1; j >= 0; --j) r = r * T + Series<Zmod>::constant(s[j], M, zero);
  return r;
}

namespace {

std::vector<VertexCheck> vertex_list(const Parallelotope& d, long p, long kmin, long kmax) {
  if (kmin < 0 || kmax < kmin) throw Error(ErrorCode::Domain, "bad k range");
  std::vector<VertexCheck> out;
  for (long k = kmin; k <= kmax; ++k)
    for (Side s : {Side::Open, Side::Closed}) {
      VertexCheck v;
      v.k = k;
      v.side = s;
      v.x = s == Side::Open ? x_minus(d, k) : x_plus(d, k);
      v.h = k == 0 ? 0 : h_dilate(d, p, k, s);
      out.push_back(v);
    }
  return out;
}

}  // namespace

NpCheckReport np_check(const Parallelotope& d, const FPoly& f, long kmin, long kmax, const OracleRun& run) {
  check_polytope(d, f);
  const long p = (long)f.p();
  NpCheckReport rep;
  rep.vertices = vertex_list(d, p, kmin, kmax);
  for (auto& v : rep.vertices) {
    if (v.x > run.L) throw Error(ErrorCode::Domain, "oracle run stops before x=" + std::to_string(v.x));
    if (v.h > run.M) throw Error(ErrorCode::Domain, "M must reach the vertex height " + std::to_string(v.h));
    v.val = run.valuations[v.x];
    v.generic = v.val == v.h;
    rep.passes &= v.generic;
  }
  auto ihp = improved_hodge_polygon(d, p, run.L);
  for (long l = 0; l <= run.L; ++l) {
    int val = run.valuations[l];
    if (val != kInfVal && Rational(val) < ihp.evaluate(l)) rep.above_ihp = false;
  }
  rep.passes &= rep.above_ihp;
  rep.run = run;
  return rep;
}

NpCheckReport np_check(const Parallelotope& d, const FPoly& f, long kmin, long kmax, int M) {
  check_polytope(d, f);
  long L = 0, hmax = 0;
  for (const auto& v : vertex_list(d, (long)f.p(), kmin, kmax)) {
    L = std::max(L, v.x);
    hmax = std::max(hmax, v.h);
  }
  if (M < 0) M = (int)hmax;
  for (long k = 1; k <= kmax; ++k) check_oracle_scale(f.p(), d.n, (int)k);
  return np_check(d, f, kmin, kmax, oracle_run(f, (int)L, M, 1));
}

CompareReport compare(const Parallelotope& d, const FPoly& f, int L, int M, int N, bool strict) {
  check_polytope(d, f);
  return compare(d, f, oracle_run(f, L, M, N), strict);
}

CompareReport compare(const Parallelotope& d, const FPoly& f, const OracleRun& run, bool strict) {
  check_polytope(d, f);
  CompareReport rep;
  const int L = rep.L = run.L, M = rep.M = run.M, N = rep.N = run.N;
  const u64 p = f.p();
  auto t = artin_hasse(p, M + 1, N);
  auto F = fredholm(d, f, L, M, N);
  for (int l = 0; l <= L; ++l) {
    Series<Zmod> a = t_to_pi(run.u[l], t);
    Series<Zmod> b = F.u[l];
    bool same = true;
    for (int j = 0; j <= M; ++j)
      if (a[j] != b[j]) {
        if (rep.ok) {
          rep.first_l = l;
          rep.first_deg = j;
        }
        rep.ok = same = false;
        break;
      }
    rep.oracle.push_back(a);
    rep.dwork.push_back(b);
    rep.val_oracle.push_back(a.val());
    rep.val_dwork.push_back(b.val());
    rep.match.push_back(same);
  }
  if (strict && !rep.ok)
    throw Error(ErrorCode::Mismatch, "u_" + std::to_string(rep.first_l) + " differs at pi^" +
                                         std::to_string(rep.first_deg));
  return rep;
}

}  // namespace nplab
