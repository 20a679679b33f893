#include "nplab/dwork.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>

#include "nplab/error.hpp"
#include "nplab/polygon.hpp"

namespace nplab {

namespace {

// coordinates scaled by vol: Z = Q * adj, so z = Z / vol
IVec zc(const Parallelotope& d, const IVec& Q) {
  IVec Z(d.n, 0);
  for (int j = 0; j < d.n; ++j) {
    long s = 0;
    for (int i = 0; i < d.n; ++i) s += Q[i] * d.adj(i, j);
    Z[j] = s;
  }
  return Z;
}

bool nonneg(const IVec& Z) {
  for (long v : Z)
    if (v < 0) return false;
  return true;
}

long maxv(const IVec& Z) {
  long m = 0;
  for (long v : Z) m = std::max(m, v);
  return m;
}

long sumv(const IVec& Z) {
  long s = 0;
  for (long v : Z) s += v;
  return s;
}

long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// floor(w(Q)) for a cone point
long floor_w(const Parallelotope& d, const IVec& Q) { return floor_div(maxv(zc(d, Q)), d.vol); }

bool all_zero(const IVec& Z) {
  for (long v : Z)
    if (v) return false;
  return true;
}

// cached Artin-Hasse tables mod p
const ArtinHasseTable& table_mod_p(u64 p, int size) {
  static std::mutex mu;
  static std::map<u64, ArtinHasseTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it == cache.end() || it->second.size() <= size) {
    int sz = std::max(size + 1, it == cache.end() ? 0 : 2 * it->second.size());
    cache[p] = artin_hasse(p, sz, 1);
  }
  return cache[p];
}

struct Gen {
  IVec P;
  IVec Z;
  int var;
};

std::vector<Gen> generators(const Parallelotope& d, EMode mode) {
  std::vector<Gen> g;
  if (mode == EMode::Res) {
    for (int mask = 1; mask < (1 << d.n); ++mask) {
      std::vector<int> S;
      for (int i = 0; i < d.n; ++i)
        if (mask >> i & 1) S.push_back(i);
      IVec P = vertex_of(d, S);
      g.push_back({P, zc(d, P), (int)S.size() - 1});
    }
  } else {
    auto pts = universal_points(d);
    for (int i = 0; i < (int)pts.size(); ++i) g.push_back({pts[i], zc(d, pts[i]), i});
  }
  return g;
}

int nvars_of(const Parallelotope& d, EMode mode) {
  return mode == EMode::Res ? d.n : (int)universal_points(d).size();
}

// multiply out prod_i (sum_j fac[i][j] pi^j x^{j P_i}) keeping w(Q) <= M
template <class R>
std::map<IVec, Series<R>> expand(const Parallelotope& d, int M, const std::vector<IVec>& pts,
                                 const std::vector<std::vector<R>>& fac, const R& zero, const R& one) {
  std::map<IVec, Series<R>> cur;
  cur.emplace(IVec(d.n, 0), Series<R>::constant(one, M, zero));
  const long wcap = (long)M * d.vol;
  for (size_t i = 0; i < pts.size(); ++i) {
    std::map<IVec, Series<R>> next;
    for (const auto& [Q, s] : cur) {
      IVec Qj = Q;
      for (int j = 0; j <= M; ++j) {
        if (j > 0) Qj = add(Qj, pts[i]);
        if (maxv(zc(d, Qj)) > wcap) break;
        const R& c = fac[i][j];
        if (is_zero(c)) continue;
        Series<R> t(M, zero);
        bool any = false;
        for (int a = 0; a + j <= M; ++a) {
          if (is_zero(s[a])) continue;
          t.coeff(a + j) = s[a] * c;
          any = true;
        }
        if (!any) continue;
        auto it = next.find(Qj);
        if (it == next.end()) {
          next.emplace(Qj, std::move(t));
        } else {
          it->second += t;
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Zq lift(const RingPtr& R, const Zq& a) {
  std::vector<long> c(R->m);
  for (int i = 0; i < R->m; ++i) c[i] = (long)a.coeff(i);
  return Zq::from_coeffs(R, c);
}

// E(a pi) as a series
Series<Zq> artin_hasse_at(const RingPtr& R, const Zq& a, int M, const ArtinHasseTable& t) {
  Zq zero(R);
  Series<Zq> s(M, zero);
  Zq pw = Zq::scalar(R, 1);
  for (int j = 0; j <= M; ++j) {
    s.coeff(j) = Zq::scalar(R, t[j]) * pw;
    pw *= a;
  }
  return s;
}

// decompositions X = sum j_P P, sum j_P = cnt
void decompose(const std::vector<Gen>& g, size_t idx, const IVec& rem, long cnt, u64 coeff, Exps& ex, long vol,
               u64 p, const ArtinHasseTable& t, MPoly& out) {
  if (cnt == 0) {
    if (all_zero(rem)) out += MPoly::monomial(p, ex, (long)coeff);
    return;
  }
  if (idx == g.size()) return;
  if (maxv(rem) > cnt * vol) return;
  const Gen& G = g[idx];
  if (idx + 1 == g.size()) {
    for (size_t i = 0; i < rem.size(); ++i)
      if (rem[i] != cnt * G.Z[i]) return;
    u64 c = t.mod_p((int)cnt);
    if (!c) return;
    ex[G.var] += (int)cnt;
    out += MPoly::monomial(p, ex, (long)mulmod(coeff, c, p));
    ex[G.var] -= (int)cnt;
    return;
  }
  IVec r = rem;
  for (long j = 0; j <= cnt; ++j) {
    if (j > 0) {
      for (size_t i = 0; i < r.size(); ++i) r[i] -= G.Z[i];
      if (!nonneg(r)) break;
    }
    u64 c = t.mod_p((int)j);
    if (!c) continue;
    ex[G.var] += (int)j;
    decompose(g, idx + 1, r, cnt - j, mulmod(coeff, c, p), ex, vol, p, t, out);
    ex[G.var] -= (int)j;
  }
}

struct CoeffCache {
  const Parallelotope& d;
  u64 p;
  EMode mode;
  std::vector<Gen> g;
  int nv;
  std::map<std::pair<IVec, long>, MPoly> memo;

  CoeffCache(const Parallelotope& d_, u64 p_, EMode m) : d(d_), p(p_), mode(m), g(generators(d_, m)), nv(nvars_of(d_, m)) {}

  const MPoly& get(const IVec& X, long j) {
    auto key = std::make_pair(X, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    MPoly r(p, nv);
    IVec Z = zc(d, X);
    if (nonneg(Z) && j >= 0) {
      const auto& t = table_mod_p(p, (int)j + 1);
      Exps ex(nv, 0);
      decompose(g, 0, Z, j, 1, ex, d.vol, p, t, r);
    }
    return memo.emplace(key, std::move(r)).first->second;
  }
};

// rows/cols: (P0, I) group of Delta_k^+-, rows indexed by Q, columns by Q'
GradedMatrix group_matrix(const Parallelotope& d, u64 p, const IVec& P0, const std::vector<LatticePoint>& pts,
                          CoeffCache& cc) {
  const int s = (int)pts.size();
  IVec shift = sub(P0, eta(d, p, P0));  // P0 - eta(P0)
  GradedMatrix G;
  G.B = Mat<MPoly>(s, s);
  for (int v = 0; v < d.n; ++v) G.var_grade.push_back({1, (long)(v + 1) * d.vol});
  for (int i = 0; i < s; ++i) {
    IVec pQ = scale((long)p, pts[i].Q);
    G.row_grade.push_back({floor_w(d, pQ), sumv(zc(d, add(pQ, shift)))});
    IVec Qc = sub(pts[i].Q, shift);  // the column point Q' - P0 + eta(P0)
    G.col_grade.push_back({-floor_w(d, Qc), -sumv(zc(d, pts[i].Q))});
  }
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      IVec X = add(sub(scale((long)p, pts[i].Q), pts[j].Q), shift);
      long jd = G.row_grade[i][0] + G.col_grade[j][0];
      G.B(i, j) = cc.get(X, jd);
    }
  return G;
}

std::map<std::pair<IVec, std::vector<int>>, std::vector<LatticePoint>> groups_of(const Parallelotope& d,
                                                                               const std::vector<LatticePoint>& pts) {
  std::map<std::pair<IVec, std::vector<int>>, std::vector<LatticePoint>> g;
  for (const auto& q : pts) {
    std::vector<int> I;
    for (int i = 0; i < d.n; ++i)
      if (q.z[i] == 0) I.push_back(i);
    g[{residue(d, q.Q), I}].push_back(q);
  }
  return g;
}

}  // namespace

std::string FPoly::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [P, a] : coeff) {
    if (a.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << a.str() << ")*x^" << vec_str(P);
  }
  if (first) os << "0";
  return os.str();
}

const char* mode_name(EMode m) {
  switch (m) {
    case EMode::Numeric: return "numeric";
    case EMode::Full: return "full";
    case EMode::Res: return "res";
  }
  return "?";
}

std::vector<IVec> universal_points(const Parallelotope& d) {
  std::vector<IVec> out;
  for (const auto& q : enumerate(d, 1, Side::Closed)) {
    bool origin = true;
    for (long v : q.Q) origin &= v == 0;
    if (!origin) out.push_back(q.Q);
  }
  return out;
}

void check_polytope(const Parallelotope& d, const FPoly& f) {
  for (const auto& [P, a] : f.coeff) {
    if ((int)P.size() != d.n) throw Error(ErrorCode::WrongPolytope, "exponent " + vec_str(P) + " has wrong dimension");
    if (a.is_zero()) continue;
    QVec z = coords(d, P);
    bool ok = true;
    for (const auto& v : z) ok &= v >= 0 && v <= 1;
    if (!ok) throw Error(ErrorCode::WrongPolytope, "exponent " + vec_str(P) + " outside the polytope");
  }
  for (int mask = 1; mask < (1 << d.n); ++mask) {
    std::vector<int> S;
    for (int i = 0; i < d.n; ++i)
      if (mask >> i & 1) S.push_back(i);
    IVec V = vertex_of(d, S);
    auto it = f.coeff.find(V);
    if (it == f.coeff.end() || it->second.is_zero())
      throw Error(ErrorCode::WrongPolytope, "vertex coefficient at " + vec_str(V) + " vanishes");
  }
}

int field_degree(const FPoly& f) {
  const int m = f.m();
  for (int e = 1; e <= m; ++e) {
    if (m % e) continue;
    bool ok = true;
    for (const auto& [P, a] : f.coeff) {
      Zq b = a;
      for (int i = 0; i < e; ++i) b = b.frobenius();
      if (b != a) {
        ok = false;
        break;
      }
    }
    if (ok) return e;
  }
  return m;
}

FPoly make_fpoly(long p, const std::map<IVec, long>& c) {
  FPoly f;
  f.fq = make_galois_ring((u64)p, 1, 1);
  for (const auto& [P, v] : c) {
    Zq a = Zq::scalar(f.fq, v);
    if (!a.is_zero()) f.coeff[P] = a;
  }
  return f;
}

FPoly random_fpoly(const Parallelotope& d, const RingPtr& fq, u64 seed) {
  std::mt19937_64 rng(seed);
  FPoly f;
  f.fq = fq;
  std::vector<IVec> pts{IVec(d.n, 0)};
  for (auto& P : universal_points(d)) pts.push_back(P);
  std::vector<IVec> verts;
  for (int mask = 1; mask < (1 << d.n); ++mask) {
    std::vector<int> S;
    for (int i = 0; i < d.n; ++i)
      if (mask >> i & 1) S.push_back(i);
    verts.push_back(vertex_of(d, S));
  }
  for (const auto& P : pts) {
    bool vertex = std::find(verts.begin(), verts.end(), P) != verts.end();
    for (;;) {
      std::vector<long> c(fq->m);
      for (auto& x : c) x = (long)(rng() % fq->p);
      Zq a = Zq::from_coeffs(fq, c);
      if (vertex && a.is_zero()) continue;
      if (!a.is_zero()) f.coeff[P] = a;
      break;
    }
  }
  return f;
}

ECoefficients<Zq> expand_E(const Parallelotope& d, const FPoly& f, int N, int M, const ArtinHasseTable& table) {
  if (M < 1 || N < 1) throw Error(ErrorCode::Domain, "expand_E needs M, N >= 1");
  if (table.N < N || table.size() <= M) throw Error(ErrorCode::PrecisionExhausted, "Artin-Hasse table too short");
  RingPtr R = with_precision(f.fq, N);
  Zq zero(R), one = Zq::scalar(R, 1);
  std::vector<IVec> pts;
  std::vector<std::vector<Zq>> fac;
  for (const auto& P : universal_points(d)) {
    auto it = f.coeff.find(P);
    if (it == f.coeff.end() || it->second.is_zero()) continue;
    Zq a = teichmuller(lift(R, it->second));
    std::vector<Zq> row;
    Zq pw = one;
    for (int j = 0; j <= M; ++j) {
      row.push_back(Zq::scalar(R, table[j].reduce(N)) * pw);
      pw *= a;
    }
    pts.push_back(P);
    fac.push_back(std::move(row));
  }
  ECoefficients<Zq> E;
  E.mode = EMode::Numeric;
  E.M = M;
  E.zero = zero;
  E.e = expand(d, M, pts, fac, zero, one);
  return E;
}

ECoefficients<MPoly> expand_E_universal(const Parallelotope& d, u64 p, EMode mode, int M) {
  if (mode == EMode::Numeric) throw Error(ErrorCode::Domain, "universal expansion needs full or res mode");
  const auto& t = table_mod_p(p, M + 1);
  auto g = generators(d, mode);
  const int nv = nvars_of(d, mode);
  MPoly zero(p, nv), one = MPoly::constant(p, nv, 1);
  std::vector<IVec> pts;
  std::vector<std::vector<MPoly>> fac;
  for (const auto& G : g) {
    std::vector<MPoly> row;
    for (int j = 0; j <= M; ++j) row.push_back(MPoly::var(p, nv, G.var, j).scale(t.mod_p(j)));
    pts.push_back(G.P);
    fac.push_back(std::move(row));
  }
  ECoefficients<MPoly> E;
  E.mode = mode;
  E.M = M;
  E.zero = zero;
  E.e = expand(d, M, pts, fac, zero, one);
  return E;
}

Rational default_cutoff(long p, int M) { return Rational(M + 1, p - 1) + 1; }

DworkMatrix dwork_matrix(const Parallelotope& d, long p, const ECoefficients<Zq>& E, const Zq& aO, const Rational& W) {
  if (E.mode != EMode::Numeric) throw Error(ErrorCode::Domain, "dwork_matrix needs numeric coefficients");
  DworkMatrix D;
  D.M = E.M;
  D.W = W;
  const RingPtr& R = E.zero.ring();
  D.m = R->m;
  for (auto& q : enumerate(d, to_long(ceil_q(W)), Side::Closed))
    if (q.w <= W) D.basis.push_back(q);
  const int b = (int)D.basis.size();
  int tsize = E.M + 1;
  auto t = artin_hasse((u64)p, tsize, R->N);
  Series<Zq> E0 = artin_hasse_at(R, aO.literal() ? Zq(R) : aO, E.M, t);
  D.N = Mat<Series<Zq>>(b, b);
  Series<Zq> zero(E.M, E.zero);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) {
      IVec X = sub(scale(p, D.basis[i].Q), D.basis[j].Q);
      if (!in_cone(d, X)) {
        D.N(i, j) = zero;
        continue;
      }
      D.N(i, j) = E0 * E.get(X);
    }
  return D;
}

FredholmSeries fredholm(const Parallelotope& d, long p, const DworkMatrix& D, int L) {
  const int M = D.M;
  // every point whose row can stay at or below pi^M must be in the basis
  long kk = to_long(floor_q(Rational(M + 1, p - 1))) + 1;
  for (const auto& q : enumerate(d, kk, Side::Closed)) {
    if (h_point(d, p, q) > M) continue;
    if (q.w > D.W)
      throw Error(ErrorCode::TruncationUnsound,
                  "cutoff W=" + to_string(D.W) + " drops " + vec_str(q.Q) + " which can contribute below pi^" +
                      std::to_string(M + 1));
  }
  // rows with h(Q) > M only feed terms above pi^M (also through the
  // Frobenius product, by Cauchy-Binet), so they can be dropped
  std::vector<int> keep;
  for (int i = 0; i < (int)D.basis.size(); ++i)
    if (h_point(d, p, D.basis[i]) <= M) keep.push_back(i);
  const int b = (int)keep.size();
  Mat<Series<Zq>> N(b, b);
  for (int r = 0; r < b; ++r)
    for (int c = 0; c < b; ++c) N(r, c) = D.N(keep[r], keep[c]);
  const RingPtr R = D.N.size() ? D.N(0, 0)[0].ring() : RingPtr();
  Zmod zmod0 = R ? Zmod(0, R->p, R->N) : Zmod(0, (u64)p, 1);
  auto to_zmod = [&](const Series<Zq>& s) {
    Series<Zmod> u(M, zmod0);
    if (s.literal()) {
      if (s == Series<Zq>(1)) u.coeff(0) = Zmod(1, zmod0.p(), zmod0.N());
      else if (!(s == Series<Zq>(0))) throw Error(ErrorCode::Inconsistent, "unexpected literal coefficient");
      return u;
    }
    for (int i = 0; i <= M; ++i) u.coeff(i) = s[i].to_scalar();
    return u;
  };
  std::vector<Series<Zmod>> c;
  if (D.m == 1) {
    Mat<Series<Zmod>> A(b, b);
    for (int r = 0; r < b; ++r)
      for (int col = 0; col < b; ++col) A(r, col) = to_zmod(N(r, col));
    c = berkowitz(A);
  } else {
    Mat<Series<Zq>> A = N, S = N;
    for (int j = 1; j < D.m; ++j) {
      for (int r = 0; r < b; ++r)
        for (int col = 0; col < b; ++col) S(r, col) = S(r, col).map([](const Zq& x) { return x.frobenius(); });
      Mat<Series<Zq>> P(b, b);
      for (int r = 0; r < b; ++r)
        for (int col = 0; col < b; ++col) {
          Series<Zq> acc = S(r, 0) * A(0, col);
          for (int k = 1; k < b; ++k) acc += S(r, k) * A(k, col);
          P(r, col) = acc;
        }
      A = std::move(P);
    }
    for (auto& x : berkowitz(A)) c.push_back(to_zmod(x));
  }
  FredholmSeries F;
  F.m = D.m;
  F.M = M;
  for (int l = 0; l <= L; ++l) {
    Series<Zmod> u(M, zmod0);
    if (l < (int)c.size()) {
      if (c[l].literal()) {
        if (c[l] == Series<Zmod>(1)) u.coeff(0) = Zmod(1, zmod0.p(), zmod0.N());
      } else {
        u = c[l];
      }
    }
    F.valuations.push_back(u.val());
    F.u.push_back(std::move(u));
  }
  return F;
}

FredholmSeries fredholm(const Parallelotope& d, const FPoly& f, int L, int M, int N, const Rational& W) {
  check_polytope(d, f);
  const long p = (long)f.p();
  auto t = artin_hasse((u64)p, M + 1, N);
  auto E = expand_E(d, f, N, M, t);
  RingPtr R = with_precision(f.fq, N);
  Zq aO(R);
  auto it = f.coeff.find(IVec(d.n, 0));
  if (it != f.coeff.end() && !it->second.is_zero()) aO = teichmuller(lift(R, it->second));
  auto D = dwork_matrix(d, p, E, aO, W);
  return fredholm(d, p, D, L);
}

FredholmSeries fredholm(const Parallelotope& d, const FPoly& f, int L, int M, int N) {
  return fredholm(d, f, L, M, N, default_cutoff((long)f.p(), M));
}

// --- leading coefficients ---

MPoly universal_coefficient(const Parallelotope& d, u64 p, EMode mode, const IVec& X, long j,
                            const ArtinHasseTable& table) {
  const int nv = nvars_of(d, mode);
  MPoly r(p, nv);
  IVec Z = zc(d, X);
  if (!nonneg(Z) || j < 0) return r;
  if (table.size() <= j) throw Error(ErrorCode::PrecisionExhausted, "Artin-Hasse table too short");
  Exps ex(nv, 0);
  decompose(generators(d, mode), 0, Z, j, 1, ex, d.vol, p, table, r);
  return r;
}

namespace {

GradedMatrix leading_matrix_cached(const Parallelotope& d, u64 p, const std::vector<LatticePoint>& pts, EMode mode,
                                   CoeffCache& cc) {
  const int s = (int)pts.size();
  GradedMatrix G;
  G.B = Mat<MPoly>(s, s);
  if (mode == EMode::Full) {
    for (const auto& P : universal_points(d)) {
      std::vector<long> gr(P.begin(), P.end());
      gr.push_back(1);
      G.var_grade.push_back(gr);
    }
  } else {
    for (int v = 0; v < d.n; ++v) G.var_grade.push_back({1, (long)(v + 1) * d.vol});
  }
  for (int i = 0; i < s; ++i) {
    const IVec& Q = pts[i].Q;
    IVec pQ = scale((long)p, Q);
    if (mode == EMode::Full) {
      std::vector<long> r, c;
      for (long v : Q) r.push_back(-v);
      r.push_back(-floor_w(d, Q));
      for (long v : pQ) c.push_back(v);
      c.push_back(floor_w(d, pQ));
      G.row_grade.push_back(r);
      G.col_grade.push_back(c);
    } else {
      G.row_grade.push_back({-floor_w(d, Q), -sumv(zc(d, Q))});
      G.col_grade.push_back({floor_w(d, pQ), sumv(zc(d, pQ))});
    }
  }
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      IVec X = sub(scale((long)p, pts[j].Q), pts[i].Q);
      long jd = floor_w(d, scale((long)p, pts[j].Q)) - floor_w(d, pts[i].Q);
      G.B(i, j) = cc.get(X, jd);
    }
  return G;
}

}  // namespace

GradedMatrix leading_matrix(const Parallelotope& d, u64 p, long k, Side side, EMode mode, const ArtinHasseTable&) {
  if (mode == EMode::Numeric) throw Error(ErrorCode::Domain, "leading_matrix needs full or res mode");
  CoeffCache cc(d, p, mode);
  return leading_matrix_cached(d, p, enumerate(d, k, side), mode, cc);
}

MPoly block_determinant(const Parallelotope& d, u64 p, const IVec& P0, const std::vector<LatticePoint>& pts,
                        long* pi_power, long max_evals) {
  CoeffCache cc(d, p, EMode::Res);
  GradedMatrix G = group_matrix(d, p, P0, pts, cc);
  if (pi_power) {
    long s = 0;
    for (size_t i = 0; i < pts.size(); ++i) s += G.row_grade[i][0] + G.col_grade[i][0];
    *pi_power = s;
  }
  return graded_determinant(G, p, nullptr, max_evals);
}

namespace {

std::vector<MPoly> factored_res(const Parallelotope& d, u64 p, long k, Side side, long max_evals) {
  std::vector<MPoly> out;
  for (const auto& [key, pts] : groups_of(d, enumerate(d, k, side)))
    out.push_back(block_determinant(d, p, key.first, pts, nullptr, max_evals));
  return out;
}

}  // namespace

LeadingResult leading_coefficient(const Parallelotope& d, u64 p, long k, Side side, EMode mode, long max_evals) {
  if (d.vol % (long)p == 0) throw Error(ErrorCode::Domain, "p divides the volume");
  if (k < 1) throw Error(ErrorCode::Domain, "k must be at least 1");
  if (mode == EMode::Numeric) throw Error(ErrorCode::Domain, "leading_coefficient needs full or res mode");
  LeadingResult r;
  r.k = k;
  r.side = side;
  auto pts = enumerate(d, k, side);
  r.size = (long)pts.size();
  r.h = h_dilate(d, (long)p, k, side);
  for (EMode m : {EMode::Full, EMode::Res}) {
    if (mode == EMode::Res && m == EMode::Full) continue;
    try {
      CoeffCache cc(d, p, m);
      GradedMatrix G = leading_matrix_cached(d, p, pts, m, cc);
      r.poly = graded_determinant(G, p, &r.stats, max_evals);
      r.mode = m;
      r.nonzero = !r.poly.is_zero();
      return r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OutOfMemory) throw;
    }
  }
  r.mode = EMode::Res;
  r.factored = true;
  r.factors = factored_res(d, p, k, side, max_evals);
  r.nonzero = true;
  for (const auto& f : r.factors) r.nonzero &= !f.is_zero();
  return r;
}

VerifyReport verify_generic(const Parallelotope& d, u64 p, long kmin, long kmax, long max_evals) {
  VerifyReport rep;
  rep.hypothesis = hypothesis_holds(d, (long)p);
  for (long k = kmin; k <= kmax; ++k)
    for (Side s : {Side::Open, Side::Closed}) {
      auto r = leading_coefficient(d, p, k, s, EMode::Full, max_evals);
      if (!r.nonzero) {
        rep.passed = false;
        rep.failures.push_back({k, s});
      }
      rep.results.push_back(std::move(r));
    }
  return rep;
}

Zq specialized_leading(const Parallelotope& d, const FPoly& f, long k, Side side) {
  const u64 p = f.p();
  CoeffCache cc(d, p, EMode::Full);
  GradedMatrix G = leading_matrix_cached(d, p, enumerate(d, k, side), EMode::Full, cc);
  std::vector<Zq> pt;
  Zq zero(f.fq), one = Zq::scalar(f.fq, 1);
  for (const auto& P : universal_points(d)) {
    auto it = f.coeff.find(P);
    pt.push_back(it == f.coeff.end() ? zero : it->second);
  }
  const int s = (int)G.B.rows();
  Mat<Zq> A(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) A(i, j) = G.B(i, j).is_zero() ? zero : G.B(i, j).evaluate(pt, one);
  return det_field(A);
}

bool ozar_membership(const Parallelotope& d, const FPoly& f) {
  check_polytope(d, f);
  for (long k = 1; k <= d.n + 2; ++k)
    for (Side s : {Side::Open, Side::Closed})
      if (specialized_leading(d, f, k, s).is_zero()) return false;
  return true;
}

BlockFactorization res_block_factorization(const Parallelotope& d, u64 p, long k, Side side, long max_evals) {
  BlockFactorization out;
  auto pts = enumerate(d, k, side);
  {
    CoeffCache cc(d, p, EMode::Res);
    GradedMatrix G = leading_matrix_cached(d, p, pts, EMode::Res, cc);
    out.direct = graded_determinant(G, p, nullptr, max_evals);
  }
  out.blocks = block_decomposition(d, k, side);
  MPoly prod = MPoly::constant(p, d.n, 1);
  // column permutation Q -> Q - P0 + eta(P0) in canonical order
  std::map<IVec, int> index;
  for (int i = 0; i < (int)pts.size(); ++i) index[pts[i].Q] = i;
  std::vector<int> perm(pts.size());
  for (int i = 0; i < (int)pts.size(); ++i) {
    IVec P0 = residue(d, pts[i].Q);
    IVec img = add(sub(pts[i].Q, P0), eta(d, (long)p, P0));
    auto it = index.find(img);
    if (it == index.end()) throw Error(ErrorCode::Inconsistent, "shifted point " + vec_str(img) + " not in the dilate");
    perm[i] = it->second;
  }
  out.sign = perm_sign(perm);
  for (const auto& [key, g] : groups_of(d, pts)) {
    MPoly f = block_determinant(d, p, key.first, g, nullptr, max_evals);
    out.factors.push_back(f);
    prod *= f;
  }
  MPoly signed_prod = out.sign > 0 ? prod : -prod;
  out.equal = signed_prod == out.direct;
  if (!out.equal)
    throw Error(ErrorCode::FactorizationMismatch, "block product differs from the direct res determinant at k=" +
                                                      std::to_string(k) + " (" + side_name(side) + ")");
  return out;
}

// --- section 5 calculus ---

Zmod xi(const std::vector<long>& w, const ArtinHasseTable& table) {
  Zmod r(1, table.p, 1);
  long prev = 0;
  for (long x : w) {
    long s = x - prev;
    if (s < 0) return Zmod(0, table.p, 1);
    if (s >= table.size()) throw Error(ErrorCode::PrecisionExhausted, "Artin-Hasse table too short");
    r *= Zmod((long)table.mod_p((int)s), table.p, 1);
    prev = x;
  }
  return r;
}

std::vector<std::vector<long>> v_set(int l, long k) {
  std::vector<std::vector<long>> out;
  std::vector<long> v(l, 0);
  std::function<void(int, long)> rec = [&](int i, long lo) {
    if (i == l) {
      out.push_back(v);
      return;
    }
    for (long x = lo; x <= k; ++x) {
      v[i] = x;
      rec(i + 1, x);
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

MatrixMResult matrix_M(const std::vector<long>& w, long k, long p, const ArtinHasseTable& table) {
  if (w.empty()) throw Error(ErrorCode::Domain, "w must be nonempty");
  if (table.p != (u64)p) throw Error(ErrorCode::Domain, "table for the wrong prime");
  const int l = (int)w.size();
  auto V = v_set(l, k);
  const int s = (int)V.size();
  MatrixMResult r;
  r.M = Mat<Zmod>(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      std::vector<long> u(l);
      for (int t = 0; t < l; ++t) u[t] = w[t] + p * V[i][t] - V[j][t];
      r.M(i, j) = xi(u, table);
    }
  r.det = det_field(r.M);
  if (l == 1) {
    Zmod c((long)table.mod_p((int)w[0]), (u64)p, 1);
    Zmod sign((k * (k + 1) / 2) % 2 ? -1 : 1, (u64)p, 1);
    r.closed_form_k_plus_1 = r.det == sign * c.pow((u64)(k + 1));
    if (c.is_unit()) {
      Zmod e = k >= 1 ? c.pow((u64)(k - 1)) : c.inverse();
      r.closed_form_k_minus_1 = r.det == sign * e;
    }
  }
  return r;
}

std::vector<int> partial_degree(const MPoly& g) {
  if (g.is_zero()) return {};
  if (g.literal()) return {0};
  std::vector<int> best;
  for (const auto& [e, c] : g.terms()) {
    std::vector<int> r(e.rbegin(), e.rend());
    if (best.empty() || best < r) best = r;
  }
  return best;
}

bool deg_less(const std::vector<int>& a, const std::vector<int>& b) { return a < b; }

MPoly leading_part(const MPoly& g) {
  if (g.is_zero() || g.literal()) return g;
  auto deg = partial_degree(g);
  Exps e(deg.rbegin(), deg.rend());
  return MPoly::monomial(g.p(), e, (long)g.coeff(e));
}

MPoly gamma_monomial(const Parallelotope& d, u64 p, const IVec& Q1, long* pi_power) {
  QVec z = coords(d, Q1);
  for (const auto& v : z)
    if (den(v) != 1 || v < 0) throw Error(ErrorCode::Domain, "gamma needs a point of the cone lattice");
  auto ch = chain_of(z);
  Exps e(d.n, 0);
  long prev = 0, total = 0;
  for (size_t i = 0; i < ch.size(); ++i) {
    long m = to_long(num(z[ch[i][0]]));
    long cnt = 0;
    for (size_t j = i; j < ch.size(); ++j) cnt += (long)ch[j].size();
    e[cnt - 1] += (int)(m - prev);
    prev = m;
  }
  total = prev;
  if (pi_power) *pi_power = total;
  return MPoly::monomial(p, e, 1);
}

BlockLeading block_leading_determinant(const Parallelotope& d, u64 p, const BlockDecomposition& b, long max_evals) {
  BlockLeading out;
  const long P = (long)p;
  IVec shift = sub(b.P0, eta(d, P, b.P0));
  IVec Qz = add(sub(scale(P, b.Qmin.Q), b.Qmin.Q), shift);
  QVec z = coords(d, Qz);
  const int l = (int)b.chain.size();
  for (int i = 0; i < l; ++i) {
    Rational v = z[b.chain[i][0]];
    for (int idx : b.chain[i])
      if (z[idx] != v) throw Error(ErrorCode::Inconsistent, "shifted minimum leaves its chain");
    if (den(v) != 1) throw Error(ErrorCode::Inconsistent, "shifted minimum not in the lattice");
    out.z.push_back(to_long(num(v)));
  }
  for (int i : b.I)
    if (z[i] != 0) throw Error(ErrorCode::Inconsistent, "shifted minimum leaves its face");
  long maxidx = (out.z.empty() ? 0 : out.z.back()) + P * (b.K + 1) + 2;
  const auto& t = table_mod_p(p, (int)maxidx + 1);
  const bool hyp = hypothesis_holds(d, P);

  // gamma product and pi power
  out.monomial = MPoly::constant(p, d.n, 1);
  out.pi_power = 0;
  for (const auto& m : b.offsets) {
    // Q1 = sum m_i V_{S_i}
    IVec Q1(d.n, 0);
    for (int i = 0; i < l; ++i) Q1 = add(Q1, scale(m[i], vertex_of(d, b.chain[i])));
    long pw = 0;
    out.monomial *= gamma_monomial(d, p, add(Qz, scale(P - 1, Q1)), &pw);
    out.pi_power += pw;
  }
  out.expected_pi_power = 0;
  for (const auto& q : b.members)
    out.expected_pi_power += floor_w(d, scale(P, q.Q)) - floor_w(d, sub(q.Q, shift));
  if (l == 0) {
    out.unit = Zmod(1, p, 1);
  } else {
    out.unit = matrix_M(out.z, b.K, P, t).det;
  }
  if (out.unit.is_zero() && hyp)
    throw Error(ErrorCode::NotAUnit, "det M vanishes mod p for a block at P0=" + vec_str(b.P0));

  // direct: leading part of the actual block determinant
  const auto& pts = b.members;
  long pw = 0;
  MPoly det = block_determinant(d, p, b.P0, pts, &pw, max_evals);
  out.direct_pi_power = pw;
  out.direct_leading = leading_part(det);
  out.matches_block = pw == out.pi_power && out.direct_leading == out.monomial.scale(out.unit.residue());
  return out;
}

}  // namespace nplab
