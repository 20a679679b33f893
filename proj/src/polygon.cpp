#include "nplab/polygon.hpp"

#include <algorithm>

#include "nplab/error.hpp"
#include "nplab/series.hpp"
#include "nplab/zmod.hpp"

namespace nplab {

Rational NewtonPolygon::evaluate(long x) const {
  if (vertices.empty() || x < vertices.front().x || x > vertices.back().x)
    throw Error(ErrorCode::Domain, "x outside polygon range");
  for (size_t i = 1; i < vertices.size(); ++i) {
    const Vertex &a = vertices[i - 1], &b = vertices[i];
    if (x <= b.x) return a.y + (b.y - a.y) * Rational(x - a.x, b.x - a.x);
  }
  return vertices.back().y;
}

std::vector<Rational> NewtonPolygon::slopes() const {
  std::vector<Rational> s;
  for (size_t i = 1; i < vertices.size(); ++i) {
    const Vertex &a = vertices[i - 1], &b = vertices[i];
    Rational sl = (b.y - a.y) / Rational(b.x - a.x);
    for (long t = a.x; t < b.x; ++t) s.push_back(sl);
  }
  return s;
}

NewtonPolygon lower_hull(std::vector<std::pair<long, Rational>> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<long, Rational>> u;
  for (auto& pt : pts)
    if (u.empty() || u.back().first != pt.first) u.push_back(pt);  // sorted: first has min y
  // cross <= 0 means the middle point is not strictly below the chord
  auto cross = [](const std::pair<long, Rational>& o, const std::pair<long, Rational>& a,
                  const std::pair<long, Rational>& b) {
    return Rational(a.first - o.first) * (b.second - o.second) - (a.second - o.second) * Rational(b.first - o.first);
  };
  std::vector<std::pair<long, Rational>> h;
  for (auto& pt : u) {
    while (h.size() >= 2 && cross(h[h.size() - 2], h.back(), pt) <= 0) h.pop_back();
    h.push_back(pt);
  }
  NewtonPolygon np;
  for (auto& [x, y] : h) np.vertices.push_back({x, y});
  return np;
}

bool hypothesis_holds(const Parallelotope& d, long p) {
  return is_prime((u64)p) && d.vol % p != 0 && p > (d.n + 4) * d.D;
}

long h_point(const Parallelotope&, long p, const LatticePoint& q) {
  return to_long(floor_q(q.w * Rational(p)) - floor_q(q.w));
}

long h_of_set(const Parallelotope& d, long p, const std::vector<IVec>& S) {
  long s = 0;
  for (auto& Q : S) s += h_point(d, p, make_point(d, Q));
  return s;
}

long h_dilate(const Parallelotope& d, long p, long k, Side side) {
  long s = 0;
  for (auto& q : enumerate(d, k, side)) s += h_point(d, p, q);
  return s;
}

std::vector<LatticePoint> smallest_set(const Parallelotope& d, long lmax) {
  long K = 1;
  while (count_closed_form(d, K).second < lmax) ++K;
  auto pts = enumerate(d, K, Side::Closed);
  pts.resize(std::min<size_t>(pts.size(), (size_t)lmax));
  return pts;
}

NewtonPolygon hodge_polygon(const Parallelotope& d, long p, long lmax) {
  if (lmax < 1) throw Error(ErrorCode::Domain, "lmax must be >= 1");
  auto W = smallest_set(d, lmax);
  std::vector<std::pair<long, Rational>> pts{{0, Rational(0)}};
  Rational acc = 0;
  for (long l = 1; l <= lmax; ++l) {
    acc += Rational(p - 1) * W[l - 1].w;
    pts.push_back({l, acc});
  }
  return lower_hull(pts);
}

NewtonPolygon improved_hodge_polygon(const Parallelotope& d, long p, long lmax) {
  if (lmax < 1) throw Error(ErrorCode::Domain, "lmax must be >= 1");
  auto W = smallest_set(d, lmax);
  std::vector<std::pair<long, Rational>> pts{{0, Rational(0)}};
  long acc = 0;
  for (long l = 1; l <= lmax; ++l) {
    acc += h_point(d, p, W[l - 1]);
    pts.push_back({l, Rational(acc)});
  }
  return lower_hull(pts);
}

bool ihphp_predicate_2(const Parallelotope& d, long p) {
  for (auto& P0 : enumerate(d, 1, Side::Open))
    for (int a = 0; a < d.n; ++a)
      for (int b = 0; b < d.n; ++b)
        if (P0.z[a] < P0.z[b] && frac_q(Rational(p) * P0.z[a]) > frac_q(Rational(p) * P0.z[b])) return true;
  return false;
}

bool ihphp_predicate_3(const Parallelotope& d, long p) {
  for (auto& P0 : enumerate(d, 1, Side::Open)) {
    Rational mr = *std::max_element(P0.z.begin(), P0.z.end());
    Rational mf = 0;
    for (auto& r : P0.z) mf = std::max(mf, frac_q(Rational(p) * r));
    bool meet = false;
    for (int j = 0; j < d.n; ++j)
      if (P0.z[j] == mr && frac_q(Rational(p) * P0.z[j]) == mf) meet = true;
    if (!meet) return true;
  }
  return false;
}

GapReport ihp_hp_gap(const Parallelotope& d, long p, long k, Side side) {
  if (k < 1) throw Error(ErrorCode::Domain, "k must be >= 1");
  GapReport r;
  r.k = k;
  r.side = side;
  auto [xm, xp] = count_closed_form(d, k);
  r.x = side == Side::Open ? xm : xp;
  r.ihp = improved_hodge_polygon(d, p, r.x).evaluate(r.x);
  r.hp = hodge_polygon(d, p, r.x).evaluate(r.x);
  r.gap = r.ihp - r.hp;
  r.pred_strict_k2 = ihphp_predicate_2(d, p);
  r.pred_strict_k1 = ihphp_predicate_3(d, p);
  r.strict_guaranteed = r.pred_strict_k1 || (r.pred_strict_k2 && k >= 2);
  return r;
}

Rational HFit::eval(long k) const {
  Rational s = 0, kk = 1;
  for (auto& c : coeffs) {
    s += c * kk;
    kk *= k;
  }
  return s;
}

HFit h_polynomial_fit(const Parallelotope& d, long p, Side side, bool strict) {
  const int m = d.n + 2;  // number of samples = number of coefficients
  HFit f;
  QMat A(m, m + 1);
  for (int i = 0; i < m; ++i) {
    long k = i + 1;
    long hv = h_dilate(d, p, k, side);
    f.values.push_back(hv);
    Rational kk = 1;
    for (int j = 0; j < m; ++j) {
      A(i, j) = kk;
      kk *= k;
    }
    A(i, m) = hv;
  }
  // Vandermonde solve by Gauss-Jordan
  for (int c = 0; c < m; ++c) {
    int piv = c;
    while (A(piv, c) == 0) ++piv;
    A.row(piv).swap(A.row(c));
    A.row(c) /= A(c, c);
    for (int r = 0; r < m; ++r)
      if (r != c && A(r, c) != 0) A.row(r) -= A(r, c) * A.row(c);
  }
  for (int j = 0; j < m; ++j) {
    f.coeffs.push_back(A(j, m));
    if (den(A(j, m)) != 1) f.integral = false;
  }
  if (strict && !f.integral) throw Error(ErrorCode::NonIntegralFit, "h fit has a non-integer coefficient");
  return f;
}

long x_minus(const Parallelotope& d, long j) { return j == 0 ? 0 : count_closed_form(d, j).first; }
long x_plus(const Parallelotope& d, long j) { return j == 0 ? 1 : count_closed_form(d, j).second; }

static long binom(long n, long k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

SlopeDistribution slope_distribution(const Parallelotope& d, long p, int m_chi) {
  if (m_chi < 1) throw Error(ErrorCode::Domain, "m_chi must be >= 1");
  SlopeDistribution s;
  s.p = p;
  s.m_chi = m_chi;
  s.n = d.n;
  s.hypothesis = hypothesis_holds(d, p);
  s.period = (long)ipow((u64)p, m_chi - 1);
  const long P = s.period;
  s.count_open.assign(d.n, std::vector<long>(P, 0));
  s.count_at.assign(d.n, std::vector<long>(P, 0));
  for (int i1 = 0; i1 < d.n; ++i1)
    for (long i2 = 0; i2 < P; ++i2) {
      long o = 0, a = 0;
      for (int t = 0; t <= i1; ++t) {
        long j = (i1 - t) * P + i2;
        long sg = (t % 2 ? -1 : 1) * binom(d.n, t);
        o += sg * (x_minus(d, j + 1) - x_plus(d, j));
        a += sg * (x_plus(d, j) - x_minus(d, j));
      }
      if (o < 0 || a < 0) throw Error(ErrorCode::Inconsistent, "negative slope count");
      s.count_open[i1][i2] = o;
      s.count_at[i1][i2] = a;
      s.table_total += o + a;
    }
  long fact = 1;
  for (int i = 2; i <= d.n; ++i) fact *= i;
  s.degree = fact * (long)ipow((u64)p, d.n * (m_chi - 1)) * d.vol;
  s.at_n = s.degree - s.table_total;
  if (s.at_n < 0) throw Error(ErrorCode::Inconsistent, "slope counts exceed the degree");
  return s;
}

std::map<Rational, long> c_slopes_to_l_slopes(const NewtonPolygon& c, int n, long lmax) {
  std::map<Rational, long> out;
  if (lmax <= 0 || c.vertices.size() < 2) return out;
  auto sl = c.slopes();
  if ((long)sl.size() < lmax) throw Error(ErrorCode::Domain, "polygon has fewer than lmax slopes");
  sl.resize(lmax);
  std::map<Rational, long> mc;
  for (auto& v : sl) ++mc[v];
  Rational top = sl.back();  // multiplicities below this value are complete
  for (auto& [v, cnt] : mc) {
    (void)cnt;
    // candidate L-slopes are C-slopes values (shifts only add)
    if (v >= top) break;
    long m = 0;
    for (int j = 0; j <= n; ++j) {
      auto it = mc.find(v - Rational(j));
      if (it != mc.end()) m += (j % 2 ? -1 : 1) * binom(n, j) * it->second;
    }
    if (m < 0) throw Error(ErrorCode::Inconsistent, "negative L-slope multiplicity at " + to_string(v));
    if (m > 0) out[v] = m;
  }
  return out;
}

NewtonPolygon np_from_valuations(const std::vector<std::pair<long, int>>& vals, long m) {
  std::vector<std::pair<long, Rational>> pts;
  for (auto& [l, v] : vals)
    if (v != kInfVal) pts.push_back({l, Rational(v, m)});
  return lower_hull(pts);
}

}  // namespace nplab
