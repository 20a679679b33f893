#include "nplab/lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "nplab/error.hpp"

namespace nplab {

namespace {

// elementary divisors by repeated gcd row/column elimination
std::vector<Integer> smith_divisors(std::vector<std::vector<Integer>> a) {
  const int n = (int)a.size();
  std::vector<Integer> out;
  for (int t = 0; t < n; ++t) {
    for (;;) {
      // pivot: smallest nonzero |entry| in the trailing block
      int pr = -1, pc = -1;
      for (int i = t; i < n; ++i)
        for (int j = t; j < n; ++j)
          if (a[i][j] != 0 && (pr < 0 || abs(a[i][j]) < abs(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr < 0) return out;  // singular, caught by caller
      std::swap(a[t], a[pr]);
      for (int i = 0; i < n; ++i) std::swap(a[i][t], a[i][pc]);
      bool clean = true;
      for (int i = t + 1; i < n; ++i) {
        Integer q = a[i][t] / a[t][t];
        for (int j = t; j < n; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        Integer q = a[t][j] / a[t][t];
        for (int i = t; i < n; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility of the rest; otherwise fold a row in and repeat
      bool divides = true;
      for (int i = t + 1; i < n && divides; ++i)
        for (int j = t + 1; j < n; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (int c = t; c < n; ++c) a[t][c] += a[i][c];
            divides = false;
            break;
          }
      if (divides) break;
    }
    out.push_back(abs(a[t][t]));
  }
  return out;
}

}  // namespace

Parallelotope Parallelotope::from_rows(const std::vector<std::vector<long>>& rows) {
  const int n = (int)rows.size();
  if (n == 0) throw Error(ErrorCode::Config, "empty generator matrix");
  Parallelotope d;
  d.n = n;
  d.V.resize(n, n);
  for (int i = 0; i < n; ++i) {
    if ((int)rows[i].size() != n) throw Error(ErrorCode::Config, "generator matrix must be square");
    bool nz = false;
    for (int j = 0; j < n; ++j) {
      if (rows[i][j] < 0) throw Error(ErrorCode::Config, "generators must have nonnegative entries");
      d.V(i, j) = rows[i][j];
      nz = nz || rows[i][j] != 0;
    }
    if (!nz) throw Error(ErrorCode::Config, "singular generators (zero row)");
  }
  // rational inverse by Gauss-Jordan
  QMat A(n, n), inv = QMat::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = d.V(i, j);
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (A(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw Error(ErrorCode::Config, "singular generators");
    if (piv != c) {
      A.row(piv).swap(A.row(c));
      inv.row(piv).swap(inv.row(c));
      det = -det;
    }
    det *= A(c, c);
    Rational f = 1 / A(c, c);
    A.row(c) *= f;
    inv.row(c) *= f;
    for (int r = 0; r < n; ++r)
      if (r != c && A(r, c) != 0) {
        Rational g = A(r, c);
        A.row(r) -= g * A.row(c);
        inv.row(r) -= g * inv.row(c);
      }
  }
  d.Vinv = inv;
  d.vol = to_long(abs(num(det)));
  d.adj.resize(n, n);
  Integer lcm = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rational a = inv(i, j) * Rational(d.vol);
      d.adj(i, j) = to_long(num(a));
      lcm = bmp::lcm(lcm, den(inv(i, j)));
    }
  std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = d.V(i, j);
  auto ed = smith_divisors(m);
  Integer prod = 1;
  for (auto& e : ed) {
    d.elementary_divisors.push_back(to_long(e));
    prod *= e;
  }
  d.D = std::accumulate(d.elementary_divisors.begin(), d.elementary_divisors.end(), 1L,
                        [](long a, long b) { return std::max(a, b); });
  if (prod != d.vol || Integer(d.D) != lcm)
    throw Error(ErrorCode::Inconsistent, "Smith form disagrees with the inverse matrix");
  return d;
}

IVec Parallelotope::generator(int i) const {
  IVec v(n);
  for (int j = 0; j < n; ++j) v[j] = V(i, j);
  return v;
}

std::string Parallelotope::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << vec_str(generator(i));
  os << "]";
  return os.str();
}

std::string vec_str(const IVec& a) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
  os << ")";
  return os.str();
}

IVec add(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
IVec sub(const IVec& a, const IVec& b) {
  IVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
IVec scale(long s, const IVec& a) {
  IVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

bool point_less(const LatticePoint& a, const LatticePoint& b) {
  if (a.w != b.w) return a.w < b.w;
  return a.Q < b.Q;
}

static std::vector<long> numerators(const Parallelotope& d, const IVec& Q) {
  std::vector<long> y(d.n, 0);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) y[i] += Q[j] * d.adj(j, i);
  return y;
}

QVec coords(const Parallelotope& d, const IVec& Q) {
  if ((int)Q.size() != d.n) throw Error(ErrorCode::Domain, "point has wrong dimension");
  auto y = numerators(d, Q);
  QVec z(d.n);
  for (int i = 0; i < d.n; ++i) z[i] = Rational(y[i], d.vol);
  return z;
}

bool in_cone(const Parallelotope& d, const IVec& Q) {
  for (long y : numerators(d, Q))
    if (y < 0) return false;
  return true;
}

Rational weight(const Parallelotope& d, const IVec& Q) {
  QVec z = coords(d, Q);
  Rational w = 0;
  for (auto& x : z) {
    if (x < 0) throw Error(ErrorCode::ConeViolation, vec_str(Q) + " is outside the cone");
    w = std::max(w, x);
  }
  return w;
}

std::vector<std::vector<int>> chain_of(const QVec& z) {
  std::map<Rational, std::vector<int>> groups;
  for (int i = 0; i < (int)z.size(); ++i)
    if (z[i] > 0) groups[z[i]].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& [v, s] : groups) out.push_back(s);
  return out;
}

QVec degree_vector(const Parallelotope& d, const QVec& z) {
  QVec deg(d.n, Rational(0));
  auto ch = chain_of(z);
  Rational prev = 0;
  for (size_t i = 0; i < ch.size(); ++i) {
    long tail = 0;
    for (size_t j = i; j < ch.size(); ++j) tail += (long)ch[j].size();
    Rational zi = z[ch[i][0]];
    deg[d.n - tail] = zi - prev;  // 1-based position n+1-tail
    prev = zi;
  }
  return deg;
}

LatticePoint make_point(const Parallelotope& d, const IVec& Q) {
  LatticePoint pt;
  pt.Q = Q;
  pt.z = coords(d, Q);
  pt.w = weight(d, Q);
  pt.deg = degree_vector(d, pt.z);
  return pt;
}

std::vector<LatticePoint> enumerate(const Parallelotope& d, long k, Side side) {
  if (k < 0) throw Error(ErrorCode::Domain, "k must be >= 0");
  if (k == 0) return {make_point(d, IVec(d.n, 0))};
  std::vector<long> hi(d.n, 0);
  for (int j = 0; j < d.n; ++j)
    for (int i = 0; i < d.n; ++i) hi[j] += k * d.V(i, j);
  const long lim = k * d.vol;
  std::vector<LatticePoint> out;
  IVec Q(d.n, 0);
  for (;;) {
    auto y = numerators(d, Q);
    bool ok = true;
    for (long v : y)
      if (v < 0 || v > lim || (side == Side::Open && v == lim)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(make_point(d, Q));
    int j = 0;
    while (j < d.n && Q[j] == hi[j]) Q[j++] = 0;
    if (j == d.n) break;
    ++Q[j];
  }
  std::sort(out.begin(), out.end(), point_less);
  return out;
}

std::vector<LatticePoint> delta_minus_I(const Parallelotope& d, const std::vector<int>& I) {
  std::vector<LatticePoint> out;
  for (auto& pt : enumerate(d, 1, Side::Open)) {
    bool ok = true;
    for (int i = 0; i < d.n && ok; ++i) {
      bool inI = std::find(I.begin(), I.end(), i) != I.end();
      ok = inI ? pt.z[i] == 0 : pt.z[i] > 0;
    }
    if (ok) out.push_back(pt);
  }
  return out;
}

std::pair<long, long> count_closed_form(const Parallelotope& d, long k) {
  if (k < 1) throw Error(ErrorCode::Domain, "k must be >= 1");
  long kn = 1;
  for (int i = 0; i < d.n; ++i) kn *= k;
  long minus = kn * d.vol;
  // x_k^+ = sum_I #Delta^-(I) (k+1)^{#I} k^{n-#I}
  long plus = 0;
  for (auto& pt : enumerate(d, 1, Side::Open)) {
    int zeros = 0;
    for (auto& z : pt.z) zeros += (z == 0);
    long t = 1;
    for (int i = 0; i < zeros; ++i) t *= (k + 1);
    for (int i = zeros; i < d.n; ++i) t *= k;
    plus += t;
  }
  return {minus, plus};
}

IVec residue(const Parallelotope& d, const IVec& Q) {
  QVec z = coords(d, Q);
  IVec r = Q;
  for (int i = 0; i < d.n; ++i) {
    if (z[i] < 0) throw Error(ErrorCode::ConeViolation, vec_str(Q) + " is outside the cone");
    long f = to_long(floor_q(z[i]));
    for (int j = 0; j < d.n; ++j) r[j] -= f * d.V(i, j);
  }
  return r;
}

IVec eta(const Parallelotope& d, long p, const IVec& P0) {
  QVec z = coords(d, P0);
  for (auto& x : z)
    if (x < 0 || x >= 1) throw Error(ErrorCode::Domain, vec_str(P0) + " is not in Delta^-");
  return residue(d, scale(p, P0));
}

IVec vertex_of(const Parallelotope& d, const std::vector<int>& S) {
  IVec v(d.n, 0);
  for (int i : S) v = add(v, d.generator(i));
  return v;
}

std::vector<BlockDecomposition> block_decomposition(const Parallelotope& d, long k, Side side) {
  auto pts = enumerate(d, k, side);
  using Key = std::tuple<IVec, std::vector<int>, std::vector<std::vector<int>>>;
  std::map<Key, size_t> index;
  std::vector<BlockDecomposition> blocks;
  for (auto& pt : pts) {
    IVec P0 = residue(d, pt.Q);
    std::vector<int> I;
    for (int i = 0; i < d.n; ++i)
      if (pt.z[i] == 0) I.push_back(i);
    auto ch = chain_of(pt.z);
    Key key{P0, I, ch};
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, blocks.size());
      BlockDecomposition b;
      b.P0 = P0;
      b.I = I;
      b.chain = ch;
      blocks.push_back(std::move(b));
      it = index.find(key);
    }
    blocks[it->second].members.push_back(pt);
  }
  for (auto& b : blocks) {
    const int l = (int)b.chain.size();
    // chain coordinates of a member: the common z value on each S_i
    auto chz = [&](const LatticePoint& pt) {
      QVec c(l);
      for (int i = 0; i < l; ++i) c[i] = pt.z[b.chain[i][0]];
      return c;
    };
    QVec zmin = chz(b.members[0]);
    for (auto& m : b.members) {
      QVec c = chz(m);
      for (int i = 0; i < l; ++i) zmin[i] = std::min(zmin[i], c[i]);
    }
    IVec Qmin(d.n, 0);
    // Qmin = sum zmin_i V_{S_i}
    QVec qz(d.n, Rational(0));
    for (int i = 0; i < l; ++i)
      for (int g : b.chain[i])
        for (int j = 0; j < d.n; ++j) qz[j] += zmin[i] * Rational(d.V(g, j));
    for (int j = 0; j < d.n; ++j) {
      if (den(qz[j]) != 1) throw Error(ErrorCode::Inconsistent, "block minimum is not a lattice point");
      Qmin[j] = to_long(num(qz[j]));
    }
    b.Qmin = make_point(d, Qmin);
    for (int i = 0; i < l; ++i) {
      Rational inc = zmin[i] - (i ? zmin[i - 1] : Rational(0));
      if (!(inc > 0 && inc <= 1)) throw Error(ErrorCode::Inconsistent, "block minimum increments out of (0,1]");
    }
    b.K = 0;
    std::set<std::vector<long>> seen;
    for (auto& m : b.members) {
      QVec c = chz(m);
      std::vector<long> off(l);
      for (int i = 0; i < l; ++i) {
        Rational o = c[i] - zmin[i];
        if (den(o) != 1) throw Error(ErrorCode::Inconsistent, "member offset not integral");
        off[i] = to_long(num(o));
        if (i && off[i] < off[i - 1]) throw Error(ErrorCode::Inconsistent, "member offsets not monotone");
      }
      if (l) b.K = std::max(b.K, off[l - 1]);
      seen.insert(off);
      b.offsets.push_back(off);
    }
    // members must be exactly Qmin + Y_K
    long expected = 0;
    {
      // count nondecreasing sequences 0 <= m_1 <= ... <= m_l <= K: C(l+K, l)
      Integer c = 1;
      for (int i = 1; i <= l; ++i) c = c * (b.K + i) / i;
      expected = to_long(c);
    }
    if ((long)seen.size() != expected || (long)b.members.size() != expected)
      throw Error(ErrorCode::Inconsistent, "block is not a translate of Y_K");
  }
  return blocks;
}

}  // namespace nplab
