#include "nplab/galois.hpp"

#include <random>
#include <sstream>

#include "nplab/error.hpp"

namespace nplab {

namespace {

// dense polynomials over F_p, low degree first
using FPoly = std::vector<u64>;

void trim(FPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FPoly pmod(FPoly a, const FPoly& f, u64 p) {
  trim(a);
  int df = (int)f.size() - 1;
  u64 lead_inv = powmod(f.back(), p - 2, p);
  while ((int)a.size() - 1 >= df) {
    u64 c = mulmod(a.back(), lead_inv, p);
    int shift = (int)a.size() - 1 - df;
    for (int j = 0; j <= df; ++j) a[shift + j] = (a[shift + j] + p - mulmod(c, f[j], p)) % p;
    trim(a);
  }
  return a;
}

FPoly pmulmod(const FPoly& a, const FPoly& b, const FPoly& f, u64 p) {
  if (a.empty() || b.empty()) return {};
  FPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  return pmod(r, f, p);
}

FPoly ppowmod(FPoly a, u64 e, const FPoly& f, u64 p) {
  FPoly r{1};
  while (e) {
    if (e & 1) r = pmulmod(r, a, f, p);
    a = pmulmod(a, a, f, p);
    e >>= 1;
  }
  return r;
}

FPoly pgcd(FPoly a, FPoly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FPoly r = pmod(a, b, p);
    a = b;
    b = r;
  }
  return a;
}

void fill_frobenius(GaloisRing& g) {
  g.frob.assign(g.m, Coeffs{});
  g.trace.assign(g.m, 0);
  if (g.m == 1) {
    g.frob[0] = g.one();
    g.trace[0] = 1 % g.mod;
    return;
  }
  // sigma(t) is the root of Phi congruent to t^p; Newton from t^p
  Coeffs t{};
  t[1] = 1;
  Coeffs x;
  g.pow(t, g.p, x);
  int iters = 1;
  for (int prec = 1; prec < g.N; prec *= 2) ++iters;
  for (int it = 0; it < iters; ++it) {
    // Horner for Phi(x) and Phi'(x)
    Coeffs v = g.one(), d{};
    for (int i = g.m - 1; i >= 0; --i) {
      Coeffs tmp;
      g.mul(d, x, tmp);
      g.add(tmp, v, d);
      g.mul(v, x, tmp);
      Coeffs c{};
      c[0] = g.phi[i];
      g.add(tmp, c, v);
    }
    Coeffs dinv, corr;
    if (!g.inverse(d, dinv)) throw Error(ErrorCode::Domain, "Phi not separable mod p");
    g.mul(v, dinv, corr);
    g.sub(x, corr, x);
  }
  g.frob[0] = g.one();
  for (int i = 1; i < g.m; ++i) g.mul(g.frob[i - 1], x, g.frob[i]);
  for (int i = 0; i < g.m; ++i) {
    Coeffs cur{}, acc{};
    cur[i] = 1;
    for (int j = 0; j < g.m; ++j) {
      g.add(acc, cur, acc);
      Coeffs nx;
      g.frobenius(cur, nx);
      cur = nx;
    }
    for (int j = 1; j < g.m; ++j)
      if (acc[j]) throw Error(ErrorCode::Domain, "trace not in Z_p (bad Frobenius lift)");
    g.trace[i] = acc[0];
  }
}

RingPtr build(u64 p, int N, const std::vector<u64>& phi) {
  if (!is_prime(p)) throw Error(ErrorCode::Domain, std::to_string(p) + " is not prime");
  if (phi.empty() || (int)phi.size() > kMaxExtDeg / 2)
    throw Error(ErrorCode::Domain, "extension degree out of range");
  auto g = std::make_shared<GaloisRing>();
  g->p = p;
  g->N = N;
  g->mod = ipow(p, N);
  g->m = (int)phi.size();
  for (u64 c : phi) g->phi.push_back(c % g->mod);
  fill_frobenius(*g);
  return g;
}

}  // namespace

bool irreducible_mod_p(const std::vector<u64>& phi, u64 p) {
  int m = (int)phi.size();
  if (m == 1) return true;
  FPoly f(phi.begin(), phi.end());
  for (auto& c : f) c %= p;
  f.push_back(1);
  if (f[0] == 0) return false;
  FPoly x{0, 1}, xp = x;
  for (int i = 1; i <= m / 2; ++i) {
    xp = ppowmod(xp, p, f, p);
    FPoly diff = xp;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    FPoly g = pgcd(f, diff, p);
    if (g.size() > 1) return false;
  }
  return true;
}

Coeffs GaloisRing::one() const {
  Coeffs c{};
  c[0] = 1 % mod;
  return c;
}

void GaloisRing::add(const Coeffs& a, const Coeffs& b, Coeffs& out) const {
  for (int i = 0; i < m; ++i) {
    u64 s = a[i] + b[i];
    out[i] = s >= mod ? s - mod : s;
  }
}

void GaloisRing::sub(const Coeffs& a, const Coeffs& b, Coeffs& out) const {
  for (int i = 0; i < m; ++i) out[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + mod - b[i];
}

void GaloisRing::mul(const Coeffs& a, const Coeffs& b, Coeffs& out) const {
  if (m == 1) {
    out[0] = mulmod(a[0], b[0], mod);
    return;
  }
  std::array<u64, 2 * kMaxExtDeg> prod{};
  for (int i = 0; i < m; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < m; ++j) {
      if (!b[j]) continue;
      u64 s = prod[i + j] + mulmod(a[i], b[j], mod);
      prod[i + j] = s >= mod ? s - mod : s;
    }
  }
  for (int i = 2 * m - 2; i >= m; --i) {
    u64 c = prod[i];
    if (!c) continue;
    for (int j = 0; j < m; ++j) {
      u64 t = mulmod(c, phi[j], mod);
      u64& d = prod[i - m + j];
      d = d >= t ? d - t : d + mod - t;
    }
  }
  for (int i = 0; i < m; ++i) out[i] = prod[i];
}

void GaloisRing::pow(const Coeffs& a, u64 e, Coeffs& out) const {
  Coeffs r = one(), b = a;
  while (e) {
    if (e & 1) mul(r, b, r);
    mul(b, b, b);
    e >>= 1;
  }
  out = r;
}

bool GaloisRing::inverse(const Coeffs& a, Coeffs& out) const {
  Coeffs y;
  pow(a, q() - 2, y);
  Coeffs t;
  mul(a, y, t);
  for (int i = 0; i < m; ++i)
    if (t[i] % p != (i == 0 ? 1 % p : 0)) return false;
  Coeffs two{};
  two[0] = 2 % mod;
  for (int prec = 1; prec < N; prec *= 2) {
    mul(a, y, t);
    sub(two, t, t);
    mul(y, t, y);
  }
  out = y;
  return true;
}

void GaloisRing::frobenius(const Coeffs& a, Coeffs& out) const {
  Coeffs r{};
  for (int i = 0; i < m; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < m; ++j) {
      u64 s = r[j] + mulmod(a[i], frob[i][j], mod);
      r[j] = s >= mod ? s - mod : s;
    }
  }
  out = r;
}

u64 GaloisRing::trace_of(const Coeffs& a) const {
  u64 s = 0;
  for (int i = 0; i < m; ++i) s = (s + mulmod(a[i], trace[i], mod)) % mod;
  return s;
}

RingPtr make_galois_ring(u64 p, int m, int N, u64 seed) {
  if (m < 1) throw Error(ErrorCode::Domain, "extension degree must be >= 1");
  if (m == 1) return build(p, N, {0});
  std::mt19937_64 rng(seed * 1000003u + p * 131u + (u64)m);
  std::uniform_int_distribution<u64> dist(0, p - 1);
  for (;;) {
    std::vector<u64> phi(m);
    for (auto& c : phi) c = dist(rng);
    if (irreducible_mod_p(phi, p)) return build(p, N, phi);
  }
}

RingPtr make_galois_ring(u64 p, int N, const std::vector<u64>& phi) {
  if (!irreducible_mod_p(phi, p)) throw Error(ErrorCode::Domain, "Phi is not irreducible mod p");
  return build(p, N, phi);
}

RingPtr with_precision(const RingPtr& r, int N) {
  if (N == r->N) return r;
  std::vector<u64> phi = r->phi;
  if (N < r->N) {
    u64 m = ipow(r->p, N);
    for (auto& c : phi) c %= m;
  }
  return build(r->p, N, phi);
}

// ---- Zq ----

Zq Zq::scalar(const RingPtr& r, long v) {
  Zq z(r);
  z.c_[0] = Zmod(v, r->p, r->N).residue();
  return z;
}

Zq Zq::scalar(const RingPtr& r, const Zmod& v) {
  if (v.literal()) return scalar(r, v.centered());
  if (v.modulus() != r->mod) throw Error(ErrorCode::MixedModulus, "scalar precision differs from ring");
  Zq z(r);
  z.c_[0] = v.residue();
  return z;
}

Zq Zq::gen(const RingPtr& r) {
  Zq z(r);
  if (r->m == 1) {
    z.c_[0] = (r->mod - r->phi[0]) % r->mod;  // t = -phi_0
  } else {
    z.c_[1] = 1;
  }
  return z;
}

Zq Zq::from_coeffs(const RingPtr& r, const std::vector<long>& c) {
  if ((int)c.size() > r->m) throw Error(ErrorCode::Domain, "too many coefficients");
  Zq z(r);
  for (size_t i = 0; i < c.size(); ++i) z.c_[i] = Zmod(c[i], r->p, r->N).residue();
  return z;
}

void Zq::adopt(const RingPtr& r) {
  r_ = r;
  long v = lit_;
  c_.fill(0);
  c_[0] = Zmod(v, r->p, r->N).residue();
}

bool Zq::is_zero() const {
  if (literal()) return lit_ == 0;
  for (int i = 0; i < r_->m; ++i)
    if (c_[i]) return false;
  return true;
}

bool Zq::is_unit() const {
  if (literal()) return lit_ == 1 || lit_ == -1;
  Coeffs tmp;
  return r_->inverse(c_, tmp);
}

Zq Zq::inverse() const {
  if (literal()) {
    if (lit_ == 1 || lit_ == -1) return *this;
    throw Error(ErrorCode::NotAUnit, "inverse of literal");
  }
  Zq r(r_);
  if (!r_->inverse(c_, r.c_)) throw Error(ErrorCode::NotAUnit, str() + " is not a unit");
  return r;
}

Zq Zq::pow(u64 e) const {
  if (literal()) {
    long r = 1;
    for (u64 i = 0; i < e; ++i) r *= lit_;
    return Zq(r);
  }
  Zq r(r_);
  r_->pow(c_, e, r.c_);
  return r;
}

Zq Zq::frobenius() const {
  if (literal()) return *this;
  Zq r(r_);
  r_->frobenius(c_, r.c_);
  return r;
}

Zmod Zq::trace() const {
  if (literal()) throw Error(ErrorCode::Domain, "trace of literal");
  return Zmod((long)r_->trace_of(c_), r_->p, r_->N);
}

Zq Zq::reduce(const RingPtr& lower) const {
  if (literal()) return *this;
  if (lower->p != r_->p || lower->m != r_->m || lower->N > r_->N)
    throw Error(ErrorCode::MixedModulus, "incompatible ring for reduction");
  Zq z(lower);
  for (int i = 0; i < r_->m; ++i) z.c_[i] = c_[i] % lower->mod;
  return z;
}

Zmod Zq::to_scalar() const {
  if (literal()) return Zmod(lit_);
  for (int i = 1; i < r_->m; ++i)
    if (c_[i]) throw Error(ErrorCode::Domain, "element not in Z_p");
  return Zmod((long)c_[0], r_->p, r_->N);
}

static void check_ring(const RingPtr& a, const RingPtr& b) {
  if (a != b && (a->p != b->p || a->N != b->N || a->phi != b->phi))
    throw Error(ErrorCode::MixedModulus, "elements of different Galois rings");
}

Zq& Zq::operator+=(const Zq& o) {
  if (o.literal()) {
    if (literal()) {
      lit_ += o.lit_;
      return *this;
    }
    return *this += scalar(r_, o.lit_);
  }
  if (literal()) adopt(o.r_);
  check_ring(r_, o.r_);
  r_->add(c_, o.c_, c_);
  return *this;
}

Zq& Zq::operator-=(const Zq& o) { return *this += -o; }

Zq Zq::operator-() const {
  if (literal()) return Zq(-lit_);
  Zq r(r_);
  r_->sub(r.c_, c_, r.c_);
  return r;
}

Zq& Zq::operator*=(const Zq& o) {
  if (o.literal()) {
    if (literal()) {
      lit_ *= o.lit_;
      return *this;
    }
    return *this *= scalar(r_, o.lit_);
  }
  if (literal()) adopt(o.r_);
  check_ring(r_, o.r_);
  r_->mul(c_, o.c_, c_);
  return *this;
}

bool operator==(const Zq& a, const Zq& b) {
  if (a.literal() && b.literal()) return a.lit_ == b.lit_;
  if (a.literal()) return Zq::scalar(b.r_, a.lit_) == b;
  if (b.literal()) return b == a;
  for (int i = 0; i < a.r_->m; ++i)
    if (a.c_[i] != b.c_[i]) return false;
  return a.r_->mod == b.r_->mod;
}

std::string Zq::str() const {
  if (literal()) return std::to_string(lit_);
  if (r_->m == 1) return std::to_string(c_[0]);
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < r_->m; ++i) os << (i ? "," : "") << c_[i];
  os << "]";
  return os.str();
}

Zq teichmuller(const Zq& a) {
  if (a.literal()) return a;
  u64 q = a.ring()->q();
  Zq x = a;
  for (int i = 0; i <= a.ring()->N; ++i) {
    Zq y = x.pow(q);
    if (y == x) return x;
    x = y;
  }
  return x;
}

std::vector<Zq> field_elements(const RingPtr& r) {
  u64 q = r->q();
  std::vector<Zq> out;
  out.reserve(q);
  for (u64 i = 0; i < q; ++i) {
    u64 t = i;
    std::vector<long> c(r->m);
    for (int j = 0; j < r->m; ++j) {
      c[j] = (long)(t % r->p);
      t /= r->p;
    }
    out.push_back(Zq::from_coeffs(r, c));
  }
  return out;
}

Zq primitive_element(const RingPtr& r) {
  RingPtr f = with_precision(r, 1);
  u64 q = f->q();
  auto fac = prime_factors(q - 1);
  std::vector<Zq> elems = field_elements(f);
  for (u64 i = 1; i < q; ++i) {
    const Zq& g = elems[i];
    bool ok = true;
    for (u64 l : fac)
      if (g.pow((q - 1) / l) == Zq(1)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    std::vector<long> c(r->m);
    for (int j = 0; j < r->m; ++j) c[j] = (long)g.coeff(j);
    return Zq::from_coeffs(r, c);
  }
  throw Error(ErrorCode::Domain, "no primitive element found");
}

}  // namespace nplab
