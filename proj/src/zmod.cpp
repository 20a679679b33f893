#include "nplab/zmod.hpp"

#include <ostream>

#include "nplab/error.hpp"

namespace nplab {

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

u64 ipow(u64 b, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) {
    if (b != 0 && r > (u64(1) << 62) / b) throw Error(ErrorCode::ScaleExceeded, "p^N overflows 62 bits");
    r *= b;
  }
  return r;
}

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

static u64 reduce_signed(long v, u64 m) {
  long r = v % (long)m;
  return r < 0 ? (u64)(r + (long)m) : (u64)r;
}

Zmod::Zmod(long v, u64 p, int N) : p_(p), N_(N) {
  if (N < 1) throw Error(ErrorCode::Domain, "precision must be >= 1");
  mod_ = ipow(p, N);
  v_ = reduce_signed(v, mod_);
}

Zmod Zmod::from_integer(const Integer& v, u64 p, int N) {
  Zmod r(0, p, N);
  Integer m(r.mod_);
  Integer t = v % m;
  if (t < 0) t += m;
  r.v_ = t.convert_to<u64>();
  return r;
}

Zmod Zmod::from_rational(const Rational& v, u64 p, int N) {
  Integer d = den(v);
  if (d % Integer(p) == 0) throw Error(ErrorCode::NonIntegral, to_string(v) + " is not " + std::to_string(p) + "-integral");
  return from_integer(num(v), p, N) * from_integer(d, p, N).inverse();
}

u64 Zmod::residue() const {
  if (literal()) throw Error(ErrorCode::Domain, "literal has no residue");
  return v_;
}

long Zmod::centered() const {
  if (literal()) return lit_;
  return v_ > mod_ / 2 ? (long)v_ - (long)mod_ : (long)v_;
}

bool Zmod::is_unit() const {
  if (literal()) return lit_ == 1 || lit_ == -1;
  return v_ % p_ != 0;
}

int Zmod::valuation() const {
  if (literal()) throw Error(ErrorCode::Domain, "valuation of literal");
  if (v_ == 0) return N_;
  int k = 0;
  for (u64 t = v_; t % p_ == 0; t /= p_) ++k;
  return k;
}

Zmod Zmod::inverse() const {
  if (literal()) {
    if (lit_ == 1 || lit_ == -1) return *this;
    throw Error(ErrorCode::NotAUnit, "inverse of literal " + std::to_string(lit_));
  }
  if (!is_unit()) throw Error(ErrorCode::NotAUnit, str() + " is not a unit");
  // extended Euclid on (v, mod)
  __int128 a = v_, b = mod_, x0 = 1, x1 = 0;
  while (b) {
    __int128 q = a / b, t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  Zmod r = *this;
  __int128 m = mod_;
  r.v_ = (u64)(((x0 % m) + m) % m);
  return r;
}

Zmod Zmod::pow(u64 e) const {
  if (literal()) {
    long r = 1;
    for (u64 i = 0; i < e; ++i) r *= lit_;
    return Zmod(r);
  }
  Zmod r = *this;
  r.v_ = powmod(v_, e, mod_);
  return r;
}

Zmod Zmod::reduce(int N2) const {
  if (literal()) return *this;
  if (N2 > N_) throw Error(ErrorCode::PrecisionExhausted, "cannot raise precision");
  return Zmod((long)(v_ % ipow(p_, N2)), p_, N2);
}

Zmod Zmod::div_p() const {
  if (literal()) throw Error(ErrorCode::Domain, "div_p of literal");
  if (v_ % p_) throw Error(ErrorCode::NonIntegral, "not divisible by p");
  if (N_ == 1) throw Error(ErrorCode::PrecisionExhausted, "no digits left");
  return Zmod((long)(v_ / p_), p_, N_ - 1);
}

void Zmod::adopt(const Zmod& o) {
  p_ = o.p_;
  N_ = o.N_;
  mod_ = o.mod_;
  v_ = reduce_signed(lit_, mod_);
}

static void check_same(const Zmod& a, const Zmod& b) {
  if (a.modulus() != b.modulus())
    throw Error(ErrorCode::MixedModulus, "moduli " + std::to_string(a.modulus()) + " vs " + std::to_string(b.modulus()));
}

Zmod& Zmod::operator+=(const Zmod& o) {
  if (o.literal()) {
    if (literal()) {
      lit_ += o.lit_;
      return *this;
    }
    return *this += Zmod(o.lit_, p_, N_);
  }
  if (literal()) adopt(o);
  check_same(*this, o);
  v_ += o.v_;
  if (v_ >= mod_) v_ -= mod_;
  return *this;
}

Zmod Zmod::operator-() const {
  Zmod r = *this;
  if (literal()) {
    r.lit_ = -lit_;
  } else if (v_) {
    r.v_ = mod_ - v_;
  }
  return r;
}

Zmod& Zmod::operator-=(const Zmod& o) { return *this += -o; }

Zmod& Zmod::operator*=(const Zmod& o) {
  if (o.literal()) {
    if (literal()) {
      lit_ *= o.lit_;
      return *this;
    }
    return *this *= Zmod(o.lit_, p_, N_);
  }
  if (literal()) adopt(o);
  check_same(*this, o);
  v_ = mulmod(v_, o.v_, mod_);
  return *this;
}

bool operator==(const Zmod& a, const Zmod& b) {
  if (a.literal() && b.literal()) return a.lit_ == b.lit_;
  if (a.literal()) return Zmod(a.lit_, b.p_, b.N_).v_ == b.v_;
  if (b.literal()) return b == a;
  return a.mod_ == b.mod_ && a.v_ == b.v_;
}

std::string Zmod::str() const { return literal() ? std::to_string(lit_) : std::to_string(v_); }

std::ostream& operator<<(std::ostream& os, const Zmod& a) { return os << a.str(); }

}  // namespace nplab
