#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nplab/rational.hpp"

namespace nplab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

bool is_prime(u64 n);
std::vector<u64> prime_factors(u64 n);  // distinct, ascending
u64 ipow(u64 b, int e);                 // throws on overflow past 2^62
u64 powmod(u64 b, u64 e, u64 m);
inline u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

// Element of Z/p^N, i.e. a p-adic integer known to precision N.
// A default-constructed or integer-constructed value is a "literal": it has
// no modulus yet and adopts the modulus of whatever it meets.  This lets
// Eigen write Scalar(0) / Scalar(1) without knowing p.
class Zmod {
 public:
  Zmod() = default;
  Zmod(long v) : lit_(v) {}  // NOLINT: implicit on purpose
  Zmod(long v, u64 p, int N);
  static Zmod from_integer(const Integer& v, u64 p, int N);
  static Zmod from_rational(const Rational& v, u64 p, int N);  // NONINTEGRAL if p | den

  bool literal() const { return mod_ == 0; }
  u64 residue() const;
  u64 p() const { return p_; }
  int N() const { return N_; }
  u64 modulus() const { return mod_; }
  // symmetric representative in (-mod/2, mod/2]
  long centered() const;

  bool is_zero() const { return literal() ? lit_ == 0 : v_ == 0; }
  bool is_unit() const;
  int valuation() const;  // N if zero
  Zmod inverse() const;   // NOT_A_UNIT otherwise
  Zmod pow(u64 e) const;
  Zmod reduce(int N2) const;  // drop precision to N2 <= N
  Zmod div_p() const;         // exact division by p, precision drops by one

  Zmod& operator+=(const Zmod& o);
  Zmod& operator-=(const Zmod& o);
  Zmod& operator*=(const Zmod& o);
  Zmod operator-() const;
  friend Zmod operator+(Zmod a, const Zmod& b) { return a += b; }
  friend Zmod operator-(Zmod a, const Zmod& b) { return a -= b; }
  friend Zmod operator*(Zmod a, const Zmod& b) { return a *= b; }
  friend bool operator==(const Zmod& a, const Zmod& b);
  friend bool operator!=(const Zmod& a, const Zmod& b) { return !(a == b); }

  std::string str() const;

 private:
  void adopt(const Zmod& o);
  u64 v_ = 0;
  u64 mod_ = 0;
  u64 p_ = 0;
  int N_ = 0;
  long lit_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Zmod& a);
inline bool is_zero(const Zmod& a) { return a.is_zero(); }

}  // namespace nplab

namespace Eigen {
template <>
struct NumTraits<nplab::Zmod> : GenericNumTraits<nplab::Zmod> {
  typedef nplab::Zmod Real;
  typedef nplab::Zmod NonInteger;
  typedef nplab::Zmod Literal;
  typedef nplab::Zmod Nested;
  enum { IsComplex = 0, IsInteger = 1, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 2, MulCost = 4 };
};
}  // namespace Eigen
