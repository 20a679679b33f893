#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nplab/zmod.hpp"

namespace nplab {

constexpr int kMaxExtDeg = 16;
using Coeffs = std::array<u64, kMaxExtDeg>;

// Z/p^N[t]/(Phi): the unramified extension Z_q of degree m, truncated at p^N.
// With N = 1 this is the finite field F_q.
struct GaloisRing {
  u64 p = 0;
  int N = 0;
  u64 mod = 0;
  int m = 0;
  std::vector<u64> phi;      // phi_0..phi_{m-1}; Phi = t^m + sum phi_i t^i
  std::vector<Coeffs> frob;  // sigma(t^i), i < m
  std::vector<u64> trace;    // Tr(t^i) in Z/p^N, i < m

  u64 q() const { return ipow(p, m); }
  void add(const Coeffs& a, const Coeffs& b, Coeffs& out) const;
  void sub(const Coeffs& a, const Coeffs& b, Coeffs& out) const;
  void mul(const Coeffs& a, const Coeffs& b, Coeffs& out) const;
  void pow(const Coeffs& a, u64 e, Coeffs& out) const;
  bool inverse(const Coeffs& a, Coeffs& out) const;  // false if not a unit
  void frobenius(const Coeffs& a, Coeffs& out) const;
  u64 trace_of(const Coeffs& a) const;
  Coeffs one() const;
};
using RingPtr = std::shared_ptr<const GaloisRing>;

// Phi found by seeded random search for an irreducible polynomial mod p
// (m = 1 always uses Phi = t).
RingPtr make_galois_ring(u64 p, int m, int N, u64 seed = 0);
// Phi given as its m low coefficients (monic); must be irreducible mod p.
RingPtr make_galois_ring(u64 p, int N, const std::vector<u64>& phi);
// same Phi, different precision
RingPtr with_precision(const RingPtr& r, int N);
bool irreducible_mod_p(const std::vector<u64>& phi, u64 p);

class Zq {
 public:
  Zq() = default;
  Zq(long v) : lit_(v) {}  // NOLINT: literal, adopts a ring on contact
  explicit Zq(RingPtr r) : r_(std::move(r)) { c_.fill(0); }
  static Zq scalar(const RingPtr& r, long v);
  static Zq scalar(const RingPtr& r, const Zmod& v);
  static Zq gen(const RingPtr& r);  // the class of t
  static Zq from_coeffs(const RingPtr& r, const std::vector<long>& c);

  bool literal() const { return !r_; }
  const RingPtr& ring() const { return r_; }
  u64 coeff(int i) const { return c_[i]; }
  const Coeffs& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_unit() const;
  Zq inverse() const;
  Zq pow(u64 e) const;
  Zq frobenius() const;
  Zmod trace() const;
  Zq reduce(const RingPtr& lower) const;  // to a lower precision over the same Phi
  Zmod to_scalar() const;                 // DOMAIN unless in Z/p^N

  Zq& operator+=(const Zq& o);
  Zq& operator-=(const Zq& o);
  Zq& operator*=(const Zq& o);
  Zq operator-() const;
  friend Zq operator+(Zq a, const Zq& b) { return a += b; }
  friend Zq operator-(Zq a, const Zq& b) { return a -= b; }
  friend Zq operator*(Zq a, const Zq& b) { return a *= b; }
  friend bool operator==(const Zq& a, const Zq& b);
  friend bool operator!=(const Zq& a, const Zq& b) { return !(a == b); }

  std::string str() const;

 private:
  void adopt(const RingPtr& r);
  RingPtr r_;
  Coeffs c_{};
  long lit_ = 0;
};

inline bool is_zero(const Zq& a) { return a.is_zero(); }

// omega^q = omega, omega = a mod p
Zq teichmuller(const Zq& a);
// an element of F_q = ring mod p generating the multiplicative group, as an
// element of r (coefficients < p)
Zq primitive_element(const RingPtr& r);
// all elements of F_q in a fixed enumeration, as elements of r
std::vector<Zq> field_elements(const RingPtr& r);

}  // namespace nplab

namespace Eigen {
template <>
struct NumTraits<nplab::Zq> : GenericNumTraits<nplab::Zq> {
  typedef nplab::Zq Real;
  typedef nplab::Zq NonInteger;
  typedef nplab::Zq Literal;
  typedef nplab::Zq Nested;
  enum { IsComplex = 0, IsInteger = 1, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 4, MulCost = 16 };
};
}  // namespace Eigen
