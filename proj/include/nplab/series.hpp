#pragma once

#include <climits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nplab/error.hpp"

namespace nplab {

constexpr int kInfVal = INT_MAX;

// Truncated power series c_0 + c_1 pi + ... + c_M pi^M over a ring R.
// Literal series (no M yet) come from integer constants, like the scalars.
template <class R>
class Series {
 public:
  Series() = default;
  Series(long c) : lit_(c) {}  // NOLINT
  Series(int M, const R& zero) : c_(M + 1, zero), M_(M) {}
  static Series constant(const R& c, int M, const R& zero) {
    Series s(M, zero);
    s.c_[0] = c;
    return s;
  }
  static Series monomial(const R& c, int deg, int M, const R& zero) {
    Series s(M, zero);
    if (deg <= M) s.c_[deg] = c;
    return s;
  }

  bool literal() const { return M_ < 0; }
  int M() const { return M_; }
  const R& operator[](int i) const { return c_[i]; }
  R& coeff(int i) { return c_[i]; }
  const std::vector<R>& coeffs() const { return c_; }

  // smallest index with nonzero coefficient; kInfVal if none
  int val() const {
    if (literal()) return lit_ == 0 ? kInfVal : 0;
    for (int i = 0; i <= M_; ++i)
      if (!is_zero(c_[i])) return i;
    return kInfVal;
  }
  bool is_zero_series() const { return val() == kInfVal; }

  Series& operator+=(const Series& o) {
    if (o.literal()) {
      if (literal()) {
        lit_ += o.lit_;
      } else {
        c_[0] += R(o.lit_);
      }
      return *this;
    }
    if (literal()) adopt(o);
    check(o);
    for (int i = 0; i <= M_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Series operator-() const {
    Series r = *this;
    if (literal()) {
      r.lit_ = -lit_;
    } else {
      for (auto& x : r.c_) x = -x;
    }
    return r;
  }
  Series& operator-=(const Series& o) { return *this += -o; }
  Series& operator*=(const Series& o) {
    if (o.literal()) {
      if (literal()) {
        lit_ *= o.lit_;
      } else {
        R k(o.lit_);
        for (auto& x : c_) x *= k;
      }
      return *this;
    }
    if (literal()) {
      Series r = o;
      R k(lit_);
      for (auto& x : r.c_) x = k * x;
      return *this = r;
    }
    check(o);
    int va = val(), vb = o.val();
    R zero = c_[0] * R(0);
    if (va == kInfVal || vb == kInfVal) {
      for (auto& x : c_) x = zero;
      return *this;
    }
    std::vector<R> r(M_ + 1, zero);
    for (int i = va; i <= M_; ++i) {
      if (is_zero(c_[i])) continue;
      for (int j = vb; i + j <= M_; ++j) {
        if (is_zero(o.c_[j])) continue;
        r[i + j] += c_[i] * o.c_[j];
      }
    }
    c_ = std::move(r);
    return *this;
  }
  Series& scale(const R& k) {
    if (literal()) throw Error(ErrorCode::Domain, "scaling a literal series");
    for (auto& x : c_) x *= k;
    return *this;
  }
  // apply a coefficientwise map (e.g. Frobenius, reduction)
  template <class F>
  auto map(F f) const {
    using S = decltype(f(c_[0]));
    Series<S> r(M_, f(c_[0]) * S(0));
    for (int i = 0; i <= M_; ++i) r.coeff(i) = f(c_[i]);
    return r;
  }
  Series truncate(int M2) const {
    if (literal() || M2 >= M_) return *this;
    Series r = *this;
    r.c_.resize(M2 + 1);
    r.M_ = M2;
    return r;
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, const Series& b) { return a *= b; }
  friend bool operator==(const Series& a, const Series& b) {
    if (a.literal() && b.literal()) return a.lit_ == b.lit_;
    return (a - b).is_zero_series();
  }
  friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }
  friend bool is_zero(const Series& a) { return a.is_zero_series(); }

 private:
  void adopt(const Series& o) {
    R zero = o.c_[0] * R(0);
    c_.assign(o.M_ + 1, zero);
    c_[0] += R(lit_);
    M_ = o.M_;
  }
  void check(const Series& o) const {
    if (o.M_ != M_) throw Error(ErrorCode::MixedModulus, "series truncations differ");
  }
  std::vector<R> c_;
  int M_ = -1;
  long lit_ = 0;
};

}  // namespace nplab

namespace Eigen {
template <class R>
struct NumTraits<nplab::Series<R>> : GenericNumTraits<nplab::Series<R>> {
  typedef nplab::Series<R> Real;
  typedef nplab::Series<R> NonInteger;
  typedef nplab::Series<R> Literal;
  typedef nplab::Series<R> Nested;
  enum { IsComplex = 0, IsInteger = 1, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 16, MulCost = 256 };
};
}  // namespace Eigen
