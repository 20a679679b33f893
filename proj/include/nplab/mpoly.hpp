#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nplab/zmod.hpp"

namespace nplab {

using Exps = std::vector<int>;

// Sparse polynomial over F_p in a fixed number of variables.  Terms are kept
// in lexicographic exponent order; zero coefficients are never stored.
class MPoly {
 public:
  using Terms = std::map<Exps, u64>;

  MPoly() = default;
  MPoly(long c) : lit_(c) {}  // NOLINT
  MPoly(u64 p, int nvars) : p_(p), nvars_(nvars) {}
  static MPoly constant(u64 p, int nvars, long c);
  static MPoly var(u64 p, int nvars, int i, int power = 1);
  static MPoly monomial(u64 p, const Exps& e, long c);

  bool literal() const { return p_ == 0; }
  u64 p() const { return p_; }
  int nvars() const { return nvars_; }
  const Terms& terms() const { return t_; }
  size_t size() const { return literal() ? (lit_ != 0) : t_.size(); }
  bool is_zero() const { return literal() ? lit_ == 0 : t_.empty(); }
  int total_degree() const;  // -1 for zero
  int degree_in(int v) const;
  // coefficient of a monomial
  u64 coeff(const Exps& e) const;
  // if every term has the same total degree / multidegree under a grading
  bool homogeneous(const std::vector<std::vector<long>>& grading, std::vector<long>* grade) const;

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  MPoly operator-() const;
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(MPoly a, const MPoly& b) { return a *= b; }
  friend bool operator==(const MPoly& a, const MPoly& b);
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }
  MPoly pow(int e) const;
  MPoly scale(u64 c) const;

  // map variable i to target[i] (or drop the term when target[i] < 0)
  MPoly rename(const std::vector<int>& target, int new_nvars) const;

  // evaluate at pt; `one` fixes the coefficient ring
  template <class F>
  F evaluate(const std::vector<F>& pt, const F& one) const {
    if (literal()) return one * F(lit_);
    std::vector<std::vector<F>> pw(nvars_);
    for (int v = 0; v < nvars_; ++v) {
      int d = degree_in(v);
      pw[v].reserve(d + 1);
      pw[v].push_back(one);
      for (int k = 1; k <= d; ++k) pw[v].push_back(pw[v].back() * pt[v]);
    }
    F acc = one * F(0);
    for (const auto& [e, c] : t_) {
      F term = one * F((long)c);
      for (int v = 0; v < nvars_; ++v)
        if (e[v]) term *= pw[v][e[v]];
      acc += term;
    }
    return acc;
  }

  std::string str(const std::vector<std::string>& names = {}) const;

 private:
  void adopt(const MPoly& o);
  void add_term(const Exps& e, u64 c);
  u64 p_ = 0;
  int nvars_ = 0;
  Terms t_;
  long lit_ = 0;
};

inline bool is_zero(const MPoly& a) { return a.is_zero(); }

}  // namespace nplab

namespace Eigen {
template <>
struct NumTraits<nplab::MPoly> : GenericNumTraits<nplab::MPoly> {
  typedef nplab::MPoly Real;
  typedef nplab::MPoly NonInteger;
  typedef nplab::MPoly Literal;
  typedef nplab::MPoly Nested;
  enum { IsComplex = 0, IsInteger = 1, IsSigned = 1, RequireInitialization = 1, ReadCost = 1, AddCost = 16, MulCost = 64 };
};
}  // namespace Eigen
