#pragma once

#include <map>
#include <utility>
#include <vector>

#include "nplab/lattice.hpp"
#include "nplab/rational.hpp"

namespace nplab {

struct Vertex {
  long x = 0;
  Rational y;
  bool operator==(const Vertex& o) const { return x == o.x && y == o.y; }
};

// Lower convex hull; slopes strictly increase across vertices.
struct NewtonPolygon {
  std::vector<Vertex> vertices;

  long length() const { return vertices.empty() ? 0 : vertices.back().x; }
  Rational evaluate(long x) const;
  // slope of each unit step [i-1, i], i = 1..length
  std::vector<Rational> slopes() const;
};

NewtonPolygon lower_hull(std::vector<std::pair<long, Rational>> pts);

bool hypothesis_holds(const Parallelotope& d, long p);

long h_point(const Parallelotope& d, long p, const LatticePoint& q);
long h_of_set(const Parallelotope& d, long p, const std::vector<IVec>& S);
long h_dilate(const Parallelotope& d, long p, long k, Side side);  // h(Delta_k^+-)

// the first lmax points of M(Delta) in canonical order
std::vector<LatticePoint> smallest_set(const Parallelotope& d, long lmax);

NewtonPolygon hodge_polygon(const Parallelotope& d, long p, long lmax);
NewtonPolygon improved_hodge_polygon(const Parallelotope& d, long p, long lmax);

struct GapReport {
  long k = 0;
  Side side = Side::Open;
  long x = 0;
  Rational ihp, hp, gap;
  bool pred_strict_k2 = false;  // item (2) hypothesis
  bool pred_strict_k1 = false;  // item (3) hypothesis
  bool strict_guaranteed = false;
};
GapReport ihp_hp_gap(const Parallelotope& d, long p, long k, Side side);
bool ihphp_predicate_2(const Parallelotope& d, long p);
bool ihphp_predicate_3(const Parallelotope& d, long p);

struct HFit {
  std::vector<Rational> coeffs;  // A_0..A_{n+1}
  std::vector<long> values;      // h at k = 1..n+2
  bool integral = true;
  Rational eval(long k) const;
};
// strict: raise NONINTEGRAL_FIT on a non-integer coefficient
HFit h_polynomial_fit(const Parallelotope& d, long p, Side side, bool strict = true);

struct SlopeDistribution {
  long p = 0;
  int m_chi = 1;
  int n = 0;
  long period = 1;  // p^{m_chi - 1}
  std::vector<std::vector<long>> count_open, count_at;  // [i1][i2]
  long degree = 0;
  long table_total = 0;
  long at_n = 0;  // remainder at slope n
  bool hypothesis = true;
};
SlopeDistribution slope_distribution(const Parallelotope& d, long p, int m_chi);
// x_j^- and x_j^+ including j = 0, where x_0^- = 0 and x_0^+ = 1
long x_minus(const Parallelotope& d, long j);
long x_plus(const Parallelotope& d, long j);

// multiplicities of L-slopes from the first lmax C-slopes
std::map<Rational, long> c_slopes_to_l_slopes(const NewtonPolygon& c, int n, long lmax);

// vals: (l, val_T(u_l)); kInfVal entries are skipped
NewtonPolygon np_from_valuations(const std::vector<std::pair<long, int>>& vals, long m);

}  // namespace nplab
