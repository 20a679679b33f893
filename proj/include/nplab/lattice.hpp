#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nplab/rational.hpp"

namespace nplab {

enum class Side { Open, Closed };
inline const char* side_name(Side s) { return s == Side::Open ? "open" : "closed"; }

// Delta = convex hull of O and sums of subsets of the rows of V.
struct Parallelotope {
  int n = 0;
  IMat V;     // row i = generator V_i
  long vol = 0;
  long D = 0;
  QMat Vinv;
  IMat adj;   // vol * Vinv, integral; z = Q * adj / vol
  std::vector<long> elementary_divisors;

  static Parallelotope from_rows(const std::vector<std::vector<long>>& rows);
  IVec generator(int i) const;
  std::string str() const;
};

struct LatticePoint {
  IVec Q;
  QVec z;
  Rational w;
  QVec deg;  // degree vector
};

// canonical order: weight, then lexicographic Q
bool point_less(const LatticePoint& a, const LatticePoint& b);

QVec coords(const Parallelotope& d, const IVec& Q);
bool in_cone(const Parallelotope& d, const IVec& Q);
Rational weight(const Parallelotope& d, const IVec& Q);  // CONE_VIOLATION outside
LatticePoint make_point(const Parallelotope& d, const IVec& Q);
QVec degree_vector(const Parallelotope& d, const QVec& z);

// Delta_k^- (0 <= z < k) or Delta_k^+ (0 <= z <= k); k = 0 gives {O}
std::vector<LatticePoint> enumerate(const Parallelotope& d, long k, Side side);
// (x_k^-, x_k^+), k >= 1
std::pair<long, long> count_closed_form(const Parallelotope& d, long k);

IVec residue(const Parallelotope& d, const IVec& Q);
IVec eta(const Parallelotope& d, long p, const IVec& P0);
// points of Delta^- with z_i = 0 exactly on I (0-based indices)
std::vector<LatticePoint> delta_minus_I(const Parallelotope& d, const std::vector<int>& I);

// integer vector helpers
IVec add(const IVec& a, const IVec& b);
IVec sub(const IVec& a, const IVec& b);
IVec scale(long s, const IVec& a);
std::string vec_str(const IVec& a);

struct BlockDecomposition {
  IVec P0;
  std::vector<int> I;                   // 0-based
  std::vector<std::vector<int>> chain;  // S_1..S_l, 0-based, ascending z
  LatticePoint Qmin;
  long K = 0;
  std::vector<LatticePoint> members;  // canonical order
  // offsets m_1 <= ... <= m_l of each member relative to Qmin
  std::vector<std::vector<long>> offsets;
};

// the chain of a cone point: indices with positive z grouped by equal value
std::vector<std::vector<int>> chain_of(const QVec& z);
// V_S = sum of generators in S
IVec vertex_of(const Parallelotope& d, const std::vector<int>& S);

std::vector<BlockDecomposition> block_decomposition(const Parallelotope& d, long k, Side side);

}  // namespace nplab
