#pragma once

#include <vector>

#include "nplab/galois.hpp"
#include "nplab/linalg.hpp"
#include "nplab/mpoly.hpp"

namespace nplab {

// A square polynomial matrix over F_p whose (i, j) entry is homogeneous of
// grade row_grade[i] + col_grade[j], where variable v has grade var_grade[v].
struct GradedMatrix {
  Mat<MPoly> B;
  std::vector<std::vector<long>> var_grade;
  std::vector<std::vector<long>> row_grade;
  std::vector<std::vector<long>> col_grade;
};

struct GradedDetStats {
  int free_vars = 0;
  std::vector<int> degree_bounds;
  long evaluations = 0;
  int field_degree = 1;
};

// Exact determinant.  Dehomogenizes on a basis of the grading, bounds the
// degree in the remaining variables, evaluates over F_{p^s} on a tensor grid
// and interpolates; the result is re-homogenized and spot-checked.
MPoly graded_determinant(const GradedMatrix& G, u64 p, GradedDetStats* stats = nullptr, long max_evals = 400000);

// numeric specialization: det of B at a point of F_p^nvars
Zmod specialized_determinant(const Mat<MPoly>& B, const std::vector<Zmod>& point);

}  // namespace nplab
