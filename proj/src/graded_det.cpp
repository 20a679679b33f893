#include "nplab/graded_det.hpp"

#include <random>

#include "nplab/error.hpp"
#include "nplab/rational.hpp"

namespace nplab {

namespace {

QMat invert(QMat A) {
  const int n = (int)A.rows();
  QMat I = QMat::Identity(n, n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (A(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw Error(ErrorCode::Inconsistent, "singular grading block");
    A.row(piv).swap(A.row(c));
    I.row(piv).swap(I.row(c));
    Rational inv = 1 / A(c, c);
    A.row(c) *= inv;
    I.row(c) *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == c || A(r, c) == 0) continue;
      Rational f = A(r, c);
      A.row(r) -= f * A.row(c);
      I.row(r) -= f * I.row(c);
    }
  }
  return I;
}

// echelon-based rank test: does v enlarge span(rows)?
bool extends_span(std::vector<QVec>& basis, std::vector<int>& pivots, QVec v) {
  for (size_t b = 0; b < basis.size(); ++b) {
    int pc = pivots[b];
    if (v[pc] == 0) continue;
    Rational f = v[pc] / basis[b][pc];
    for (size_t j = 0; j < v.size(); ++j) v[j] -= f * basis[b][j];
  }
  for (size_t j = 0; j < v.size(); ++j)
    if (v[j] != 0) {
      basis.push_back(v);
      pivots.push_back((int)j);
      return true;
    }
  return false;
}

struct Term {
  u64 c;
  std::vector<int> e;  // exponents of free variables
};

}  // namespace

MPoly graded_determinant(const GradedMatrix& G, u64 p, GradedDetStats* stats, long max_evals) {
  const int n = (int)G.B.rows();
  const int nv = (int)G.var_grade.size();
  const int g = nv ? (int)G.var_grade[0].size() : (n ? (int)G.row_grade[0].size() : 0);
  if (n == 0) return MPoly::constant(p, nv, 1);

  // check homogeneity and collect target grade
  std::vector<long> target(g, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < g; ++k) target[k] += G.row_grade[i][k] + G.col_grade[i][k];
  std::vector<bool> appears(nv, false);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const MPoly& e = G.B(i, j);
      if (e.is_zero()) continue;
      if (e.literal() || e.nvars() != nv) throw Error(ErrorCode::Inconsistent, "entry not in the graded ring");
      std::vector<long> gr;
      if (!e.homogeneous(G.var_grade, &gr)) throw Error(ErrorCode::Inconsistent, "entry not homogeneous");
      for (int k = 0; k < g; ++k)
        if (gr[k] != G.row_grade[i][k] + G.col_grade[j][k]) throw Error(ErrorCode::Inconsistent, "entry grade mismatch");
      for (const auto& [ex, c] : e.terms())
        for (int v = 0; v < nv; ++v)
          if (ex[v]) appears[v] = true;
    }

  // basis of the grading among appearing variables
  std::vector<QVec> ech;
  std::vector<int> piv, basis;
  for (int v = 0; v < nv; ++v) {
    if (!appears[v]) continue;
    QVec row(g);
    for (int k = 0; k < g; ++k) row[k] = G.var_grade[v][k];
    if (extends_span(ech, piv, row)) basis.push_back(v);
  }
  const int nb = (int)basis.size();
  std::vector<int> freev;
  std::vector<int> role(nv, -1);  // index into basis or free list
  std::vector<bool> is_basis(nv, false);
  for (int b = 0; b < nb; ++b) {
    is_basis[basis[b]] = true;
    role[basis[b]] = b;
  }
  for (int v = 0; v < nv; ++v)
    if (!is_basis[v]) {
      role[v] = (int)freev.size();
      freev.push_back(v);
    }
  const int nf = (int)freev.size();

  // columns J making the basis block invertible
  QMat GB(nb, g);
  for (int b = 0; b < nb; ++b)
    for (int k = 0; k < g; ++k) GB(b, k) = G.var_grade[basis[b]][k];
  std::vector<int> cols;
  {
    std::vector<QVec> e2;
    std::vector<int> p2;
    for (int k = 0; k < g && (int)cols.size() < nb; ++k) {
      QVec colv(nb);
      for (int b = 0; b < nb; ++b) colv[b] = GB(b, k);
      if (extends_span(e2, p2, colv)) cols.push_back(k);
    }
  }
  QMat sq(nb, nb);
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < nb; ++c) sq(b, c) = GB(b, cols[c]);
  QMat sqinv = nb ? invert(sq) : QMat(0, 0);

  // dehomogenized entries and degree bounds
  std::vector<std::vector<std::vector<Term>>> ent(n, std::vector<std::vector<Term>>(n));
  std::vector<std::vector<int>> rowmax(n, std::vector<int>(nf, 0)), colmax(n, std::vector<int>(nf, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const MPoly& e = G.B(i, j);
      if (e.is_zero()) continue;
      for (const auto& [ex, c] : e.terms()) {
        Term t{c, std::vector<int>(nf)};
        for (int f = 0; f < nf; ++f) {
          t.e[f] = ex[freev[f]];
          rowmax[i][f] = std::max(rowmax[i][f], t.e[f]);
          colmax[j][f] = std::max(colmax[j][f], t.e[f]);
        }
        ent[i][j].push_back(std::move(t));
      }
    }
  std::vector<int> bound(nf, 0);
  int maxb = 0;
  long total = 1;
  for (int f = 0; f < nf; ++f) {
    long rs = 0, cs = 0;
    for (int i = 0; i < n; ++i) {
      rs += rowmax[i][f];
      cs += colmax[i][f];
    }
    bound[f] = (int)std::min(rs, cs);
    maxb = std::max(maxb, bound[f]);
    total *= (bound[f] + 1);
    if (total > max_evals)
      throw Error(ErrorCode::OutOfMemory, "interpolation grid exceeds " + std::to_string(max_evals) + " points");
  }

  int s = 1;
  while (ipow(p, s) <= (u64)maxb) ++s;
  RingPtr F = make_galois_ring(p, s, 1, 7);
  std::vector<Zq> elems = field_elements(F);
  const Zq one = Zq::scalar(F, 1);

  // power tables pw[f][point][k]
  std::vector<std::vector<std::vector<Zq>>> pw(nf);
  for (int f = 0; f < nf; ++f) {
    pw[f].resize(bound[f] + 1);
    for (int a = 0; a <= bound[f]; ++a) {
      pw[f][a].push_back(one);
      for (int k = 1; k <= bound[f]; ++k) pw[f][a].push_back(pw[f][a].back() * elems[a]);
    }
  }

  std::vector<Zq> vals(total, Zq(F));
  std::vector<int> idx(nf, 0);
  Mat<Zq> A(n, n);
  for (long cell = 0; cell < total; ++cell) {
    long rest = cell;
    for (int f = 0; f < nf; ++f) {
      idx[f] = (int)(rest % (bound[f] + 1));
      rest /= (bound[f] + 1);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Zq acc(F);
        for (const Term& t : ent[i][j]) {
          Zq m = Zq::scalar(F, (long)t.c);
          for (int f = 0; f < nf; ++f)
            if (t.e[f]) m *= pw[f][idx[f]][t.e[f]];
          acc += m;
        }
        A(i, j) = acc;
      }
    vals[cell] = det_field(A);
    if (vals[cell].literal()) vals[cell] = Zq::scalar(F, 1) * vals[cell];
  }

  // tensor Newton interpolation, one axis at a time
  long stride = 1;
  for (int f = 0; f < nf; ++f) {
    const int d = bound[f];
    const long len = d + 1;
    for (long base = 0; base < total; ++base) {
      if ((base / stride) % len != 0) continue;
      std::vector<Zq> c(len);
      for (int a = 0; a < len; ++a) c[a] = vals[base + a * stride];
      for (int j = 1; j <= d; ++j)
        for (int i = d; i >= j; --i) c[i] = (c[i] - c[i - 1]) * (elems[i] - elems[i - j]).inverse();
      std::vector<Zq> poly(len, Zq(F));
      poly[0] = c[d];
      for (int i = d - 1; i >= 0; --i) {
        // poly = poly * (X - x_i) + c_i
        std::vector<Zq> np(len, Zq(F));
        for (int k = 0; k < len - 1; ++k) {
          np[k + 1] += poly[k];
          np[k] -= poly[k] * elems[i];
        }
        np[0] += c[i];
        poly = std::move(np);
      }
      for (int a = 0; a < len; ++a) vals[base + a * stride] = poly[a];
    }
    stride *= len;
  }

  MPoly out(p, nv);
  for (long cell = 0; cell < total; ++cell) {
    const Zq& v = vals[cell];
    if (v.is_zero()) continue;
    for (int k = 1; k < F->m; ++k)
      if (v.coeff(k)) throw Error(ErrorCode::Inconsistent, "interpolated coefficient outside F_p");
    Exps ex(nv, 0);
    long rest = cell;
    std::vector<Rational> rhs(g);
    for (int k = 0; k < g; ++k) rhs[k] = target[k];
    for (int f = 0; f < nf; ++f) {
      int e = (int)(rest % (bound[f] + 1));
      rest /= (bound[f] + 1);
      ex[freev[f]] = e;
      for (int k = 0; k < g; ++k) rhs[k] -= Rational(e * G.var_grade[freev[f]][k]);
    }
    for (int b = 0; b < nb; ++b) {
      Rational eb = 0;
      for (int c = 0; c < nb; ++c) eb += rhs[cols[c]] * sqinv(c, b);
      if (den(eb) != 1 || eb < 0) throw Error(ErrorCode::Inconsistent, "re-homogenization failed");
      ex[basis[b]] = (int)to_long(num(eb));
    }
    std::vector<Rational> chk(g, Rational(0));
    for (int v = 0; v < nv; ++v)
      for (int k = 0; k < g; ++k) chk[k] += Rational(ex[v] * G.var_grade[v][k]);
    for (int k = 0; k < g; ++k)
      if (chk[k] != Rational(target[k])) throw Error(ErrorCode::Inconsistent, "monomial off the target grade");
    out += MPoly::monomial(p, ex, (long)v.coeff(0));
  }

  // spot check at random points of the field
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 2; ++trial) {
    std::vector<Zq> pt(nv);
    for (int v = 0; v < nv; ++v) pt[v] = elems[rng() % elems.size()];
    Mat<Zq> M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = G.B(i, j).evaluate(pt, one);
    Zq direct = det_field(M);
    Zq interp = out.evaluate(pt, one);
    if (!(direct == interp)) throw Error(ErrorCode::Inconsistent, "interpolated determinant fails spot check");
  }

  if (stats) {
    stats->free_vars = nf;
    stats->degree_bounds = bound;
    stats->evaluations = total;
    stats->field_degree = s;
  }
  return out;
}

Zmod specialized_determinant(const Mat<MPoly>& B, const std::vector<Zmod>& point) {
  const int n = (int)B.rows();
  if (n == 0) return Zmod(1);
  const Zmod one = Zmod(1, point.at(0).p(), 1);
  Mat<Zmod> A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = B(i, j).evaluate(point, one);
  return det_field(A);
}

}  // namespace nplab
