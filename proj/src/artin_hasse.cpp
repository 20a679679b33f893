#include "nplab/artin_hasse.hpp"

#include "nplab/error.hpp"

namespace nplab {

ArtinHasseTable artin_hasse(u64 p, int i_max, int N) {
  if (i_max < 0) throw Error(ErrorCode::Domain, "i_max must be >= 0");
  ArtinHasseTable t;
  t.p = p;
  t.N = N;
  t.exact.assign(i_max + 1, Rational(0));
  t.exact[0] = 1;
  // (m+1) c_{m+1} = sum_{p^j - 1 <= m} c_{m - (p^j - 1)}
  for (int m = 0; m + 1 <= i_max; ++m) {
    Rational s = 0;
    for (u64 pj = 1; pj - 1 <= (u64)m; pj *= p) s += t.exact[m - (pj - 1)];
    t.exact[m + 1] = s / Rational(m + 1);
  }
  t.reduced.reserve(i_max + 1);
  for (int i = 0; i <= i_max; ++i) t.reduced.push_back(Zmod::from_rational(t.exact[i], p, N));
  return t;
}

Series<Zmod> artin_hasse_series(const ArtinHasseTable& t, int M) {
  if (M >= t.size()) throw Error(ErrorCode::PrecisionExhausted, "Artin-Hasse table too short");
  Zmod zero(0, t.p, t.N);
  Series<Zmod> s(M, zero);
  for (int i = 0; i <= M; ++i) s.coeff(i) = t[i];
  return s;
}

Series<Zmod> binomial_series(const Zmod& a, int M, int N_out) {
  u64 p = a.p();
  int need = N_out + (int)(M / (p - 1)) + 1;
  if (a.N() < need)
    throw Error(ErrorCode::PrecisionExhausted,
                "binomial_series needs input precision " + std::to_string(need) + ", have " + std::to_string(a.N()));
  Zmod zero(0, p, N_out);
  Series<Zmod> s(M, zero);
  Integer A(a.residue());
  Integer b = 1;
  for (int j = 0; j <= M; ++j) {
    if (j > 0) b = b * (A - (j - 1)) / j;  // exact
    s.coeff(j) = Zmod::from_integer(b, p, N_out);
  }
  return s;
}

}  // namespace nplab
