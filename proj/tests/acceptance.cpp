// One line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "nplab/artin_hasse.hpp"
#include "nplab/dwork.hpp"
#include "nplab/error.hpp"
#include "nplab/oracle.hpp"
#include "nplab/polygon.hpp"

using namespace nplab;

namespace {

Parallelotope P(std::vector<std::vector<long>> v) { return Parallelotope::from_rows(v); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// 1. the worked example: weights and the IHP/HP gap at x = 6
void example_weights(Outcome& o) {
  auto d = P({{2, 0}, {0, 3}});
  const long p = 29;
  auto pts = enumerate(d, 1, Side::Open);
  const std::vector<IVec> Q = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {1, 2}};
  const std::vector<Rational> w = {0, Rational(1, 3), Rational(1, 2), Rational(1, 2), Rational(2, 3), Rational(2, 3)};
  o.require(pts.size() == 6, "six points in the open unit dilate");
  Rational lhs = 0;
  for (size_t i = 0; i < Q.size(); ++i) {
    o.require(weight(d, Q[i]) == w[i], "w" + vec_str(Q[i]));
    Rational wp = weight(d, scale(p, Q[i]));
    o.require(wp == Rational(p) * w[i], "w(p" + vec_str(Q[i]) + ")");
    lhs += Rational(floor_q(wp)) - Rational(floor_q(w[i])) - wp + w[i];
    bool listed = false;
    for (auto& q : pts) listed |= q.Q == Q[i];
    o.require(listed, vec_str(Q[i]) + " enumerated");
  }
  auto ihp = improved_hodge_polygon(d, p, 6), hp = hodge_polygon(d, p, 6);
  Rational gap = ihp.evaluate(6) - hp.evaluate(6);
  o.require(lhs == Rational(1, 3), "sum equals 1/3");
  o.require(gap == Rational(1, 3), "IHP(6) - HP(6) = 1/3");
  o.detail << "IHP(6)-HP(6)=" << to_string(gap);
}

// 2. nonvanishing of the universal leading coefficients
void generic_instances(Outcome& o) {
  struct Inst {
    std::vector<std::vector<long>> V;
    u64 p;
    long kmax;
  };
  for (const auto& in : std::vector<Inst>{{{{2}}, 11, 3}, {{{3}}, 17, 3}, {{{1, 0}, {1, 2}}, 13, 4}}) {
    auto d = P(in.V);
    auto rep = verify_generic(d, in.p, 1, in.kmax);
    o.require(rep.hypothesis, d.str() + " hypothesis");
    o.require(rep.passed, d.str() + " p=" + std::to_string(in.p));
    long full = 0;
    for (const auto& r : rep.results) full += r.mode == EMode::Full && !r.factored;
    o.detail << d.str() << " p=" << in.p << " k=1.." << in.kmax << " (" << rep.results.size() << " dets, " << full
             << " full) ";
  }
}

// 3. oracle against the Fredholm path for x^2 + a x
void oracle_vs_dwork(Outcome& o) {
  auto d = P({{2}});
  int agree = 0;
  for (long a = 1; a <= 10; ++a) {
    auto f = make_fpoly(11, {{{2}, 1}, {{1}, a}});
    auto r = compare(d, f, 4, 15, 1);
    agree += r.ok;
    o.require(r.ok, "a=" + std::to_string(a) + " first diff at u_" + std::to_string(r.first_l));
  }
  o.detail << agree << "/10 values of a agree mod (11, T^16), l <= 4";
}

// 4. oracle polygon above IHP for random f
void above_ihp(Outcome& o) {
  const long p = 7;
  long runs = 0, checked = 0, violations = 0;
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    int L = 0;
    while (L + 1 < p && std::pow((double)p, (L + 1) * d.n) <= 1e6) ++L;
    auto ihp = improved_hodge_polygon(d, p, L);
    int M = (int)to_long(ceil_q(ihp.evaluate(L))) + 1;
    auto fq = make_galois_ring(p, 1, 1);
    for (u64 s = 0; s < 20; ++s) {
      auto r = oracle_run(random_fpoly(d, fq, 4000 + s), L, M, 1);
      ++runs;
      for (int l = 0; l <= L; ++l) {
        if (r.valuations[l] == kInfVal) continue;  // zero mod T^{M+1}, above IHP(L)
        ++checked;
        if (Rational(r.valuations[l]) < ihp.evaluate(l)) ++violations;
      }
    }
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.detail << runs << " oracle runs at p=" << p << ", " << checked << " coefficients, " << violations
           << " violations";
}

// 5. generic vertex attainment versus the Zariski-open condition
void vertex_attainment(Outcome& o) {
  auto d = P({{2}});
  int agree = 0, generic = 0, member = 0;
  for (long a = 1; a <= 10; ++a) {
    auto f = make_fpoly(11, {{{2}, 1}, {{1}, a}});
    auto run = oracle_run(f, 3, 16, 1);
    bool g = run.valuations[2] == 5 && run.valuations[3] == 15;
    bool z = ozar_membership(d, f);
    generic += g;
    member += z;
    agree += g == z;
    o.require(g == z, "a=" + std::to_string(a));
  }
  o.detail << "attained " << generic << "/10, ozar " << member << "/10, agreement " << agree << "/10";
}

// 6. closed forms and the h polynomial
void closed_forms(Outcome& o) {
  long counts = 0, preds = 0;
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    for (long k = 1; k <= 6; ++k) {
      auto [xm, xp] = count_closed_form(d, k);
      o.require(xm == (long)enumerate(d, k, Side::Open).size(), d.str() + " x-" + std::to_string(k));
      o.require(xp == (long)enumerate(d, k, Side::Closed).size(), d.str() + " x+" + std::to_string(k));
      counts += 2;
    }
    for (long p : {11L, 13L, 29L}) {
      if (d.vol % p == 0) continue;
      for (Side s : {Side::Open, Side::Closed}) {
        auto fit = h_polynomial_fit(d, p, s, false);
        for (long k = d.n + 3; k <= d.n + 4; ++k) {
          o.require(fit.eval(k) == Rational(h_dilate(d, p, k, s)),
                    d.str() + " p=" + std::to_string(p) + " h fit at k=" + std::to_string(k));
          ++preds;
        }
      }
    }
  }
  o.detail << counts << " closed-form counts, " << preds << " fit predictions";
}

// 7. det M(w,k) sweep and the l = 1 exponent
void matrix_M_sweep(Outcome& o) {
  const long p = 11;
  auto t = artin_hasse(p, 3 * p + 40, 1);
  long cases = 0, zero = 0, l1 = 0, plus = 0, minus = 0;
  for (int l = 1; l <= 2; ++l)
    for (long k = 0; k <= 2; ++k) {
      std::vector<std::vector<long>> ws;
      std::function<void(std::vector<long>&)> rec = [&](std::vector<long>& cur) {
        if ((int)cur.size() == l) {
          ws.push_back(cur);
          return;
        }
        long prev = cur.empty() ? 0 : cur.back();
        for (long s = k; s <= p - k; ++s) {
          cur.push_back(prev + s);
          rec(cur);
          cur.pop_back();
        }
      };
      std::vector<long> cur;
      rec(cur);
      for (auto& w : ws) {
        auto m = matrix_M(w, k, p, t);
        ++cases;
        if (m.det.is_zero()) {
          ++zero;
          o.require(false, "w=" + vec_str(w) + " k=" + std::to_string(k));
        }
        if (l == 1) {
          ++l1;
          plus += m.closed_form_k_plus_1;
          minus += m.closed_form_k_minus_1;
        }
      }
    }
  o.detail << cases << " determinants, " << zero << " vanish; l=1 closed form with exponent k+1 holds " << plus << "/"
           << l1 << ", with k-1 " << minus << "/" << l1;
}

// 8. structural properties with fixed seeds
void structural(Outcome& o) {
  std::mt19937_64 rng(20240);
  long n_eta = 0, n_sub = 0, n_val = 0, n_ld = 0, n_block = 0, n_cong = 0, n_slope = 0;
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    auto fund = enumerate(d, 1, Side::Open);
    std::set<IVec> dom;
    for (auto& q : fund) dom.insert(q.Q);
    for (long p : {11L, 13L, 29L}) {
      if (d.vol % p == 0) continue;
      std::set<IVec> img;
      for (auto& q : fund) img.insert(eta(d, p, q.Q));
      o.require(img == dom, d.str() + " eta p=" + std::to_string(p));
      ++n_eta;
    }
    auto two = enumerate(d, 2, Side::Closed);
    for (int it = 0; it < 200; ++it) {
      const auto& a = two[rng() % two.size()];
      const auto& b = two[rng() % two.size()];
      o.require(weight(d, add(a.Q, b.Q)) <= a.w + b.w, "subadditivity");
      ++n_sub;
    }
    for (long p : {5L, 7L, 11L}) {
      if (d.vol % p == 0) continue;
      auto fq = make_galois_ring((u64)p, 1, 1);
      auto f = random_fpoly(d, fq, rng());
      const int M = d.n == 3 ? 4 : 8;
      auto E = expand_E(d, f, 2, M, artin_hasse((u64)p, M + 1, 2));
      for (const auto& [Q, s] : E.e) {
        if (s.is_zero_series()) continue;
        o.require(Rational(s.val()) >= ceil_q(weight(d, Q)), "e_Q valuation " + vec_str(Q));
        ++n_val;
      }
    }
    for (long p : {11L, 13L, 17L}) {
      if (d.vol % p == 0) continue;
      auto s = slope_distribution(d, p, 1);
      long sum = s.at_n;
      for (auto& row : s.count_open)
        for (long c : row) sum += c;
      for (auto& row : s.count_at)
        for (long c : row) sum += c;
      o.require(sum == s.degree && s.at_n >= 0, d.str() + " slope totals");
      ++n_slope;
    }
  }
  for (int it = 0; it < 100; ++it) {
    const u64 p = 13;
    auto rnd = [&]() {
      MPoly g(p, 3);
      int terms = 1 + rng() % 4;
      for (int i = 0; i < terms; ++i)
        g += MPoly::monomial(p, {(int)(rng() % 3), (int)(rng() % 3), (int)(rng() % 3)}, 1 + rng() % 12);
      return g;
    };
    MPoly a = rnd(), b = rnd();
    if (a.is_zero() || b.is_zero()) continue;
    auto da = partial_degree(a), db = partial_degree(b), dab = partial_degree(a * b);
    bool ok = leading_part(a * b) == leading_part(a) * leading_part(b);
    for (int i = 0; i < 3; ++i) ok &= dab[i] == da[i] + db[i];
    o.require(ok, "LD/Deg multiplicativity");
    ++n_ld;
  }
  struct BI {
    std::vector<std::vector<long>> V;
    u64 p;
    long kmax;
  };
  for (const auto& b : std::vector<BI>{{{{2}}, 11, 3}, {{{3}}, 17, 3}, {{{1, 0}, {1, 2}}, 13, 3}, {{{2, 0}, {0, 3}}, 29, 1}}) {
    auto d = P(b.V);
    for (long k = 1; k <= b.kmax; ++k)
      for (Side s : {Side::Open, Side::Closed}) {
        bool eq = false;
        try {
          eq = res_block_factorization(d, b.p, k, s).equal;
        } catch (const Error& e) {
          o.detail << " " << e.what();
        }
        o.require(eq, d.str() + " block factorization k=" + std::to_string(k));
        ++n_block;
      }
  }
  for (auto& v : std::vector<std::vector<std::vector<long>>>{{{2}}, {{3}}, {{1, 0}, {1, 2}}}) {
    auto d = P(v);
    const long p = 7;
    auto fq = make_galois_ring((u64)p, 1, 1);
    for (int it = 0; it < 3; ++it) {
      auto f = random_fpoly(d, fq, rng());
      for (long k = 1; k <= 2; ++k)
        for (Side s : {Side::Open, Side::Closed}) {
          long h = h_dilate(d, p, k, s);
          long x = (long)enumerate(d, k, s).size();
          if (x > 8 || h > 40) continue;
          auto F = fredholm(d, f, (int)x, (int)h, 2);
          Zq lc = specialized_leading(d, f, k, s);
          long sign = (x % 2) ? -1 : 1;
          bool ok = F.u[x].val() >= h &&
                    Zq::scalar(fq, sign * (long)(F.u[x][(int)h].residue() % (u64)p)) == lc;
          o.require(ok, d.str() + " congruence k=" + std::to_string(k));
          ++n_cong;
        }
    }
  }
  o.detail << "eta " << n_eta << ", subadditivity " << n_sub << ", e_Q bounds " << n_val << ", LD/Deg " << n_ld
           << ", block factorizations " << n_block << ", congruences " << n_cong << ", slope totals " << n_slope;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    void (*run)(Outcome&);
  };
  const std::vector<Criterion> all = {
      {1, "worked example weights and gap", 1.0, example_weights},
      {2, "generic leading coefficients", 300.0, generic_instances},
      {3, "oracle equals Fredholm expansion", 60.0, oracle_vs_dwork},
      {4, "oracle polygon above IHP", 0, above_ihp},
      {5, "generic vertex attainment", 0, vertex_attainment},
      {6, "closed forms and h fit", 0, closed_forms},
      {7, "M(w,k) nonvanishing sweep", 0, matrix_M_sweep},
      {8, "structural properties", 0, structural},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0 && secs > c.budget) {
      o.pass = false;
      o.detail << " [over the " << c.budget << " s budget]";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << ", " << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s): " << o.detail.str() << std::endl;
  }
  return failed ? 1 : 0;
}
