#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "nplab/error.hpp"
#include "nplab/oracle.hpp"
#include "nplab/polygon.hpp"

using namespace nplab;

static Parallelotope P(std::vector<std::vector<long>> v) { return Parallelotope::from_rows(v); }

static Zmod Z(long v, u64 p, int N) { return Zmod(v, p, N); }

TEST_CASE("exp_sum of the zero polynomial counts points") {
  FPoly f;
  f.fq = make_galois_ring(5, 1, 1);
  f.coeff[{0, 0}] = Zq::scalar(f.fq, 0);
  for (int k = 1; k <= 3; ++k) {
    auto S = exp_sum(f, k, 6, 3);
    long cnt = (long)std::pow(std::pow(5.0, k) - 1, 2);
    CHECK(S[0] == Z(cnt, 5, 3));
    for (int j = 1; j <= 6; ++j) CHECK(S[j].is_zero());
  }
}

TEST_CASE("exp_sum, n=1, p=3, f=x") {
  // (1+T) + (1+T)^{-1} = 2 + T^2 - T^3 + T^4 - ...
  auto f = make_fpoly(3, {{{1}, 1}});
  const int N = 4, M = 8;
  auto S = exp_sum(f, 1, M, N);
  CHECK(S[0] == Z(2, 3, N));
  CHECK(S[1] == Z(0, 3, N));
  for (int j = 2; j <= M; ++j) CHECK(S[j] == Z(j % 2 ? -1 : 1, 3, N));
}

TEST_CASE("constant term of S is (q^k-1)^n") {
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    const u64 p = 7;
    auto fq = make_galois_ring(p, 1, 1);
    auto f = random_fpoly(d, fq, 11);
    for (int k = 1; std::pow(7.0, k * d.n) <= 2e5; ++k) {
      auto S = exp_sum(f, k, 3, 2);
      long c = (long)std::pow(std::pow(7.0, k) - 1, d.n);
      CHECK(S[0] == Z(c % 49, p, 2));
    }
  }
}

TEST_CASE("char_series low terms") {
  auto f = make_fpoly(11, {{{2}, 1}, {{1}, 1}});
  auto r = oracle_run(f, 3, 16, 1);
  CHECK(r.u[0] == Series<Zmod>::constant(Z(1, 11, 1), 16, Z(0, 11, 1)));
  // u_1 = -(q-1)^{-1} S(1)
  Series<Zmod> u1 = r.S[1];
  u1.scale(-Z(10, 11, 1).inverse());
  CHECK(r.u[1] == u1);
  CHECK(r.valuations[2] == 5);
  CHECK(r.valuations[3] == 15);
  CHECK_THROWS_AS(oracle_run(f, 11, 4, 1), Error);
  try {
    oracle_run(f, 11, 4, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexTooLarge);
  }
}

TEST_CASE("scale gate") {
  auto f = make_fpoly(11, {{{2, 0}, 1}, {{0, 3}, 1}});
  try {
    exp_sum(f, 4, 2, 1);
    FAIL("expected SCALE_EXCEEDED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ScaleExceeded);
  }
  auto g = make_fpoly(5, {{{1}, 1}});
  CHECK_NOTHROW(exp_sum(g, 2, 2, 1));
}

TEST_CASE("independent of the defining polynomial") {
  auto f = make_fpoly(5, {{{2}, 3}, {{1}, 1}, {{0}, 4}});
  for (int k = 2; k <= 3; ++k) {
    auto R0 = make_galois_ring(5, k, 2, 0), R1 = make_galois_ring(5, k, 2, 99);
    auto S0 = exp_sum(f, k, 8, 1, 0), S1 = exp_sum(f, k, 8, 1, 99);
    CHECK(S0 == S1);
    CHECK(R0->phi != R1->phi);
  }
  auto a = oracle_run(f, 4, 10, 1, 0), b = oracle_run(f, 4, 10, 1, 99);
  CHECK(a.valuations == b.valuations);
}

TEST_CASE("t_to_pi inverts 1+T = E(pi)") {
  auto t = artin_hasse(11, 10, 2);
  Series<Zmod> s = Series<Zmod>::monomial(Z(1, 11, 2), 1, 9, Z(0, 11, 2));  // T
  auto e = artin_hasse_series(t, 9);
  CHECK(t_to_pi(s, t) + Series<Zmod>::constant(Z(1, 11, 2), 9, Z(0, 11, 2)) == e);
}

TEST_CASE("oracle agrees with the Fredholm path") {
  auto d = P({{2}});
  for (long a = 1; a <= 3; ++a) {
    auto f = make_fpoly(11, {{{2}, 1}, {{1}, a}});
    auto r = compare(d, f, 4, 15, 1, true);
    CHECK(r.ok);
    CHECK(r.val_oracle[2] == 5);
  }
  auto g = make_fpoly(11, {{{2}, 3}, {{1}, 5}, {{0}, 2}});
  CHECK(compare(d, g, 3, 12, 2).ok);
  auto d2 = P({{1, 0}, {1, 2}});
  auto fq = make_galois_ring(13, 1, 1);
  for (u64 s = 0; s < 2; ++s) CHECK(compare(d2, random_fpoly(d2, fq, s), 2, 10, 1).ok);
}

TEST_CASE("oracle polygon lies above IHP") {
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    const long p = 7;
    int L = 0;
    while (L + 1 < p && std::pow((double)p, (L + 1) * d.n) <= 2e5) ++L;
    auto ihp = improved_hodge_polygon(d, p, L);
    int M = (int)to_long(ceil_q(ihp.evaluate(L))) + 1;
    auto fq = make_galois_ring(p, 1, 1);
    for (u64 s = 0; s < 2; ++s) {
      auto r = oracle_run(random_fpoly(d, fq, 100 + s), L, M, 1);
      for (int l = 0; l <= L; ++l)
        if (r.valuations[l] != kInfVal) CHECK(Rational(r.valuations[l]) >= ihp.evaluate(l));
    }
  }
}

TEST_CASE("np_check") {
  auto d = P({{2}});
  auto f = make_fpoly(11, {{{2}, 1}, {{1}, 1}});
  auto rep = np_check(d, f, 0, 1);
  REQUIRE(rep.vertices.size() == 4);
  CHECK(rep.vertices[0].x == 0);
  CHECK(rep.vertices[0].generic);
  CHECK(rep.vertices[2].x == 2);
  CHECK(rep.vertices[2].h == 5);
  CHECK(rep.vertices[3].x == 3);
  CHECK(rep.vertices[3].h == 15);
  CHECK(rep.passes);
  CHECK(rep.passes == ozar_membership(d, f));
  CHECK_THROWS_AS(np_check(d, f, 0, 1, 10), Error);
}
