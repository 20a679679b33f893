#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "nplab/error.hpp"
#include "nplab/polygon.hpp"

using namespace nplab;

static Parallelotope P(std::vector<std::vector<long>> v) { return Parallelotope::from_rows(v); }

TEST_CASE("h of sets") {
  auto line = P({{2}});
  CHECK(h_of_set(line, 11, {{0}, {1}}) == 5);
  auto d = P({{2, 0}, {0, 3}});
  std::vector<IVec> fund;
  for (auto& q : enumerate(d, 1, Side::Open)) fund.push_back(q.Q);
  CHECK(h_of_set(d, 29, fund) == 75);
  CHECK(h_of_set(d, 29, {{0, 0}}) == 0);
  CHECK_THROWS_AS(h_of_set(P({{1, 0}, {1, 2}}), 13, {{0, 1}}), Error);
}

TEST_CASE("hodge and improved hodge polygons") {
  auto line = P({{2}});
  CHECK(hodge_polygon(line, 11, 2).evaluate(2) == 5);
  CHECK(hodge_polygon(line, 11, 1).evaluate(1) == 0);
  auto d = P({{2, 0}, {0, 3}});
  CHECK(hodge_polygon(d, 29, 6).evaluate(6) == Rational(224, 3));
  auto ihp = improved_hodge_polygon(line, 11, 10);
  CHECK(ihp.evaluate(2) == 5);
  CHECK(ihp.evaluate(3) == 15);
  CHECK(count_closed_form(line, 1) == std::pair<long, long>{2, 3});
  auto hp = hodge_polygon(line, 11, 10);
  for (long x = 0; x <= 10; ++x) CHECK(ihp.evaluate(x) == hp.evaluate(x));
  CHECK(improved_hodge_polygon(d, 29, 6).evaluate(6) - hodge_polygon(d, 29, 6).evaluate(6) == Rational(1, 3));
}

TEST_CASE("gap reports") {
  auto d = P({{2, 0}, {0, 3}});
  auto g = ihp_hp_gap(d, 29, 1, Side::Open);
  CHECK(g.x == 6);
  CHECK(g.gap == Rational(1, 3));
  CHECK(g.pred_strict_k1);
  for (long k = 1; k <= 4; ++k) CHECK(ihp_hp_gap(P({{2}}), 11, k, Side::Open).gap == 0);
  CHECK(ihp_hp_gap(P({{3}}), 17, 1, Side::Open).gap == 0);
}

TEST_CASE("h polynomial fit") {
  auto line = P({{2}});
  auto f = h_polynomial_fit(line, 11, Side::Open);
  CHECK(f.values == std::vector<long>{5, 30, 75});
  CHECK(f.coeffs == std::vector<Rational>{0, -5, 10});
  CHECK(f.eval(4) == h_dilate(line, 11, 4, Side::Open));
  CHECK(f.eval(4) == 140);
  auto c = h_polynomial_fit(line, 11, Side::Closed);
  CHECK(c.values == std::vector<long>{15, 50, 105});
  CHECK(c.eval(4) == 180);
  CHECK(h_dilate(line, 11, 4, Side::Closed) == 180);
  // unit cube: all weights integral, h = (p-1) * total weight
  auto cube = P({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  for (long k = 1; k <= 4; ++k) {
    Rational tw = 0;
    for (auto& q : enumerate(cube, k, Side::Open)) tw += q.w;
    CHECK(Rational(h_dilate(cube, 7, k, Side::Open)) == Rational(6) * tw);
  }
}

TEST_CASE("h polynomial fit predicts further dilates") {
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    for (long p : {11L, 13L, 29L}) {
      if (d.vol % p == 0) continue;
      for (Side side : {Side::Open, Side::Closed}) {
        auto f = h_polynomial_fit(d, p, side, false);
        for (long k = d.n + 3; k <= d.n + 4; ++k) CHECK(f.eval(k) == h_dilate(d, p, k, side));
      }
    }
  }
}

TEST_CASE("slope distribution") {
  auto line = P({{2}});
  auto s = slope_distribution(line, 11, 1);
  CHECK(s.hypothesis);
  CHECK(s.count_at[0][0] == 1);
  CHECK(s.count_open[0][0] == 1);
  CHECK(s.at_n == 0);
  auto d = P({{2, 0}, {0, 3}});
  auto t = slope_distribution(d, 29, 1);
  CHECK_FALSE(t.hypothesis);  // 29 < 6 * 6
  CHECK(t.count_open[0][0] == 5);
  CHECK(t.table_total == 12);
  CHECK(t.at_n == 0);
}

TEST_CASE("slope distribution totals") {
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    for (long p : {11L, 13L, 17L}) {
      if (d.vol % p == 0) continue;
      for (int m = 1; m <= 2; ++m) {
        auto s = slope_distribution(d, p, m);
        long sum = 0;
        for (int i = 0; i < d.n; ++i)
          for (long j = 0; j < s.period; ++j) {
            CHECK(s.count_open[i][j] >= 0);
            CHECK(s.count_at[i][j] >= 0);
            sum += s.count_open[i][j] + s.count_at[i][j];
          }
        CHECK(sum + s.at_n == s.degree);
        CHECK(s.at_n >= 0);
      }
    }
  }
}

TEST_CASE("C to L slope transfer") {
  auto line = P({{2}});
  auto ihp = improved_hodge_polygon(line, 11, 12);
  NewtonPolygon norm;
  for (auto& v : ihp.vertices) norm.vertices.push_back({v.x, v.y / 10});
  auto L = c_slopes_to_l_slopes(norm, 1, 12);
  CHECK(L == std::map<Rational, long>{{Rational(0), 1}, {Rational(1, 2), 1}});
  CHECK(c_slopes_to_l_slopes(NewtonPolygon{}, 1, 0).empty());
  // agreement with the slope table when m_chi = 1
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    for (long p : {11L, 13L, 29L}) {
      if (d.vol % p == 0) continue;
      long lmax = count_closed_form(d, d.n + 2).second;
      auto c = improved_hodge_polygon(d, p, lmax);
      NewtonPolygon nc;
      for (auto& vx : c.vertices) nc.vertices.push_back({vx.x, vx.y / (p - 1)});
      auto Ls = c_slopes_to_l_slopes(nc, d.n, lmax);
      auto s = slope_distribution(d, p, 1);
      for (int i1 = 0; i1 < d.n; ++i1) {
        long open = 0;
        for (auto& [sl, m] : Ls)
          if (sl > i1 && sl < i1 + 1) open += m;
        CHECK(open == s.count_open[i1][0]);
        long at = Ls.count(Rational(i1)) ? Ls.at(Rational(i1)) : 0;
        CHECK(at == s.count_at[i1][0]);
      }
    }
  }
}

TEST_CASE("np from valuations") {
  auto a = np_from_valuations({{0, 0}, {1, 0}, {2, 5}}, 1);
  CHECK(a.vertices == std::vector<Vertex>{{0, 0}, {1, 0}, {2, 5}});
  auto b = np_from_valuations({{0, 0}, {1, 3}, {2, 5}}, 1);
  CHECK(b.vertices == std::vector<Vertex>{{0, 0}, {2, 5}});
  auto c = np_from_valuations({{0, 0}, {2, 10}}, 2);
  CHECK(c.vertices == std::vector<Vertex>{{0, 0}, {2, 5}});
}

TEST_CASE("IHP structure around the dilates") {
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    for (long p : {11L, 13L, 29L}) {
      if (d.vol % p == 0) continue;
      long lmax = count_closed_form(d, 4).second;
      auto ihp = improved_hodge_polygon(d, p, lmax);
      auto hp = hodge_polygon(d, p, lmax);
      auto sl = ihp.slopes();
      for (long k = 1; k <= 3; ++k) {
        auto [xm, xp] = count_closed_form(d, k);
        bool found_m = false, found_p = false;
        for (auto& vx : ihp.vertices) {
          found_m |= vx.x == xm;
          found_p |= vx.x == xp;
        }
        CHECK(found_m);
        CHECK(found_p);
        CHECK(ihp.evaluate(xm) == h_dilate(d, p, k, Side::Open));
        CHECK(ihp.evaluate(xp) == h_dilate(d, p, k, Side::Closed));
        for (long i = xm; i < xp; ++i) CHECK(sl[i] == Rational(k * (p - 1)));
        for (long i = 0; i < xm; ++i) CHECK(sl[i] < Rational(k * (p - 1)));
        for (long i = xp; i < (long)sl.size(); ++i) CHECK(sl[i] > Rational(k * (p - 1)));
        for (Side side : {Side::Open, Side::Closed}) {
          auto g = ihp_hp_gap(d, p, k, side);
          CHECK(g.gap >= 0);
          if (g.pred_strict_k1 || (g.pred_strict_k2 && k >= 2)) CHECK(g.gap > 0);
        }
      }
      (void)hp;
    }
  }
}

TEST_CASE("minimal multisets") {
  std::mt19937_64 rng(2024);
  auto d = P({{2, 0}, {0, 3}});
  const long p = 29;
  auto pool = enumerate(d, 3, Side::Closed);
  for (int it = 0; it < 200; ++it) {
    long m = 1 + rng() % 3, l = 1 + rng() % 10;
    // random sub-multiset of M^{*m} of size m*l
    std::vector<int> used(pool.size(), 0);
    long hs = 0;
    for (long t = 0; t < m * l; ++t) {
      size_t i;
      do {
        i = rng() % pool.size();
      } while (used[i] >= m);
      ++used[i];
      hs += h_point(d, p, pool[i]);
    }
    long hw = 0;
    for (auto& q : smallest_set(d, l)) hw += h_point(d, p, q);
    CHECK(hs >= m * hw);
  }
}

TEST_CASE("tie-breaks do not matter") {
  std::mt19937_64 rng(9);
  auto d = P({{2, 0}, {0, 3}});
  auto W = smallest_set(d, 40);
  auto ref = improved_hodge_polygon(d, 29, 40);
  for (int it = 0; it < 10; ++it) {
    auto V = W;
    // shuffle within equal-weight runs
    size_t s = 0;
    while (s < V.size()) {
      size_t e = s;
      while (e < V.size() && V[e].w == V[s].w) ++e;
      std::shuffle(V.begin() + s, V.begin() + e, rng);
      s = e;
    }
    std::vector<std::pair<long, Rational>> pts{{0, Rational(0)}};
    long acc = 0;
    for (size_t i = 0; i < V.size(); ++i) {
      acc += h_point(d, 29, V[i]);
      pts.push_back({(long)i + 1, Rational(acc)});
    }
    CHECK(lower_hull(pts).vertices == ref.vertices);
  }
}
