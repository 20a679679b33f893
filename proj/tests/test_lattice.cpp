#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "nplab/error.hpp"
#include "nplab/lattice.hpp"

using namespace nplab;

static Parallelotope P(std::vector<std::vector<long>> v) { return Parallelotope::from_rows(v); }

TEST_CASE("coordinates and weights") {
  auto d = P({{2, 0}, {0, 3}});
  CHECK(coords(d, {1, 1}) == QVec{Rational(1, 2), Rational(1, 3)});
  CHECK(coords(d, {0, 0}) == QVec{0, 0});
  CHECK(coords(P({{1, 0}, {1, 2}}), {1, 1}) == QVec{Rational(1, 2), Rational(1, 2)});
  CHECK(weight(d, {1, 1}) == Rational(1, 2));
  CHECK(weight(d, {0, 1}) == Rational(1, 3));
  CHECK(weight(d, {0, 0}) == 0);
  // table of the six points of Delta^-
  CHECK(weight(d, {1, 0}) == Rational(1, 2));
  CHECK(weight(d, {0, 2}) == Rational(2, 3));
  CHECK(weight(d, {1, 2}) == Rational(2, 3));
  auto s = P({{1, 0}, {1, 2}});
  CHECK_THROWS_AS(weight(s, {0, 1}), Error);
}

TEST_CASE("invariants of the generator matrix") {
  auto d = P({{2, 0}, {0, 3}});
  CHECK(d.vol == 6);
  CHECK(d.D == 6);
  CHECK(P({{1, 0}, {1, 2}}).D == 2);
  CHECK(P({{3, 0, 0}, {0, 3, 0}, {0, 0, 3}}).D == 3);
  CHECK_THROWS_AS(P({{1, 0}, {0, 0}}), Error);
  CHECK_THROWS_AS(P({{1, 0}, {2, 0}}), Error);
  CHECK_THROWS_AS(P({{-1, 0}, {0, 1}}), Error);
}

TEST_CASE("enumeration examples") {
  auto d = P({{2, 0}, {0, 3}});
  auto open1 = enumerate(d, 1, Side::Open);
  REQUIRE(open1.size() == 6);
  std::vector<IVec> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {1, 2}};
  for (size_t i = 0; i < 6; ++i) CHECK(open1[i].Q == want[i]);
  CHECK(enumerate(d, 1, Side::Closed).size() == 12);
  auto line = enumerate(P({{2}}), 3, Side::Open);
  REQUIRE(line.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(line[i].Q == IVec{i});
  CHECK(enumerate(d, 0, Side::Open).size() == 1);
  CHECK(enumerate(d, 0, Side::Closed).size() == 1);
}

TEST_CASE("closed-form counts") {
  auto d = P({{2, 0}, {0, 3}});
  CHECK(count_closed_form(d, 1) == std::pair<long, long>{6, 12});
  CHECK(count_closed_form(P({{2}}), 3) == std::pair<long, long>{6, 7});
  CHECK(count_closed_form(d, 2).first == 24);
  CHECK(count_closed_form(d, 2).second == 35);
  for (auto& v : test_polytopes()) {
    auto q = P(v);
    for (long k = 1; k <= 6; ++k) {
      auto [m, p] = count_closed_form(q, k);
      CHECK(m == (long)enumerate(q, k, Side::Open).size());
      CHECK(p == (long)enumerate(q, k, Side::Closed).size());
    }
  }
}

TEST_CASE("residue and eta") {
  auto d = P({{2, 0}, {0, 3}});
  CHECK(residue(d, {3, 4}) == IVec{1, 1});
  CHECK(residue(d, {0, 0}) == IVec{0, 0});
  CHECK(residue(d, {2, 3}) == IVec{0, 0});
  CHECK(eta(d, 29, {0, 1}) == IVec{0, 2});
  CHECK(eta(d, 29, {1, 1}) == IVec{1, 2});
  CHECK(eta(d, 29, {0, 0}) == IVec{0, 0});
  CHECK_THROWS_AS(eta(d, 29, {2, 0}), Error);
}

TEST_CASE("delta minus I") {
  auto d = P({{2, 0}, {0, 3}});
  auto a = delta_minus_I(d, {0, 1});
  REQUIRE(a.size() == 1);
  CHECK(a[0].Q == IVec{0, 0});
  // I = {1} in one-based terms
  auto b = delta_minus_I(d, {0});
  REQUIRE(b.size() == 2);
  CHECK(b[0].Q == IVec{0, 1});
  CHECK(b[1].Q == IVec{0, 2});
  auto c = delta_minus_I(d, {});
  REQUIRE(c.size() == 2);
  CHECK(c[0].Q == IVec{1, 1});
  CHECK(c[1].Q == IVec{1, 2});
}

static const BlockDecomposition* find_block(const std::vector<BlockDecomposition>& bs, IVec P0, std::vector<int> I,
                                            std::vector<std::vector<int>> ch) {
  for (auto& b : bs)
    if (b.P0 == P0 && b.I == I && b.chain == ch) return &b;
  return nullptr;
}

TEST_CASE("block decomposition of the cube") {
  auto d = P({{3, 0, 0}, {0, 3, 0}, {0, 0, 3}});
  auto open = block_decomposition(d, 3, Side::Open);
  auto b = find_block(open, {1, 0, 0}, {1}, {{0}, {2}});
  REQUIRE(b);
  REQUIRE(b->members.size() == 3);
  std::set<IVec> got;
  for (auto& m : b->members) got.insert(m.Q);
  CHECK(got == std::set<IVec>{{1, 0, 3}, {1, 0, 6}, {4, 0, 6}});
  CHECK(b->Qmin.Q == IVec{1, 0, 3});
  CHECK(b->K == 1);
  auto closed = block_decomposition(d, 3, Side::Closed);
  auto bc = find_block(closed, {1, 0, 0}, {1}, {{0}, {2}});
  REQUIRE(bc);
  CHECK(bc->members.size() == 6);
  CHECK(bc->K == 2);
  auto b2 = find_block(open, {1, 0, 0}, {1}, {{2}, {0}});
  REQUIRE(b2);
  got.clear();
  for (auto& m : b2->members) got.insert(m.Q);
  CHECK(got == std::set<IVec>{{4, 0, 3}, {7, 0, 3}, {7, 0, 6}});
  CHECK(b2->Qmin.Q == IVec{4, 0, 3});
  CHECK(b2->K == 1);
}

TEST_CASE("lattice properties on every test polytope") {
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    CAPTURE(d.str());
    auto pts = enumerate(d, 3, Side::Closed);
    // subadditivity up to weight 3
    for (size_t i = 0; i < pts.size(); i += 3)
      for (size_t j = 0; j < pts.size(); j += 5) {
        IVec s = add(pts[i].Q, pts[j].Q);
        CHECK(weight(d, s) <= pts[i].w + pts[j].w);
      }
    // residue idempotent; eta bijective on Delta^-
    auto fund = enumerate(d, 1, Side::Open);
    CHECK((long)fund.size() == d.vol);
    for (long p : {11L, 13L, 29L}) {
      std::set<IVec> img;
      for (auto& q : fund) img.insert(eta(d, p, q.Q));
      std::set<IVec> dom;
      for (auto& q : fund) dom.insert(q.Q);
      CHECK(img == dom);
    }
    bool exact = false;
    auto two = enumerate(d, 2, Side::Closed);
    for (auto& q : two) {
      CHECK(residue(d, residue(d, q.Q)) == residue(d, q.Q));
      long lcm = 1;
      for (auto& z : q.z) {
        CHECK((z * Rational(d.D)).str().find('/') == std::string::npos);
        lcm = std::lcm(lcm, to_long(den(z)));
      }
      exact = exact || lcm == d.D;
    }
    CHECK(exact);
    // blocks partition the dilates
    for (Side side : {Side::Open, Side::Closed})
      for (long k = 1; k <= 3; ++k) {
        auto blocks = block_decomposition(d, k, side);
        std::multiset<IVec> all;
        for (auto& b : blocks)
          for (auto& m : b.members) all.insert(m.Q);
        std::multiset<IVec> want;
        for (auto& q : enumerate(d, k, side)) want.insert(q.Q);
        CHECK(all == want);
      }
  }
}

TEST_CASE("degree vectors add along a shared chain") {
  std::mt19937_64 rng(5);
  for (auto& v : test_polytopes()) {
    auto d = P(v);
    auto pts = enumerate(d, 3, Side::Closed);
    for (int it = 0; it < 200; ++it) {
      auto& a = pts[rng() % pts.size()];
      auto& b = pts[rng() % pts.size()];
      if (chain_of(a.z) != chain_of(b.z)) continue;
      IVec s = add(a.Q, b.Q);
      auto sp = make_point(d, s);
      QVec sum(d.n);
      for (int i = 0; i < d.n; ++i) sum[i] = a.deg[i] + b.deg[i];
      CHECK(sp.deg == sum);
    }
  }
}
