#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ergopt/dynamics.hpp"
#include "ergopt/rng.hpp"

using namespace ergopt;

TEST_CASE("circle forward iterates") {
  auto sys = ExpandingSystem::circle_map(2);
  CHECK(sys.forward(Point::circle(0.3)).coord() == doctest::Approx(0.6).epsilon(1e-14));
  // period-2 point 1/3 -> 2/3 -> 1/3
  Point x = Point::circle(1.0 / 3.0);
  CHECK(circle_distance(sys.forward(x, 2).coord(), x.coord()) < 1e-10);
  auto tripling = ExpandingSystem::circle_map(3);
  CHECK(tripling.forward(Point::circle(0.5)).coord() == doctest::Approx(0.5));
  CHECK(sys.forward(x, 0).coord() == x.coord());
}

TEST_CASE("circle preimages") {
  auto sys = ExpandingSystem::circle_map(2);
  auto pre = sys.preimages(Point::circle(0.5));
  REQUIRE(pre.size() == 2);
  CHECK(pre[0].point.coord() == doctest::Approx(0.25));
  CHECK(pre[1].point.coord() == doctest::Approx(0.75));
  CHECK(pre[0].branch == 0);
  auto pre0 = sys.preimages(Point::circle(0.0));
  CHECK(pre0[0].point.coord() == doctest::Approx(0.0));
  CHECK(pre0[1].point.coord() == doctest::Approx(0.5));
}

TEST_CASE("shift preimages prepend symbols") {
  auto sys = ExpandingSystem::full_shift(2, 0.5, 10);
  Point w = Point::word({0, 1, 1, 0});
  auto pre = sys.preimages(w);
  REQUIRE(pre.size() == 2);
  CHECK(pre[0].point.symbols() == std::vector<int>{0, 0, 1, 1, 0});
  CHECK(pre[1].point.symbols() == std::vector<int>{1, 0, 1, 1, 0});
  for (const auto& p : pre) CHECK(sys.metric(sys.forward(p.point), w) == 0.0);
}

TEST_CASE("metric wraparound and words") {
  auto sys = ExpandingSystem::circle_map(2);
  CHECK(sys.metric(Point::circle(0.1), Point::circle(0.9)) == doctest::Approx(0.2));
  CHECK(sys.metric(Point::circle(0.4), Point::circle(0.4)) == 0.0);
  auto shift = ExpandingSystem::full_shift(2, 0.5, 10);
  Point a = Point::word({0, 1, 1, 0, 1});
  Point b = Point::word({0, 1, 1, 1, 0});
  CHECK(shift.metric(a, b) == doctest::Approx(0.125));  // first disagreement at index 3
  CHECK(shift.metric(a, a) == 0.0);
}

TEST_CASE("branch contraction and round trip on random samples") {
  auto sys = ExpandingSystem::circle_map(2);
  const double lambda = sys.contraction();
  const double e0 = sys.branch_radius();
  Rng rng(7);
  for (int t = 0; t < 1000; ++t) {
    Point x = Point::circle(rng.uniform());
    // y, z in the ball B(x, e0); each continuous branch over that ball is
    // the one through a preimage of x (global branch indices change across
    // the seam, so anchoring through pull_back is what identifies S_i)
    double dy = rng.uniform(-e0, e0), dz = rng.uniform(-e0, e0);
    Point y = Point::circle(wrap_unit(x.coord() + dy));
    Point z = Point::circle(wrap_unit(x.coord() + dz));
    for (const auto& anchor : sys.preimages(x)) {
      Point sy = sys.pull_back(y, anchor.point);
      Point sz = sys.pull_back(z, anchor.point);
      CHECK(sys.metric(sy, sz) <= lambda * sys.metric(y, z) + 1e-12);
      CHECK(sys.metric(sys.forward(sy), y) <= 1e-12);
      CHECK(sys.metric(sys.forward(sz), z) <= 1e-12);
    }
    for (const auto& p : sys.preimages(x))
      CHECK(sys.metric(sys.forward(p.point), x) <= 1e-12);
  }
}

TEST_CASE("forward lipschitz bound") {
  auto sys = ExpandingSystem::circle_map(2);
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    double x = rng.uniform();
    double y = wrap_unit(x + rng.uniform(-sys.branch_radius(), sys.branch_radius()));
    double lhs = sys.metric(sys.forward(Point::circle(x)), sys.forward(Point::circle(y)));
    CHECK(lhs <= sys.forward_lipschitz() * circle_distance(x, y) + 1e-12);
  }
}

TEST_CASE("preimage counts") {
  for (int m : {2, 3, 5}) {
    auto sys = ExpandingSystem::circle_map(m);
    CHECK(static_cast<int>(sys.preimages(Point::circle(0.37)).size()) == m);
  }
  auto full = ExpandingSystem::full_shift(3, 0.5, 8);
  CHECK(full.preimages(Point::word({2, 0, 1})).size() == 3);
  // golden-mean shift: preimage counts match transition-matrix column sums
  auto sft = ExpandingSystem::subshift({{1, 1}, {1, 0}}, 0.5, 8);
  CHECK(sft.preimages(Point::word({0, 0, 1})).size() == 2);
  CHECK(sft.preimages(Point::word({1, 0, 0})).size() == 1);
}

TEST_CASE("sft rejects reducible matrices and bad words") {
  CHECK_THROWS_AS(ExpandingSystem::subshift({{1, 1}, {0, 1}}, 0.5, 8), ValidationError);
  CHECK_THROWS_AS(ExpandingSystem::subshift({{1, 0}, {0, 1}}, 0.5, 8), ValidationError);
  auto sft = ExpandingSystem::subshift({{1, 1}, {1, 0}}, 0.5, 8);
  CHECK_THROWS_AS(sft.validate(Point::word({1, 1})), ValidationError);
  CHECK_THROWS_AS(sft.validate(Point::word({0, 2})), ValidationError);
  auto sys = ExpandingSystem::circle_map(2);
  CHECK_THROWS_AS(sys.validate(Point::circle(1.5)), ValidationError);
  CHECK_THROWS_AS(sys.forward(Point::circle(-0.25)), ValidationError);
}

TEST_CASE("pull_back inverts forward along a branch") {
  auto sys = ExpandingSystem::circle_map(2);
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    Point through = Point::circle(rng.uniform());
    Point image = sys.forward(through);
    CHECK(sys.metric(sys.pull_back(image, through), through) <= 1e-14);
    // nearby points contract toward the anchor preimage
    Point z = Point::circle(wrap_unit(image.coord() + rng.uniform(-0.05, 0.05)));
    Point w = sys.pull_back(z, through);
    CHECK(sys.metric(w, through) <= 0.5 * sys.metric(z, image) + 1e-14);
    CHECK(sys.metric(sys.forward(w), z) <= 1e-14);
  }
  auto shift = ExpandingSystem::full_shift(2, 0.5, 10);
  Point through = Point::word({1, 0, 0, 1});
  Point z = Point::word({0, 0, 1, 1});
  CHECK(shift.pull_back(z, through).symbols() == std::vector<int>{1, 0, 0, 1, 1});
}

TEST_CASE("truncation is an error, not fabrication") {
  auto shift = ExpandingSystem::full_shift(2, 0.5, 6);
  Point w = Point::word({0, 1});
  CHECK_THROWS_AS(shift.forward(w, 2), TruncationError);
  CHECK(shift.forward(w, 1).symbols() == std::vector<int>{1});
}
