#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ergopt/observable.hpp"
#include "ergopt/orbits.hpp"
#include "ergopt/rng.hpp"

using namespace ergopt;

namespace {
Observable cos1() { return Observable::trig({{1, 1.0, 0.0}}); }
}

TEST_CASE("trig evaluation") {
  auto sys = ExpandingSystem::circle_map(2);
  CHECK(cos1()(sys, Point::circle(0.0)) == doctest::Approx(1.0));
  CHECK(cos1()(sys, Point::circle(0.25)) == doctest::Approx(0.0).epsilon(1e-12));
  Observable f = Observable::trig({{1, 0.5, -0.25}, {3, 0.0, 1.0}});
  double x = 0.17;
  double expect = 0.5 * std::cos(2 * M_PI * x) - 0.25 * std::sin(2 * M_PI * x) +
                  std::sin(6 * M_PI * x);
  CHECK(f(sys, Point::circle(x)) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("cylinder table lookup") {
  auto sys = ExpandingSystem::full_shift(2, 0.5, 10);
  Observable f = Observable::cylinder(sys, 1, {2.0, -1.0});
  CHECK(f(sys, Point::word({0, 1, 1})) == 2.0);
  CHECK(f(sys, Point::word({1, 0, 0})) == -1.0);
  // lipschitz certificate per the table formula: gap / base^depth
  CHECK(f.lipschitz_bound() == doctest::Approx(3.0 / 0.5));
}

TEST_CASE("piecewise linear evaluation and bounds") {
  auto sys = ExpandingSystem::circle_map(2);
  Observable f = Observable::piecewise_linear({0.0, 0.25, 0.5, 0.75}, {1.0, 0.0, -1.0, 0.0});
  CHECK(f(sys, Point::circle(0.0)) == doctest::Approx(1.0));
  CHECK(f(sys, Point::circle(0.125)) == doctest::Approx(0.5));
  CHECK(f(sys, Point::circle(0.875)) == doctest::Approx(0.5));  // wraparound segment
  CHECK(f.lipschitz_bound() == doctest::Approx(4.0));
  CHECK(f.sup_bound() == doctest::Approx(1.0));
}

TEST_CASE("birkhoff averages over orbits") {
  auto sys = ExpandingSystem::circle_map(2);
  auto fixed = make_verified_orbit(sys, Point::circle(0.0), 1);
  CHECK(birkhoff_average(sys, cos1(), fixed) == doctest::Approx(1.0));
  auto two = make_verified_orbit(sys, Point::circle(1.0 / 3.0), 2);
  CHECK(birkhoff_average(sys, cos1(), two) == doctest::Approx(-0.5).epsilon(1e-12));
  Observable c = Observable::constant(3.25);
  CHECK(birkhoff_average(sys, c, two) == doctest::Approx(3.25));
  // invariant under cyclic rotation of the listing
  std::vector<Point> rotated = {two.points[1], two.points[0]};
  CHECK(birkhoff_average(sys, cos1(), rotated) ==
        doctest::Approx(birkhoff_average(sys, cos1(), two.points)));
  PeriodicOrbit unverified;
  unverified.points = two.points;
  unverified.period = 2;
  CHECK_THROWS_AS(birkhoff_average(sys, cos1(), unverified), ValidationError);
}

TEST_CASE("lipschitz certificates hold on random pairs") {
  auto sys = ExpandingSystem::circle_map(2);
  Rng rng(99);
  std::vector<Observable> fs = {
      Observable::trig({{1, 0.3, 0.7}, {2, -0.4, 0.0}, {5, 0.1, -0.2}}),
      Observable::piecewise_linear({0.0, 0.3, 0.6}, {0.2, -1.0, 0.7}),
      Observable::sum({cos1(), Observable::constant(-0.5)}),
      Observable::scale(-2.5, cos1()),
      Observable::dist_to_set(sys, {Point::circle(0.0), Point::circle(1.0 / 3.0)}, 1),
      Observable::dist_to_set(sys, {Point::circle(0.25)}, 2),
  };
  for (const auto& f : fs) {
    double lip = f.lipschitz_bound();
    double sup = f.sup_bound();
    for (int t = 0; t < 10000; ++t) {
      Point x = Point::circle(rng.uniform());
      Point y = Point::circle(rng.uniform());
      double dfx = f(sys, x), dfy = f(sys, y);
      CHECK(std::fabs(dfx - dfy) <= lip * sys.metric(x, y) + 1e-10);
      CHECK(std::fabs(dfx) <= sup + 1e-12);
    }
  }
}

TEST_CASE("linearity of composites") {
  auto sys = ExpandingSystem::circle_map(2);
  Observable f = cos1();
  Observable g = Observable::trig({{2, 0.0, 1.0}});
  Observable combo = Observable::sum({Observable::scale(2.0, f), Observable::scale(-3.0, g)});
  Rng rng(5);
  for (int t = 0; t < 1000; ++t) {
    Point x = Point::circle(rng.uniform());
    CHECK(combo(sys, x) ==
          doctest::Approx(2.0 * f(sys, x) - 3.0 * g(sys, x)).epsilon(1e-12));
  }
}

TEST_CASE("distance to a finite set is the exact pointwise minimum") {
  auto sys = ExpandingSystem::circle_map(2);
  std::vector<Point> set = {Point::circle(0.1), Point::circle(0.6)};
  Observable d = Observable::dist_to_set(sys, set, 1);
  CHECK(d(sys, Point::circle(0.1)) == 0.0);
  CHECK(d(sys, Point::circle(0.35)) == doctest::Approx(0.25));
  CHECK(d(sys, Point::circle(0.9)) == doctest::Approx(0.2));  // wraps to 0.1
  CHECK(d.lipschitz_bound() == 1.0);
}

TEST_CASE("composition with the map carries the Lipschitz factor") {
  auto sys = ExpandingSystem::circle_map(2);
  Observable f = cos1();
  Observable ft = Observable::composed_with_map(sys, f, 1);
  CHECK(ft(sys, Point::circle(0.3)) == doctest::Approx(std::cos(2 * M_PI * 0.6)));
  CHECK(ft.lipschitz_bound() == doctest::Approx(2.0 * f.lipschitz_bound()));
}
