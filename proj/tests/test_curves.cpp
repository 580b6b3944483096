#include "curvecalc/curves.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace curvecalc;

TEST_CASE("segment length and bi-Lipschitz constant") {
    auto c = make_curve({{-1, 0}, {1, 0}});
    CHECK(c.length() == doctest::Approx(2.0));
    CHECK(c.c1() == doctest::Approx(1.0));
    CHECK_FALSE(c.closed());
}

TEST_CASE("L-shape has C1 = sqrt(2)/2") {
    auto c = make_curve({{0, 0}, {1, 0}, {1, 1}});
    CHECK(c.length() == doctest::Approx(2.0));
    CHECK(c.c1() == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("crossing polylines are rejected") {
    CHECK_THROWS_AS(make_curve({{0, 0}, {2, 0}, {1, 1}, {1, -1}}), SelfIntersection);
    CHECK_THROWS_AS(make_curve({{0, 0}, {0, 0}, {1, 0}}), DegenerateSegment);
}

TEST_CASE("a turn back that stays off the first segment is a valid curve") {
    // (1,0) -> (0,0.1) never meets [0,1] x {0} away from the shared vertex
    auto c = make_curve({{0, 0}, {1, 0}, {0, 0.1}});
    CHECK(c.num_segments() == 2);
    CHECK(c.c1() > 0.0);
    CHECK(c.c1() < 0.1);
}

TEST_CASE("forward cones") {
    auto seg = forward_cone(make_curve({{-1, 0}, {1, 0}}));
    CHECK(seg.semi_angle == doctest::Approx(0.0));
    CHECK(seg.is_short);

    auto tent = forward_cone(make_curve({{0, 0}, {1, 1}, {2, 0}}));
    CHECK(tent.lo == doctest::Approx(-kPi / 4));
    CHECK(tent.hi == doctest::Approx(kPi / 4));
    CHECK(tent.semi_angle == doctest::Approx(kPi / 4));

    auto steep = forward_cone(make_curve({{0, 0}, {1, 2}, {2, 0}}));
    CHECK(steep.semi_angle == doctest::Approx(std::atan(2.0)));
    CHECK(2.0 * steep.semi_angle > kPi / 2);
}

TEST_CASE("transversal angles") {
    auto seg = make_curve({{-1, 0}, {1, 0}});
    CHECK(transversal_angle(seg, kI) == doctest::Approx(kPi / 2));
    CHECK(transversal_angle(seg, std::polar(1.0, kPi / 4)) == doctest::Approx(kPi / 4));
    CHECK(transversal_angle(make_curve({{0, 0}, {1, 1}, {2, 0}}), kI) == doctest::Approx(kPi / 4));
    CHECK_THROWS_AS(transversal_angle(seg, 0.0), ZeroDirection);
}

TEST_CASE("side of a segment") {
    auto seg = make_curve({{-1, 0}, {1, 0}});
    CHECK(side_of(seg, {0, 0.5}) == Side::Left);
    CHECK(side_of(seg, {0, -0.5}) == Side::Right);
    CHECK(side_of(seg, 0.0) == Side::On);
}

TEST_CASE("chord-length parametrization is 1-Lipschitz and C1-co-Lipschitz") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto c = make_curve({{0, 0}, {1, 0.4}, {2, -0.3}, {3, 0.2}});
    for (int i = 0; i < 2000; ++i) {
        double t1 = U(rng) * c.length(), t2 = U(rng) * c.length();
        double d = std::abs(c.point(t1) - c.point(t2)), dt = std::abs(t1 - t2);
        CHECK(d <= dt * (1.0 + 1e-12) + 1e-15);
        CHECK(d >= c.c1() * dt * (1.0 - 1e-9) - 1e-15);
    }
}

TEST_CASE("closed curves and reversal") {
    auto sq = make_curve({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}});
    CHECK(sq.closed());
    CHECK(sq.length() == doctest::Approx(4.0));
    auto r = make_curve({{0, 0}, {1, 0}, {1, 1}}).reversed();
    CHECK(std::abs(r.start() - cplx(1, 1)) < 1e-15);
    CHECK(std::abs(r.point(0.5) - cplx(1, 0.5)) < 1e-15);
}

TEST_CASE("curve systems: components and disjointness") {
    auto a = make_curve({{0, 0}, {1, 0}});
    auto b = make_curve({{1, 0}, {2, 1}});
    auto far = make_curve({{0, 3}, {1, 3}});
    CurveSystem s({a, b, far});
    CHECK(s.num_components() == 2);
    CHECK(s.component_of(0) == s.component_of(1));
    CHECK(s.component_of(0) != s.component_of(2));
    CHECK(s.distance({0.5, 1.0}) == doctest::Approx(1.0));
    CHECK_THROWS(CurveSystem({a, make_curve({{0.5, -1}, {0.5, 1}})}));
}

TEST_CASE("embedding by a Moebius map") {
    Moebius h(0.0, 1.0, -1.0, 1.0);  // z -> 1/(1 - z)
    CHECK(std::abs(h(0.5) - cplx(2.0)) < 1e-15);
    CHECK(std::abs(h.inverse()(h(cplx(0.3, 0.2))) - cplx(0.3, 0.2)) < 1e-14);
    auto g = Moebius(1.0, 2.0, 0.0, 1.0);
    cplx z(0.2, -0.7);
    CHECK(std::abs(h.compose(g)(z) - h(g(z))) < 1e-14);
    CHECK_THROWS_AS(Moebius(1.0, 2.0, 2.0, 4.0), InvalidArgument);
}
