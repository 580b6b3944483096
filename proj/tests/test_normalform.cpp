#include "curvecalc/cauchy.hpp"
#include "curvecalc/normalform.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace curvecalc;

namespace {

LipschitzCurve square() { return make_curve({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}); }

NormalForm sample_form(const CurveSystemPtr& sys) {
    NormalForm nf;
    nf.carrier = sys;
    nf.constant = {0.5, -0.25};
    CurveMeasure m1(sys), m2(sys);
    m1.atoms.push_back({0, 0.3, {1, 0.5}});
    m1.atoms.push_back({0, 1.7, {-0.4, 0.2}});
    m2.densities.emplace_back(0, Density::polynomial({{0.3, 0}, {0, 0.7}}));
    nf.terms = {{1, m1}, {2, m2}};
    nf.degree = 2;
    return nf;
}

std::vector<cplx> test_points(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    std::vector<cplx> zs;
    while (static_cast<int>(zs.size()) < n) {
        cplx z(U(rng), U(rng));
        if (std::abs(z.imag()) > 0.8) zs.push_back(z);
    }
    return zs;
}

}  // namespace

TEST_CASE("to_simple preserves the function") {
    auto sys = single_curve_system(make_curve({{-1, 0}, {0, 0.4}, {1, 0}}));
    NormalForm nf = sample_form(sys);
    SimpleNormalForm s = to_simple(nf, {{0, 0.2}});
    NormalForm back = s.to_normal_form();
    for (cplx z : test_points(10, 3)) CHECK(std::abs(back.eval(z) - nf.eval(z)) < 1e-8 * (1 + std::abs(nf.eval(z))));
}

TEST_CASE("to_simple of two level-one atoms") {
    auto sys = single_curve_system(make_curve({{0, 0}, {2, 0}}));
    NormalForm nf;
    nf.carrier = sys;
    CurveMeasure m(sys);
    m.atoms.push_back({0, 0.5, 2.0});
    m.atoms.push_back({0, 1.5, {0, 1}});
    nf.terms = {{1, m}};
    nf.degree = 1;
    SimpleNormalForm s = to_simple(nf, {{0, 1.0}});
    REQUIRE(s.top == 2);
    REQUIRE(s.coeffs.size() == 1);
    CHECK(std::abs(s.coeffs[0][0] - cplx(2, 1)) < 1e-14);
    CHECK_FALSE(s.measure.densities.empty());
}

TEST_CASE("transport into another chart") {
    auto sys = single_curve_system(make_curve({{-1, 0}, {0, 0.4}, {1, 0}}));
    NormalForm nf = sample_form(sys);
    SUBCASE("identity") {
        NormalForm t = transport(nf, Moebius::identity());
        for (cplx z : test_points(5, 5)) CHECK(std::abs(t.eval(z) - nf.eval(z)) < 1e-12);
    }
    SUBCASE("inversion about a point off the curve and back") {
        const cplx p(0.2, -2.0);
        Moebius h(0.0, 1.0, -1.0, p);  // z -> 1/(p - z)
        NormalForm t = transport(nf, h);
        for (cplx z : test_points(10, 7)) {
            if (std::abs(z - p) < 0.3) continue;
            CHECK(std::abs(t.eval(z) - nf.eval(z)) < 1e-8 * (1 + std::abs(nf.eval(z))));
        }
        NormalForm rt = transport(t, Moebius::identity());
        for (cplx z : test_points(5, 9)) CHECK(std::abs(rt.eval(z) - nf.eval(z)) < 1e-9 * (1 + std::abs(nf.eval(z))));
    }
}

TEST_CASE("multiply by the constant one") {
    auto sys = single_curve_system(make_curve({{-1, 0}, {0, 0.4}, {1, 0}}));
    NormalForm nf = sample_form(sys);
    NormalForm p = multiply(nf, constant_form(1.0, sys));
    for (cplx z : test_points(5, 11)) CHECK(std::abs(p.eval(z) - nf.eval(z)) < 1e-12);
}

TEST_CASE("product of two resolvent atoms") {
    auto sys = single_curve_system(make_curve({{0, 0}, {1, 0}}));
    NormalForm f, g;
    f.carrier = g.carrier = sys;
    CurveMeasure a(sys), b(sys);
    a.atoms.push_back({0, 0.0, 1.0});
    b.atoms.push_back({0, 1.0, 1.0});
    f.terms = {{1, a}};
    g.terms = {{1, b}};
    f.degree = g.degree = 1;
    NormalForm p = multiply(f, g);
    CHECK(p.degree <= 2);
    CHECK(std::abs(p.eval(2.0) - cplx(0.5)) < 1e-12);
}

TEST_CASE("named functions") {
    CHECK(std::abs(principal_power(0.5).eval(4.0) - cplx(2.0)) < 1e-6);
    CHECK(std::abs(principal_power(0.5).eval({-4.0, 1e-3}) - std::sqrt(cplx(-4.0, 1e-3))) < 1e-6);
    CHECK(std::abs(principal_log().eval(1.0)) < 1e-8);
    CHECK(std::abs(principal_log().eval({0.3, 2.0}) - std::log(cplx(0.3, 2.0))) < 1e-8);
    CHECK_THROWS_AS(principal_power(1.5), AlphaOutOfRange);

    auto seg = make_curve({{-1, 0}, {1, 0}});
    cplx z(0, 2);
    CHECK(std::abs(curve_power(seg, 1.0 / 3.0).eval(z) - std::pow((z - 1.0) / (z + 1.0), 1.0 / 3.0)) < 1e-6);
    cplx lg = curve_log(seg, z);
    for (int n = 1; n <= 3; ++n) CHECK(std::abs(curve_log_power(seg, n).eval(z) - std::pow(lg, n)) < 1e-7 * (1 + std::abs(std::pow(lg, n))));

    NormalForm r = rational({{cplx(0.5, 0.5), 2, cplx(1, -1)}, {cplx(-1, 0), 1, 3.0}}, 0.25);
    cplx w(2, -1);
    cplx want = 0.25 + cplx(1, -1) / std::pow(cplx(0.5, 0.5) - w, 2) + 3.0 / (cplx(-1, 0) - w);
    CHECK(std::abs(r.eval(w) - want) < 1e-12);
}

TEST_CASE("vanishing cycles") {
    auto sq = square();
    CHECK(std::abs(vanishing_cycle_check(sq, {1.0}, 1, 3.0)) < 1e-10);
    CHECK(std::abs(vanishing_cycle_check(sq, {0.0, 1.0}, 2, 3.0)) < 1e-10);
    CHECK(std::abs(vanishing_cycle_check(sq, {0.3, -1.0, 2.0}, 3, {-2.0, 0.4})) < 1e-10);
    CHECK_THROWS_AS(vanishing_cycle_check(sq, {1.0}, 1, {0.5, 0.5}), ZInside);
    CHECK(winding_number(sq, {0.5, 0.5}) == 1);
    CHECK(winding_number(sq, {1.5, 0.5}) == 0);
}

TEST_CASE("vanishing boundary forms only vanish outside") {
    auto sq = square();
    NormalForm nf = boundary_form(sq, {1.0, 0.5}, true, 1);
    CHECK(std::abs(nf.eval({2.5, 0.3})) < 1e-9);
    CHECK(std::abs(nf.eval({0.5, 0.5})) > 1e-2);
}

TEST_CASE("encircling interior poles") {
    auto sq = square();
    const cplx w(0.4, 0.6);
    Terms t = encircle_reduce({{w, {2, -1}}}, sq, 0.5, 1);
    for (cplx z : {cplx(3, 0), cplx(-1, 2), cplx(0.5, -1.5)})
        CHECK(std::abs(eval(t, z) - cplx(2, -1) / (w - z)) < 1e-8);
    CHECK(encircle_reduce({}, sq, 0.5, 1).empty());
    // the pole at the base point carries the total mass
    Terms two = encircle_reduce({{w, 1.0}, {{0.7, 0.2}, {0, 3}}}, sq, 0.5, 2);
    cplx mass(0.0);
    for (const auto& term : two)
        if (term.k == 2)
            for (const auto& a : term.mu.atoms) mass += a.w;
    CHECK(std::abs(mass - cplx(1, 3)) < 1e-14);
}
