#include "curvecalc/cauchy.hpp"
#include "curvecalc/measures.hpp"

#include <doctest.h>

#include <cmath>

using namespace curvecalc;

namespace {

CurveSystemPtr segment(cplx a, cplx b) { return single_curve_system(make_curve({a, b})); }

cplx eval_level(const CurveMeasure& mu, int k, cplx z) { return eval(Terms{{k, mu}}, z); }

}  // namespace

TEST_CASE("total variation") {
    auto sys = segment(-1.0, 1.0);
    CurveMeasure a(sys);
    a.atoms.push_back({0, 0.5, {0, 3}});
    CHECK(total_variation(a) == doctest::Approx(3.0));

    CurveMeasure d(sys);
    d.densities.emplace_back(0, Density::constant(1.0));
    CHECK(total_variation(d) == doctest::Approx(2.0));

    CurveMeasure both(segment(0.0, 1.0));
    both.atoms.push_back({0, 0.3, 1.0});
    both.densities.emplace_back(0, Density::constant(-1.0));
    CHECK(total_variation(both) == doctest::Approx(2.0));
}

TEST_CASE("omega measures") {
    auto c = make_curve({{0, 0}, {1, 0}, {1, 1}});
    auto whole = omega_measure(c, 0.0, c.length());
    REQUIRE(whole.densities.size() == 1);
    CHECK(std::abs(whole.densities[0].second(1.0, 1.0) - cplx(-1.0)) < 1e-15);
    CHECK(omega_measure(c, 0.7, 0.7).empty());
    auto fwd = omega_measure(c, 0.2, 1.5), bwd = omega_measure(c, 1.5, 0.2);
    CHECK(std::abs(fwd.densities[0].second(1.0, 1.0) + bwd.densities[0].second(1.0, 1.0)) < 1e-15);
    // total mass of -chi dgamma over [a, b] is gamma(a) - gamma(b)
    CHECK(std::abs(total_mass(fwd) - (c.point(0.2) - c.point(1.5))) < 1e-12);
}

TEST_CASE("xi measures") {
    auto c = make_curve({{0, 0}, {1, 0}, {1, 1}});
    auto deg = xi_measure(c, 0.4, 0.4, 1, 2);
    REQUIRE(deg.atoms.size() == 1);
    CHECK(deg.atoms[0].w == cplx(1.0));

    auto x = xi_measure(c, 0.25, 1.75, 0, 0);
    CHECK(std::abs(total_mass(x) - cplx(1.0)) < 1e-12);
    // the kernel integrates each level to 1 as well
    for (int n1 = 0; n1 <= 2; ++n1)
        for (int n2 = 0; n2 <= 2; ++n2) {
            auto xi = xi_measure(c, 0.25, 1.75, n1, n2);
            CHECK(std::abs(total_mass(xi) - cplx(1.0)) < 1e-10);
            const double ratio = 1.0 / c.c1();
            CHECK(total_variation(xi) <= std::pow(ratio, n1 + n2 + 1) * (1.0 + 1e-9));
        }
}

TEST_CASE("additive reduction identity") {
    auto c = make_curve({{0, 0}, {1, 0.3}, {2, 0}});
    auto sys = single_curve_system(c);
    ChoiceFunction phi(sys);
    const cplx z(5, 5);
    for (int n = 1; n <= 3; ++n) {
        CurveMeasure mu(sys);
        mu.atoms.push_back({0, 1.6, {0.5, -1}});
        mu.densities.emplace_back(0, Density::polynomial({{1, 0}, {0, 0.5}}));
        CurvePoint base{0, 0.3};
        auto r = additive_reduce(mu, n, base, phi);
        cplx lhs = eval_level(mu, n, z);
        cplx rhs = r.c / std::pow(sys->point(0, 0.3) - z, n) + double(n) * eval_level(r.theta, n + 1, z);
        CHECK(std::abs(lhs - rhs) < 1e-11 * std::abs(lhs));
    }
}

TEST_CASE("additive reduction edge cases") {
    auto sys = segment(0.0, 1.0);
    ChoiceFunction phi(sys);
    auto zero = additive_reduce(CurveMeasure(sys), 1, {0, 0.2}, phi);
    CHECK(zero.c == cplx(0.0));
    CHECK(zero.theta.empty());

    CurveMeasure at_base(sys);
    at_base.atoms.push_back({0, 0.2, 1.0});
    auto r = additive_reduce(at_base, 1, {0, 0.2}, phi);
    CHECK(r.c == cplx(1.0));
    CHECK(std::abs(eval_level(r.theta, 2, {3, 1})) < 1e-14);
}

TEST_CASE("multiplicative reduction of two atoms at one point") {
    auto sys = segment(0.0, 1.0);
    ChoiceFunction phi(sys);
    CurveMeasure a(sys);
    a.atoms.push_back({0, 0.5, 1.0});
    auto th = multiplicative_reduce(a, 0, a, 0, phi);
    REQUIRE(th.size() == 2);
    CHECK(th[0].empty());
    REQUIRE(th[1].atoms.size() == 1);
    CHECK(th[1].atoms[0].w == cplx(1.0));
}

TEST_CASE("multiplicative reduction reproduces partial fractions") {
    auto sys = segment(0.0, 1.0);
    ChoiceFunction phi(sys);
    CurveMeasure m1(sys), m2(sys);
    m1.atoms.push_back({0, 0.0, 1.0});
    m2.atoms.push_back({0, 1.0, 1.0});
    auto th = multiplicative_reduce(m1, 0, m2, 0, phi);
    Terms t;
    for (std::size_t k = 0; k < th.size(); ++k)
        if (!th[k].empty()) t.push_back({static_cast<int>(k) + 1, th[k]});
    CHECK(std::abs(eval(t, 2.0) - cplx(0.5)) < 1e-12);
}

TEST_CASE("multiplicative reduction across components") {
    auto sys = std::make_shared<const CurveSystem>(
        std::vector<LipschitzCurve>{make_curve({{0, 0}, {1, 0}}), make_curve({{0, 2}, {1, 2}})});
    ChoiceFunction phi(sys);
    const cplx z(0.4, -1.3);
    for (int n1 = 0; n1 <= 2; ++n1)
        for (int n2 = 0; n2 <= 2; ++n2) {
            CurveMeasure m1(sys), m2(sys);
            m1.atoms.push_back({0, 0.3, {1, 0.5}});
            m2.atoms.push_back({1, 0.6, {-0.3, 1}});
            auto th = multiplicative_reduce(m1, n1, m2, n2, phi);
            // pure partial fractions: atoms only, at the two original points
            for (const auto& m : th) CHECK(m.densities.empty());
            Terms t;
            for (std::size_t k = 0; k < th.size(); ++k)
                if (!th[k].empty()) t.push_back({static_cast<int>(k) + 1, th[k]});
            cplx want = eval_level(m1, n1 + 1, z) * eval_level(m2, n2 + 1, z);
            CHECK(std::abs(eval(t, z) - want) < 1e-12 * std::abs(want));
        }
}

TEST_CASE("multiplicative reduction with densities on one curve") {
    auto c = make_curve({{-1.5, 0}, {-0.7, 0.3}, {0, 0}, {0.8, 0.2}, {1.5, 0}});
    auto sys = single_curve_system(c);
    ChoiceFunction phi(sys);
    CurveMeasure m1(sys), m2(sys);
    m1.densities.emplace_back(0, Density::polynomial({{1, 0}, {0.5, -0.2}}));
    m2.atoms.push_back({0, 0.6, {-0.3, 1}});
    auto th = multiplicative_reduce(m1, 1, m2, 0, phi);
    Terms t;
    for (std::size_t k = 0; k < th.size(); ++k)
        if (!th[k].empty()) t.push_back({static_cast<int>(k) + 1, th[k]});
    const cplx z(0.3, -0.8);
    cplx want = eval_level(m1, 2, z) * eval_level(m2, 1, z);
    CHECK(std::abs(eval(t, z) - want) < 1e-9 * std::abs(want));
}

TEST_CASE("pushforward by a Moebius map") {
    auto sys = segment(0.0, 1.0);
    CurveMeasure mu(sys);
    mu.atoms.push_back({0, 0.25, {2, 1}});
    mu.densities.emplace_back(0, Density::polynomial({{1, 0}, {0, 1}}));
    Moebius h(1.0, 0.0, 1.0, 3.0);

    auto same = pushforward_moebius(mu, Moebius::identity());
    CHECK(same.atoms.size() == 1);
    CHECK(std::abs(total_mass(same) - total_mass(mu)) < 1e-14);

    auto p = pushforward_moebius(mu, h);
    REQUIRE(p.atoms.size() == 1);
    CHECK(p.atoms[0].w == cplx(2, 1));
    CHECK(std::abs(p.sys->point(0, p.atoms[0].t) - h(sys->point(0, 0.25))) < 1e-14);
    CHECK(total_variation(p) == doctest::Approx(total_variation(mu)).epsilon(1e-10));
    CHECK(std::abs(total_mass(p) - total_mass(mu)) < 1e-10);
}
