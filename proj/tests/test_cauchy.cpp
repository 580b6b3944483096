#include "curvecalc/cauchy.hpp"

#include <doctest.h>

#include <cmath>

using namespace curvecalc;

namespace {

const LipschitzCurve& unit_segment() {
    static const LipschitzCurve c = make_curve({{-1, 0}, {1, 0}});
    return c;
}

Terms density_terms(Density d, int k = 1) {
    CurveMeasure mu(single_curve_system(unit_segment()));
    mu.densities.emplace_back(0, std::move(d));
    return {{k, mu}};
}

}  // namespace

TEST_CASE("curve logarithm") {
    const auto& c = unit_segment();
    CHECK(std::abs(curve_log(c, kI) - cplx(0, kPi / 2)) < 1e-14);
    CHECK(std::abs(curve_log(c, cplx(1e8, 3e8))) < 1e-7);
    CHECK(std::abs(curve_log(c, cplx(0, 1e-6)) - cplx(0, kPi)) < 1e-5);
    CHECK(std::abs(curve_log(c, cplx(0, -1e-6)) - cplx(0, -kPi)) < 1e-5);
    CHECK_THROWS_AS(curve_log(c, 0.2), OnCurve);
}

TEST_CASE("curve logarithm on a polyline agrees with the segment sum") {
    auto c = make_curve({{0, 0}, {1, 0.5}, {2, -0.2}});
    cplx z(0.7, -1.1);
    cplx direct = std::log((c.end() - z) / (c.start() - z));
    // the branch vanishing at infinity differs from the principal one by a multiple of 2 pi i
    cplx d = curve_log(c, z) - direct;
    CHECK(std::abs(d.real()) < 1e-14);
    CHECK(std::abs(std::remainder(d.imag(), 2 * kPi)) < 1e-13);
}

TEST_CASE("principal values on the curve") {
    const auto& c = unit_segment();
    CHECK(std::abs(curve_log_pv(c, 1.0)) < 1e-15);
    CHECK(std::abs(curve_log_pv(c, 1.5) - cplx(-std::log(3.0))) < 1e-14);
    const double e = 1e-7;
    cplx avg = 0.5 * (curve_log(c, cplx(0.5, e)) + curve_log(c, cplx(0.5, -e)));
    CHECK(std::abs(curve_log_pv(c, 1.5) - avg) < 1e-6);
    CHECK_THROWS_AS(curve_log_pv(c, 0.0), EndpointParameter);
}

TEST_CASE("evaluation of a single atom") {
    CurveMeasure mu(single_curve_system(unit_segment()));
    mu.atoms.push_back({0, 1.0, 1.0});
    CHECK(std::abs(eval({{1, mu}}, 2.0) - cplx(-0.5)) < 1e-15);
    CHECK_THROWS_AS(eval({{1, mu}}, 0.0), OnCurve);
}

TEST_CASE("evaluation is bounded by variation over distance") {
    auto t = density_terms(Density::polynomial({{1, 0}, {0, 1}, {-0.5, 0}}));
    const double tv = total_variation(t[0].mu);
    for (cplx z : {cplx(0.1, 0.05), cplx(2, 1), cplx(-1.2, -0.01), cplx(0, 3)}) {
        double dist = t[0].mu.sys->distance(z);
        CHECK(std::abs(eval(t, z)) <= tv / dist * (1 + 1e-12));
    }
}

TEST_CASE("power of a Moebius quotient as a Cauchy integral") {
    const double a = 1.0 / 3.0;
    Density d;
    // (1 - x) / (1 + x) with x = t - 1, written in endpoint distances
    d.fn = [a](double t, double tc) { return cplx(std::sin(a * kPi) / kPi * std::pow(tc / t, a)); };
    d.sing_lo = true;
    d.sing_hi = true;
    auto t = density_terms(d);
    cplx z(0, 2);
    cplx want = std::pow((z - 1.0) / (z + 1.0), a);
    CHECK(std::abs(1.0 + eval(t, z) - want) < 1e-6);
}

TEST_CASE("boundary values and jumps") {
    auto t = density_terms(Density::constant(1.0 / (2.0 * kPi * kI)));
    auto p = boundary_value(t, 0, 1.0, Side::Left);
    auto m = boundary_value(t, 0, 1.0, Side::Right);
    CHECK(std::abs(p.value - m.value - cplx(1.0)) < 1e-6);
    // principal value is the average of both sides
    cplx pv = 1.0 / (2.0 * kPi * kI) * curve_log_pv(unit_segment(), 1.0);
    CHECK(std::abs(0.5 * (p.value + m.value) - pv) < 1e-6);

    CHECK(std::abs(jump_density(density_terms(Density::constant(1.0)), 0, 0.6).value - cplx(1.0)) < 1e-3);
    auto lin = density_terms(Density::polynomial({{-1, 0}, {1, 0}}));  // t - 1, i.e. x on [-1, 1]
    CHECK(std::abs(jump_density(lin, 0, 1.5).value - cplx(0.5)) < 1e-3);

    CurveMeasure atom(single_curve_system(unit_segment()));
    atom.atoms.push_back({0, 0.4, 1.0});
    CHECK(std::abs(jump_density({{1, atom}}, 0, 1.5).value) < 1e-3);
}

TEST_CASE("jumps need a Hoelder density") {
    auto t = density_terms(Density::table({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0}, false));
    CHECK_THROWS_AS(jump_density(t, 0, 0.5), NonHoelderDensity);
}

TEST_CASE("atom limits") {
    auto sys = single_curve_system(unit_segment());
    for (cplx w : {cplx(2.0), cplx(1, 1)}) {
        CurveMeasure mu(sys);
        mu.atoms.push_back({0, 1.0, w});
        mu.densities.emplace_back(0, Density::constant(0.3));
        auto lim = atom_limit({{1, mu}}, 0, 1.0, {0.3, 1.0});
        CHECK(std::abs(lim.value - w) < 1e-2);
    }
    auto smooth = density_terms(Density::polynomial({{1, 0}, {0.5, 0}}));
    CHECK(std::abs(atom_limit(smooth, 0, 1.0, kI).value) < 1e-2);
    CHECK_THROWS_AS(atom_limit(smooth, 0, 1.0, 0.0), ZeroDirection);
    CHECK_THROWS_AS(atom_limit(smooth, 0, 1.0, 1.0), SectorViolation);
}

TEST_CASE("extrapolation recovers a log-type limit") {
    std::vector<double> eps;
    std::vector<cplx> g;
    for (int k = 0; k < 14; ++k) {
        double e = 0.1 * std::pow(0.5, k);
        eps.push_back(e);
        g.push_back(cplx(2.0, -1.0) + 0.7 * e + 0.2 * e * std::log(e) - 0.4 * e * e);
    }
    auto lim = extrapolate_to_zero(eps, g);
    CHECK(std::abs(lim.value - cplx(2.0, -1.0)) < 1e-9);
}
