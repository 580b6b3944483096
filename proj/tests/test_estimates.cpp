#include "curvecalc/estimates.hpp"

#include <doctest.h>

#include <cmath>

using namespace curvecalc;

TEST_CASE("straightening a step function") {
    auto s = straighten({3, 1, 2}, {1, 1, 1});
    REQUIRE(s.values.size() == 3);
    CHECK(s.values[0] == 3.0);
    CHECK(s.values[1] == 2.0);
    CHECK(s.values[2] == 1.0);
    CHECK(s.support() == doctest::Approx(3.0));
    CHECK(s(0.5) == 3.0);
    CHECK(s(2.5) == 1.0);
    CHECK(s(3.5) == 0.0);

    auto z = straighten({5, 4}, {0, 2});
    CHECK(z.support() == doctest::Approx(2.0));
    CHECK(z(0.1) == 4.0);
}

TEST_CASE("rearrangement inequality") {
    std::vector<std::vector<double>> fs{{1, 3, 2}, {2, 0, 1}};
    std::vector<double> mu{0.5, 1.0, 2.0};
    double lhs = weighted_product_sum(fs, mu);
    double rhs = product_integral({straighten(fs[0], mu), straighten(fs[1], mu)});
    CHECK(lhs <= rhs + 1e-14);
    CHECK_FALSE(monotone_pairing(fs, mu));

    std::vector<std::vector<double>> same{{1, 2, 3}, {0, 1, 5}};
    CHECK(monotone_pairing(same, mu));
    CHECK(weighted_product_sum(same, mu) ==
          doctest::Approx(product_integral({straighten(same[0], mu), straighten(same[1], mu)})));
}

TEST_CASE("brute force over small instances") {
    auto r = brute_force_rearrangement(3);
    CHECK(r.instances > 0);
    CHECK(r.violations == 0);
    CHECK(r.equality_failures == 0);
}

TEST_CASE("segment integrals in closed form") {
    auto seg = make_curve({{0, 0}, {2, 0}});
    const double h = 0.5;
    cplx q(0, h);
    CHECK(inv_dist_sq_integral(seg, q) == doctest::Approx(std::atan(2.0 / h) / h).epsilon(1e-13));
    CHECK(inv_dist_integral(seg, q) == doctest::Approx(std::asinh(2.0 / h)).epsilon(1e-13));
    CHECK(arc_length_in_disc(seg, 1.0, 0.25) == doctest::Approx(0.5));
    CHECK(arc_length_in_disc(seg, {1.0, 1.0}, 0.5) == 0.0);
    CHECK(inv_dist_product_integral(seg, q, q) == doctest::Approx(inv_dist_sq_integral(seg, q)).epsilon(1e-8));
}

TEST_CASE("inequality on the ray from the start point") {
    // straight segment, q = xi off the start: int 1/|x - xi|^2 dx over [0, L] <= 2/|xi|
    auto seg = make_curve({{0, 0}, {10, 0}});
    for (cplx xi : {cplx(-1, 0), cplx(0, 1), cplx(-0.5, 0.5)})
        CHECK(inv_dist_sq_integral(seg, xi) <= 2.0 / std::abs(xi));
}

TEST_CASE("randomized configurations") {
    for (const auto& id : lemma_ids()) {
        if (id == "3.12") continue;  // calibration is slow; the acceptance run covers it
        for (std::uint64_t s = 0; s < 20; ++s) {
            auto r = verify_inequality(id, config_seed(42, s));
            INFO(id << " seed " << s << " lhs " << r.lhs << " rhs " << r.rhs);
            CHECK(r.holds);
        }
    }
    CHECK_THROWS_AS(verify_inequality("9.9", 1), InvalidArgument);
    CHECK(config_seed(1, 2) == config_seed(1, 2));
    CHECK(config_seed(1, 2) != config_seed(1, 3));
}
