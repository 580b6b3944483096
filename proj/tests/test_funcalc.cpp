#include "curvecalc/cauchy.hpp"
#include "curvecalc/funcalc.hpp"

#include <doctest.h>

#include <random>

using namespace curvecalc;

namespace {

Vec vec2(cplx a, cplx b) {
    Vec v(2);
    v << a, b;
    return v;
}

Mat diag(std::initializer_list<cplx> d) {
    Mat M = Mat::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (cplx x : d) M(i, i) = x, ++i;
    return M;
}

/// Random diagonalizable matrix with positive spectrum in [lo, hi].
Mat positive_matrix(std::mt19937_64& rng, int d, double lo, double hi) {
    std::uniform_real_distribution<double> U(lo, hi);
    std::normal_distribution<double> N;
    Mat V(d, d), D = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        D(i, i) = U(rng);
        for (int j = 0; j < d; ++j) V(i, j) = (i == j ? 2.0 : 0.0) + 0.3 * cplx(N(rng), N(rng));
    }
    return V * D * V.inverse();
}

}  // namespace

TEST_CASE("constants and atoms") {
    Mat A{{2, 1}, {0, 3}};
    CalculusContext ctx(LinearRelation::from_matrix(A));
    Vec u = vec2(1, {0, 1});
    auto sys = single_curve_system(make_curve({{-1, 5}, {1, 5}}));
    CHECK((evaluate(ctx, constant_form({2, -1}, sys), u) - cplx(2, -1) * u).norm() < 1e-15);

    NormalForm nf;
    nf.carrier = sys;
    CurveMeasure m(sys);
    m.atoms.push_back({0, 1.0, 1.0});
    nf.terms = {{1, m}};
    nf.degree = 1;
    const cplx w0 = sys->point(0, 1.0);
    Vec want = (w0 * Mat::Identity(2, 2) - A).inverse() * u;
    CHECK((evaluate(ctx, nf, u) - want).norm() < 1e-14);
}

TEST_CASE("scalar consistency") {
    const cplx a(0.7, 0.4);
    CalculusContext ctx(LinearRelation::from_matrix(Mat{{a}}));
    Vec u = Vec::Ones(1);
    for (const NormalForm& nf : {principal_power(0.5), principal_log(), principal_power(cplx(0.3, 0.2))}) {
        cplx f = nf.eval(a);
        CHECK(std::abs(evaluate(ctx, nf, u)[0] - f) < 1e-8 * (1 + std::abs(f)));
    }
}

TEST_CASE("oracle") {
    Vec u = vec2(1, 2);
    Vec r = oracle(diag({4, 9}), [](cplx z) { return std::sqrt(z); }, u);
    CHECK((r - vec2(2, 6)).norm() < 1e-14);
    Mat A{{2, 1}, {0, 3}};
    CHECK((oracle(A, [](cplx z) { return z; }, u) - A * u).norm() < 1e-13);

    std::mt19937_64 rng(5);
    Mat B = positive_matrix(rng, 4, 0.5, 4.0);
    Mat S(4, 4);
    for (int j = 0; j < 4; ++j) S.col(j) = oracle(B, [](cplx z) { return std::sqrt(z); }, Vec::Unit(4, j));
    CHECK((S * S - B).norm() < 1e-9 * B.norm());
}

TEST_CASE("principal square root of diag(4, 9)") {
    CalculusContext ctx(LinearRelation::from_matrix(diag({4, 9})));
    Vec e = vec2(1, 1);
    CHECK((evaluate(ctx, principal_power(0.5), e) - vec2(2, 3)).norm() < 1e-6);
    CHECK((principal_power_op(ctx, 0.5, e) - vec2(2, 3)).norm() < 1e-6);
    CHECK((principal_power_op(ctx, 0.0, e) - e).norm() < 1e-15);
}

TEST_CASE("products") {
    std::mt19937_64 rng(6);
    Mat A = positive_matrix(rng, 3, 0.5, 3.0);
    CalculusContext ctx(LinearRelation::from_matrix(A));
    Vec u = Vec::Ones(3);
    NormalForm s = principal_power(0.5);
    auto one = multiply_check(ctx, s, constant_form(1.0, s.carrier, s.chart), u);
    CHECK(one.discrepancy < 1e-12);
    auto sq = multiply_check(ctx, s, s, u);
    CHECK((sq.sequential - A * u).norm() < 1e-6 * (A * u).norm());
}

TEST_CASE("locality on a closed boundary") {
    auto sq = make_curve({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}});
    NormalForm nf = boundary_form(sq, {1.0, -0.5}, true, 1);
    Vec u = vec2(1, {0, 1});
    CalculusContext outside(LinearRelation::from_matrix(Mat{{3, 1}, {0, cplx(-1, 2)}}));
    auto rep = locality_check(outside, nf, u);
    CHECK(rep.norm <= 1e-6 * rep.u_norm);
    CalculusContext inside(LinearRelation::from_matrix(Mat{{0.5, 0.1}, {0, cplx(0.4, 0.6)}}));
    CHECK(locality_check(inside, nf, u).norm > 1e-2);
    NormalForm zero = constant_form(0.0, nf.carrier);
    CHECK(locality_check(outside, zero, u).norm == 0.0);
}

TEST_CASE("curve logarithm of an operator") {
    auto c = make_curve({{-1, 0}, {0, 0.5}, {1, 0}});
    const cplx a(0.3, -0.9);
    CalculusContext ctx(LinearRelation::from_matrix(Mat{{a}}));
    Vec u = Vec::Ones(1);
    CHECK(std::abs(curve_log_op(ctx, c, u)[0] - curve_log(c, a)) < 1e-7);

    Mat A{{a, 0.2}, {0, cplx(-0.4, 1.2)}};
    CalculusContext ctx2(LinearRelation::from_matrix(A));
    Vec v = vec2(1, -1);
    Vec twice = curve_log_op(ctx2, c, curve_log_op(ctx2, c, v));
    CHECK((twice - evaluate(ctx2, curve_log_power(c, 2), v)).norm() < 1e-6 * twice.norm());
}

TEST_CASE("power growth on the domain path") {
    Vec u = Vec::Ones(1);
    CalculusContext id(LinearRelation::from_matrix(Mat::Identity(1, 1)));
    CHECK(power_domain(id, 0.5, 0.1, u).bound == 0.0);
    CalculusContext four(LinearRelation::from_matrix(Mat{{4.0}}));
    auto g = power_domain(four, 0.5, 0.1, u);
    CHECK(g.finite());
    CalculusContext neg(LinearRelation::from_matrix(Mat{{-1.0}}));
    CHECK_FALSE(power_domain(neg, 0.5, 0.1, u).finite());
}

TEST_CASE("continuation in s") {
    const double a = 2.5;
    CalculusContext ctx(LinearRelation::from_matrix(Mat{{a}}));
    Vec u = Vec::Ones(1);
    for (double s : {-1.0, -0.5, 0.0, 0.6}) {
        cplx want = std::sqrt((1 + s) / 2 + (1 - s) * a / 2);
        CHECK(std::abs(u_s_continuation(ctx, 0.5, s, u)[0] - want) < 1e-6);
    }
    CHECK(std::abs(u_s_continuation(ctx, 0.5, 1.0, u)[0] - cplx(1.0)) < 1e-15);
    CHECK((u_s_continuation(ctx, 0.5, -1.0, u) - principal_power_op(ctx, 0.5, u)).norm() == 0.0);
}

TEST_CASE("local one-parameter group of curve powers") {
    auto c = make_curve({{-1, 0}, {0, 0.4}, {1, 0}});
    Mat A{{cplx(0.2, -0.8), 0.3}, {0, cplx(-0.3, 1.1)}};
    CalculusContext ctx(LinearRelation::from_matrix(A));
    Vec u = vec2(1, {0.5, 1});
    CHECK(local_group_check(ctx, c, 0.3, 0.0, u).discrepancy < 1e-12);
    CHECK(local_group_check(ctx, c, 0.4, 0.4, u).discrepancy < 1e-6);
    auto inv = local_group_check(ctx, c, 0.3, -0.3, u);
    CHECK((inv.product - u).norm() < 1e-6 * u.norm());
}

TEST_CASE("evaluation reports the failing node") {
    CalculusContext ctx(LinearRelation::from_matrix(diag({-1, 4})));
    ctx.domain_policy = true;
    try {
        evaluate(ctx, principal_log(), vec2(1, 1));
        FAIL("expected a resolvent failure");
    } catch (const ResolventFailure& e) {
        // -1 maps to 1/2 under the principal chart
        CHECK(std::abs(e.node() - cplx(0.5)) < 1e-9);
    }
}
