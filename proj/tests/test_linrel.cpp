#include "curvecalc/curves.hpp"
#include "curvecalc/linrel.hpp"

#include <doctest.h>

#include <random>

using namespace curvecalc;

namespace {

Mat random_mat(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> N;
    Mat M(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M(i, j) = cplx(N(rng), N(rng));
    return M;
}

Vec random_vec(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> N;
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = cplx(N(rng), N(rng));
    return v;
}

}  // namespace

TEST_CASE("Moebius action on relations") {
    std::mt19937_64 rng(1);
    Mat M = random_mat(rng, 3);
    auto A = LinearRelation::from_matrix(M);
    CHECK(A.moebius_apply(Moebius::identity()).same_subspace(A));

    Moebius inv(0.0, 1.0, 1.0, 0.0);  // z -> 1/z
    auto B = A.moebius_apply(inv);
    CHECK(B.same_subspace(LinearRelation::from_matrix(M.inverse())));
    CHECK(B.same_subspace(LinearRelation(A.X(), A.Y())));

    Moebius h1(1.0, 2.0, 0.5, 3.0), h2(0.0, 1.0, -1.0, 2.0);
    auto seq = A.moebius_apply(h1).moebius_apply(h2);
    auto once = A.moebius_apply(h2.compose(h1));
    CHECK(seq.same_subspace(once));
}

TEST_CASE("operator test") {
    std::mt19937_64 rng(2);
    CHECK(LinearRelation::from_matrix(random_mat(rng, 2)).is_operator());
    CHECK_FALSE(LinearRelation(Mat::Identity(2, 2), Mat::Zero(2, 2)).is_operator());
    Mat Y{{1, 0}, {0, 0}}, X{{0, 0}, {0, 1}};
    // X c = 0 forces c = (c1, 0), and then Y c = (c1, 0) is a nonzero image of 0
    CHECK_FALSE(LinearRelation(Y, X).is_operator());
}

TEST_CASE("apply") {
    std::mt19937_64 rng(3);
    Mat M = random_mat(rng, 3);
    Vec u = random_vec(rng, 3);
    CHECK((LinearRelation::from_matrix(M).apply(u) - M * u).norm() < 1e-12);

    LinearRelation inf(Mat::Identity(2, 2), Mat::Zero(2, 2));
    CHECK_THROWS_AS(inf.apply(Vec::Ones(2)), NotInDomain);
    CHECK_THROWS_AS(inf.apply(Vec::Zero(2)), MultiValued);
}

TEST_CASE("resolvents") {
    Mat two{{2.0}};
    Vec one = Vec::Ones(1);
    CHECK(std::abs(LinearRelation::from_matrix(two).resolvent_apply(3.0, one)[0] - cplx(1.0)) < 1e-15);

    auto N = LinearRelation::from_matrix(Mat{{0, 1}, {0, 0}});
    Vec e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    CHECK((N.resolvent_apply(1.0, e1) - e1).norm() < 1e-15);
    CHECK((N.resolvent_apply(1.0, e2) - Vec::Ones(2)).norm() < 1e-15);

    auto D = LinearRelation::from_matrix(Mat{{2, 0}, {0, 5}});
    CHECK_THROWS_AS(D.resolvent_apply(2.0, Vec::Ones(2)), ResolventFailure);
}

TEST_CASE("resolvent identity on random relations") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> N;
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 4, r = trial % 2 ? 4 : 5;
        Mat Y(d, r), X(d, r);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < r; ++j) {
                Y(i, j) = cplx(N(rng), N(rng));
                X(i, j) = cplx(N(rng), N(rng));
            }
        LinearRelation A(Y, X);
        Vec u = random_vec(rng, d);
        cplx w1(N(rng) * 3, N(rng) * 3), w2(N(rng) * 3, N(rng) * 3);
        try {
            Vec lhs = A.iterated_resolvent({w1, w2}, u);
            Vec swapped = A.iterated_resolvent({w2, w1}, u);
            Vec rhs = (A.resolvent_apply(w1, u) - A.resolvent_apply(w2, u)) / (w2 - w1);
            CHECK((lhs - rhs).norm() <= 1e-10 * (1 + rhs.norm()));
            CHECK((lhs - swapped).norm() <= 1e-10 * (1 + lhs.norm()));
        } catch (const ResolventFailure&) {
            // w at an eigenvalue of a nongeneric pencil, nothing to compare
        }
    }
    CHECK(LinearRelation::from_matrix(Mat::Identity(2, 2)).iterated_resolvent({}, Vec::Ones(2)) == Vec::Ones(2));
}

TEST_CASE("redundant generators are removed") {
    Mat Y{{1, 2, 3}, {0, 0, 0}}, X{{1, 2, 3}, {1, 2, 3}};
    LinearRelation A(Y, X);
    CHECK(A.rank() == 1);
}

TEST_CASE("domain check") {
    auto c = make_curve({{-1, 0}, {1, 0}});
    CurveSystem sys({c});
    auto far = LinearRelation::from_matrix(Mat{{0.0, 1.0}, {0.0, cplx(0.0, 2.0)}} + cplx(0, 1) * Mat::Identity(2, 2));
    auto rep = domain_check(far, sys, 2, Vec::Ones(2));
    CHECK(rep.ok());
    CHECK(rep.max_norm > 0.0);

    // 0.37 is not a grid node; the eigenvalue itself must be probed
    auto on = LinearRelation::from_matrix(Mat{{0.37, 0}, {0, 3}});
    Vec e1(2);
    e1 << 1, 0;
    auto bad = domain_check(on, sys, 1, e1);
    REQUIRE_FALSE(bad.ok());
    CHECK(std::abs(bad.failures.front().nodes.front() - cplx(0.37)) < 1e-12);

    CHECK(domain_check(on, sys, 0, e1).ok());
}
