#include "curvecalc/io.hpp"

#include <doctest.h>

using namespace curvecalc;

TEST_CASE("curve round trip") {
    auto c = make_curve({{0, 0}, {1, 0.5}, {2, -0.25}});
    auto back = io::curve_from_json(io::curve_to_json(c));
    CHECK(back.length() == doctest::Approx(c.length()).epsilon(1e-15));
    CHECK(back.end() == c.end());
    auto sys = io::system_from_json(io::system_to_json(CurveSystem({c})));
    CHECK(sys->num_curves() == 1);
}

TEST_CASE("relation and vector round trip") {
    Mat M{{1, cplx(0, 2)}, {-3, 0.25}};
    auto A = io::relation_from_json(io::relation_to_json(LinearRelation::from_matrix(M)));
    CHECK(A.same_subspace(LinearRelation::from_matrix(M)));
    auto B = io::relation_from_json(R"({"matrix":[[4,0],[0,9]]})");
    CHECK(B.dim() == 2);

    Vec v(3);
    v << 1, cplx(0.1, -2), 1e-300;
    CHECK(io::vector_from_json(io::vector_to_json(v)) == v);
    CHECK(io::vector_from_json("[1, [0, 1]]")[1] == cplx(0, 1));
    CHECK(io::vector_from_json(R"({"vector":[2]})")[0] == cplx(2));
}

TEST_CASE("normal form round trip") {
    auto sys = single_curve_system(make_curve({{-1, 0}, {0, 0.4}, {1, 0}}));
    NormalForm nf;
    nf.carrier = sys;
    nf.constant = {0.5, -0.25};
    CurveMeasure m(sys);
    m.atoms.push_back({0, 0.3, {1, 0.5}});
    m.densities.emplace_back(0, Density::polynomial({{0.3, 0}, {0, 0.7}}));
    nf.terms = {{1, m}, {2, m}};
    nf.degree = 2;
    NormalForm back = io::normal_form_from_json(io::normal_form_to_json(nf));
    for (cplx z : {cplx(0, 2), cplx(3, -1)}) CHECK(std::abs(back.eval(z) - nf.eval(z)) < 1e-13);

    auto sq = io::normal_form_from_json(R"({"named":"principal_power","alpha":0.5})");
    CHECK(std::abs(sq.eval(4.0) - cplx(2.0)) < 1e-6);
    auto r = io::normal_form_from_json(R"({"named":"rational","poles":[{"p":[0,1],"order":1,"coeff":1}],"constant":2})");
    CHECK(std::abs(r.eval(3.0) - (2.0 + 1.0 / (cplx(0, 1) - 3.0))) < 1e-13);
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(io::vector_from_json("[1, 2"), ParseError);
    CHECK_THROWS_AS(io::vector_from_json(R"({"v":[1]})"), ParseError);
    CHECK_THROWS_AS(io::relation_from_json(R"({"matrix":[[1,2],[3]]})"), ParseError);
    CHECK_THROWS_AS(io::normal_form_from_json(R"({"named":"nope"})"), ParseError);
    CHECK_THROWS_AS(io::curve_from_json(R"({"points":"x"})"), ParseError);
    CHECK_THROWS_AS(io::read_file("/nonexistent/file.json"), ParseError);
}
