#pragma once

#include "curvecalc/common.hpp"
#include "curvecalc/curves.hpp"
#include "curvecalc/measures.hpp"
#include "curvecalc/quadrature.hpp"

#include <vector>

namespace curvecalc {

/// One level of a Cauchy-type integral: int mu(s) / (s - zeta)^k.
struct Term {
    int k = 1;
    CurveMeasure mu;
};
using Terms = std::vector<Term>;

/// Branch of log((gamma(b) - z) / (gamma(a) - z)) vanishing at infinity.
cplx curve_log(const LipschitzCurve& c, cplx z);
/// Principal value of the same integral at the interior point gamma(s).
cplx curve_log_pv(const LipschitzCurve& c, double s);
/// Same, with sc = L - s supplied exactly.
cplx curve_log_pv(const LipschitzCurve& c, double s, double sc);

/// Sum over terms of int mu_k(s) / (s - zeta)^k.
cplx eval(const Terms& terms, cplx zeta, const QuadratureRule& rule = {}, QuadStats* st = nullptr);

/// Breaks that resolve the near-singular kernel when zeta is close to curve c.
std::vector<Break> near_breaks(const CurveSystem& sys, int c, cplx zeta);

/// Extrapolated limit with an error estimate.
struct Limit {
    cplx value{0.0};
    double err = 0.0;
};

/// Fits g(eps) ~ v + a eps + b eps log eps + c eps^2 + d eps^2 log eps on a
/// geometric eps sequence and returns v.
Limit extrapolate_to_zero(const std::vector<double>& eps, const std::vector<cplx>& g);

/// One-sided limit of the terms at the point (curve, s) from the given side.
Limit boundary_value(const Terms& terms, int curve, double s, Side side,
                     const QuadratureRule& rule = {});
/// (f+ - f-) / (2 pi i) at (curve, s).
Limit jump_density(const Terms& terms, int curve, double s, const QuadratureRule& rule = {});
/// Weight of the atom at (curve, s), from the blow-up of f along direction xi.
Limit atom_limit(const Terms& terms, int curve, double s, cplx xi, const QuadratureRule& rule = {});

}  // namespace curvecalc
