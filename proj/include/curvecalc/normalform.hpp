#pragma once

#include "curvecalc/cauchy.hpp"
#include "curvecalc/common.hpp"
#include "curvecalc/curves.hpp"
#include "curvecalc/measures.hpp"
#include "curvecalc/moebius.hpp"

#include <functional>
#include <string>
#include <vector>

namespace curvecalc {

/// f(z) = constant + sum_k int nu_k(s) / (s - h(z))^k, where the measures nu_k
/// live on the carrier C = h(Gamma) in the chart plane. The polylines of C are
/// shared with Gamma; only the embedding differs.
struct NormalForm {
    Moebius chart;
    CurveSystemPtr carrier;
    cplx constant{0.0};
    Terms terms;
    int degree = 0;  ///< recorded upper bound for the filtration degree

    cplx eval(cplx z, const QuadratureRule& rule = {}, QuadStats* st = nullptr) const;
    /// Largest level with a nonempty measure.
    int top_level() const;
    /// Measure at level k (empty if none), collected from all terms.
    CurveMeasure level(int k) const;
    NormalForm scaled(cplx c) const;
};

/// Sum of two forms on the same carrier and chart.
NormalForm add(const NormalForm& f, const NormalForm& g);
/// Constant function c on the given carrier and chart.
NormalForm constant_form(cplx c, CurveSystemPtr carrier, Moebius chart = Moebius::identity());

/// Poles only at one base point per component below the top level, one
/// measure at the top level.
struct SimpleNormalForm {
    Moebius chart;
    CurveSystemPtr carrier;
    cplx constant{0.0};
    std::vector<CurvePoint> bases;
    std::vector<std::vector<cplx>> coeffs;  ///< coeffs[b][j-1] for levels j = 1..top-1
    int top = 1;
    CurveMeasure measure;

    NormalForm to_normal_form() const;
};

/// Pushes every level below `level` to `level` by repeated additive
/// reduction, one base per component (given as carrier parameters).
/// level < 0 means degree + 1.
SimpleNormalForm to_simple(const NormalForm& nf, const std::vector<CurvePoint>& bases,
                           int level = -1, const QuadratureRule& rule = {});

/// Same function written in the chart h2.
NormalForm transport(const NormalForm& nf, const Moebius& h2, const QuadratureRule& rule = {});

/// Product of two forms on the same carrier and chart.
NormalForm multiply(const NormalForm& f, const NormalForm& g, const ChoiceFunction& phi,
                    const QuadratureRule& rule = {});
NormalForm multiply(const NormalForm& f, const NormalForm& g, const QuadratureRule& rule = {});

/// Chart z -> 1/(1 - z) and carrier [0, 1] used by the principal branches.
Moebius principal_chart();

NormalForm principal_power(cplx alpha);
NormalForm principal_log();
/// exp(alpha log(gamma, z)), |Re alpha| < 1.
NormalForm curve_power(const LipschitzCurve& c, cplx alpha);
/// log(gamma, z)^n, n >= 1.
NormalForm curve_log_power(const LipschitzCurve& c, int n);

struct Pole {
    cplx p{0.0};
    int order = 1;
    cplx coeff{1.0};
};
/// constant + sum coeff / (p - z)^order; each distinct pole sits on a short
/// segment of its own.
NormalForm rational(const std::vector<Pole>& poles, cplx constant = 0.0);

/// int P(gamma) dgamma / (gamma - z)^(n+1) on a closed curve, deg P <= n - 1,
/// z outside the enclosed domain.
cplx vanishing_cycle_check(const LipschitzCurve& boundary, const std::vector<cplx>& P, int n,
                           cplx z, const QuadratureRule& rule = {});

/// Winding number of a closed curve around z.
int winding_number(const LipschitzCurve& closed, cplx z);

/// Level n+1 form with density w -> F(w) on a closed curve; it vanishes
/// outside the enclosed domain when F is holomorphic inside. F is given by
/// polynomial coefficients, optionally multiplied by exp(w).
NormalForm boundary_form(const LipschitzCurve& boundary, const std::vector<cplx>& poly, bool with_exp,
                         int n);

struct InteriorPoint {
    cplx w{0.0};
    cplx c{1.0};
};

/// Replaces sum c_i / (w_i - z)^n (points inside a counterclockwise closed
/// curve) by a pole at gamma(t0) plus a boundary density at level n+1.
Terms encircle_reduce(const std::vector<InteriorPoint>& mu, const LipschitzCurve& boundary,
                      double t0, int n);

}  // namespace curvecalc
