#pragma once

#include "curvecalc/common.hpp"
#include "curvecalc/linrel.hpp"
#include "curvecalc/normalform.hpp"
#include "curvecalc/quadrature.hpp"

#include <functional>
#include <vector>

namespace curvecalc {

/// Operator plus evaluation settings. The chart comes from the normal form
/// being evaluated: a form with chart h is evaluated at h(A).
struct CalculusContext {
    LinearRelation A;
    QuadratureRule rule{};
    bool domain_policy = false;  ///< run the sampled domain check before evaluating
    DomainSampler sampler{};

    explicit CalculusContext(LinearRelation a) : A(std::move(a)) {}
};

/// f(A) u = c u + sum_k int mu_k(s) (s - h(A))^{-k} u.
Vec evaluate(const CalculusContext& ctx, const NormalForm& nf, const Vec& u, QuadStats* st = nullptr);

/// Same, with h(A) supplied (used when many forms share a chart).
Vec evaluate_in_chart(const LinearRelation& hA, const NormalForm& nf, const Vec& u,
                      const QuadratureRule& rule, QuadStats* st = nullptr);

/// V f(Lambda) V^{-1} u for a diagonalizable matrix.
Vec oracle(const Mat& A, const std::function<cplx(cplx)>& f, const Vec& u, double max_cond = 1e8,
           double* cond = nullptr);
/// Condition number of the eigenvector matrix of A.
double eigenvector_condition(const Mat& A);

struct ProductReport {
    Vec product;     ///< evaluate(multiply(f, g)) u
    Vec sequential;  ///< f(A) g(A) u
    double discrepancy = 0.0;
};
ProductReport multiply_check(const CalculusContext& ctx, const NormalForm& f, const NormalForm& g,
                             const Vec& u);

struct LocalityReport {
    Vec value;
    double norm = 0.0;
    double u_norm = 0.0;
};
LocalityReport locality_check(const CalculusContext& ctx, const NormalForm& nf, const Vec& u);

/// log(gamma, A) u.
Vec curve_log_op(const CalculusContext& ctx, const LipschitzCurve& c, const Vec& u);

struct GrowthReport {
    cplx alpha{0.0};
    double eps = 0.0;
    double bound = 0.0;  ///< sup over the t-grid of (1+t)^(Re alpha+1-eps) |g_t(A) u|
    double worst_t = 0.0;
    std::vector<double> failed_t;
    bool finite() const { return failed_t.empty() && std::isfinite(bound); }
};
/// g_t(z) = (1 - z) / ((1 + t) + (1 - t) z) on a t-grid refined towards -1.
GrowthReport power_domain(const CalculusContext& ctx, cplx alpha, double eps, const Vec& u);

/// (1 - int_s^1 (sin(alpha pi)/pi) ((t-s)/(1-t))^alpha g_t(A) dt) u for s in [-1, 1].
Vec u_s_continuation(const CalculusContext& ctx, cplx alpha, double s, const Vec& u,
                     QuadStats* st = nullptr);
/// A^alpha u from the integral over [-1, 1], i.e. u_s at s = -1.
Vec principal_power_op(const CalculusContext& ctx, cplx alpha, const Vec& u, QuadStats* st = nullptr);

struct LocalGroupReport {
    Vec product;   ///< f_{alpha1}(A) f_{alpha2}(A) u
    Vec combined;  ///< f_{alpha1+alpha2}(A) u
    double discrepancy = 0.0;
};
/// Curve powers exp(alpha log(gamma, A)); exponents with |Re| >= 1 are split
/// into equal factors inside the strip.
Vec curve_power_op(const CalculusContext& ctx, const LipschitzCurve& c, cplx alpha, const Vec& u);
LocalGroupReport local_group_check(const CalculusContext& ctx, const LipschitzCurve& c, cplx a1,
                                   cplx a2, const Vec& u);

}  // namespace curvecalc
