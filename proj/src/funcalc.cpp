#include "curvecalc/funcalc.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>

namespace curvecalc {

namespace {

struct LevelDensity {
    int k;
    const Density* d;
};

/// Finite eigenvalues of B, used only to refine quadrature near the carrier.
std::vector<cplx> spectrum_hint(const LinearRelation& B) {
    std::vector<cplx> out;
    if (B.dim() > 64 || B.rank() != B.dim()) return out;
    try {
        for (cplx l : B.spectrum())
            if (std::isfinite(l.real()) && std::isfinite(l.imag())) out.push_back(l);
    } catch (const Error&) {
    }
    return out;
}

}  // namespace

Vec evaluate_in_chart(const LinearRelation& hA, const NormalForm& nf, const Vec& u,
                      const QuadratureRule& rule, QuadStats* st) {
    if (u.size() != hA.dim()) throw InvalidArgument("vector dimension mismatch");
    const Vec zero = Vec::Zero(u.size());
    Vec acc = nf.constant * u;
    if (nf.terms.empty()) return acc;
    const CurveSystem& sys = *nf.carrier;

    // atoms, grouped by position so each resolvent is factorized once
    std::map<std::pair<int, double>, std::vector<std::pair<int, cplx>>> atoms;
    std::map<int, std::vector<LevelDensity>> dens;
    for (const auto& term : nf.terms) {
        for (const auto& a : term.mu.atoms) atoms[{a.curve, a.t}].push_back({term.k, a.w});
        for (const auto& [c, d] : term.mu.densities) dens[c].push_back({term.k, &d});
    }
    for (const auto& [pos, list] : atoms) {
        cplx s = sys.point(pos.first, pos.second);
        Resolvent R(hA, s);
        int K = 0;
        for (const auto& e : list) K = std::max(K, e.first);
        std::vector<cplx> coef(K + 1, 0.0);
        for (const auto& e : list) coef[e.first] += e.second;
        Vec v = u;
        for (int k = 1; k <= K; ++k) {
            v = R.apply(v);
            if (coef[k] != cplx(0.0)) acc += coef[k] * v;
        }
    }
    if (dens.empty()) return acc;

    const std::vector<cplx> spec = spectrum_hint(hA);
    for (const auto& [c, list] : dens) {
        const auto& cv = sys.curve(c);
        const double L = cv.length();
        int K = 0;
        double lo = L, hi = 0.0;
        for (const auto& e : list) {
            K = std::max(K, e.k);
            lo = std::min(lo, std::max(0.0, e.d->lo));
            hi = std::max(hi, std::min(L, e.d->hi));
        }
        if (!(hi > lo)) continue;
        bool sing_lo = false, sing_hi = false;
        std::vector<Break> bs;
        for (double t : cv.params()) bs.push_back({t, false});
        for (const auto& e : list) {
            const Density& d = *e.d;
            const double dlo = std::max(0.0, d.lo), dhi = std::min(L, d.hi);
            for (double t : d.breaks) bs.push_back({t, false});
            for (double t : d.singular) bs.push_back({t, true});
            if (dlo == lo) sing_lo = sing_lo || d.sing_lo;
            else bs.push_back({dlo, d.sing_lo});
            if (dhi == hi) sing_hi = sing_hi || d.sing_hi;
            else bs.push_back({dhi, d.sing_hi});
        }
        for (cplx l : spec) {
            auto nb = near_breaks(sys, c, l);
            bs.insert(bs.end(), nb.begin(), nb.end());
        }
        auto f = [&](double t, double tc) -> Vec {
            std::size_t j = cv.segment_of(t);
            cplx P = cv.point(t, tc);
            cplx s = sys.embedding()(P);
            cplx dg = sys.dgamma_on_segment(c, j, P);
            std::vector<cplx> coef(K + 1, 0.0);
            bool any = false;
            for (const auto& e : list) {
                cplx v = (*e.d)(t, tc);
                coef[e.k] += v;
                any = any || v != cplx(0.0);
            }
            if (!any) return zero;
            Resolvent R(hA, s);
            Vec v = u, out = zero;
            int top = K;
            while (top > 0 && coef[top] == cplx(0.0)) --top;
            for (int k = 1; k <= top; ++k) {
                v = R.apply(v);
                if (coef[k] != cplx(0.0)) out += coef[k] * v;
            }
            return out * dg;
        };
        acc += integrate_pieces(f, lo, hi, L, bs, sing_lo, sing_hi, zero, rule, st);
    }
    return acc;
}

Vec evaluate(const CalculusContext& ctx, const NormalForm& nf, const Vec& u, QuadStats* st) {
    const LinearRelation hA = nf.chart.is_identity() ? ctx.A : ctx.A.moebius_apply(nf.chart);
    if (ctx.domain_policy) {
        DomainReport rep = domain_check(hA, *nf.carrier, std::max(nf.degree, 1), u, ctx.sampler);
        if (!rep.ok()) throw ResolventFailure(rep.failures.front().nodes.front(), rep.failures.front().message);
    }
    return evaluate_in_chart(hA, nf, u, ctx.rule, st);
}

// ----------------------------------------------------------------- oracle

double eigenvector_condition(const Mat& A) {
    Eigen::ComplexEigenSolver<Mat> es(A);
    Eigen::JacobiSVD<Mat> svd(es.eigenvectors());
    const auto& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    return smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
}

Vec oracle(const Mat& A, const std::function<cplx(cplx)>& f, const Vec& u, double max_cond, double* cond) {
    if (A.rows() != A.cols() || A.rows() != u.size()) throw InvalidArgument("oracle dimension mismatch");
    Eigen::ComplexEigenSolver<Mat> es(A);
    const Mat& V = es.eigenvectors();
    Eigen::JacobiSVD<Mat> svd(V);
    const auto& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    const double kappa = smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
    if (cond) *cond = kappa;
    if (!(kappa <= max_cond)) throw DefectiveMatrix("eigenvector condition number " + std::to_string(kappa));
    Vec c = V.partialPivLu().solve(u);
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= f(es.eigenvalues()[i]);
    return V * c;
}

// ------------------------------------------------------------------ checks

ProductReport multiply_check(const CalculusContext& ctx, const NormalForm& f, const NormalForm& g,
                             const Vec& u) {
    NormalForm g2 = g;
    if (!(g.chart.a == f.chart.a && g.chart.b == f.chart.b && g.chart.c == f.chart.c &&
          g.chart.d == f.chart.d))
        g2 = transport(g, f.chart, ctx.rule);
    ProductReport r;
    r.product = evaluate(ctx, multiply(f, g2, ctx.rule), u);
    r.sequential = evaluate(ctx, f, evaluate(ctx, g, u));
    r.discrepancy = (r.product - r.sequential).norm();
    return r;
}

LocalityReport locality_check(const CalculusContext& ctx, const NormalForm& nf, const Vec& u) {
    LocalityReport r;
    r.value = evaluate(ctx, nf, u);
    r.norm = r.value.norm();
    r.u_norm = u.norm();
    return r;
}

Vec curve_log_op(const CalculusContext& ctx, const LipschitzCurve& c, const Vec& u) {
    return evaluate(ctx, curve_log_power(c, 1), u);
}

// ------------------------------------------------------------------ powers

namespace {

/// g_t(A) u with g_t(z) = (1 - z)/((1 + t) + (1 - t) z), given 1 - t and 1 + t.
struct PencilApply {
    const LinearRelation& A;
    Vec u;
    Vec one_minus_A_u;  // matrix case only

    PencilApply(const LinearRelation& a, const Vec& v) : A(a), u(v) {
        if (A.matrix()) one_minus_A_u = u - *A.matrix() * u;
    }

    Vec operator()(double omt, double opt) const {
        const cplx node = -opt / omt;
        if (A.matrix()) {
            const Mat& M = *A.matrix();
            Mat T = omt * M;
            T.diagonal().array() += opt;
            Eigen::PartialPivLU<Mat> lu(T);
            if (lu.rcond() > 1e-14) return lu.solve(one_minus_A_u);
        }
        return apply_moebius(A, Moebius(-1.0, 1.0, omt, opt), u, node);
    }
};

}  // namespace

GrowthReport power_domain(const CalculusContext& ctx, cplx alpha, double eps, const Vec& u) {
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    GrowthReport rep;
    rep.alpha = alpha;
    rep.eps = eps;
    PencilApply g(ctx.A, u);
    const double p = alpha.real() + 1.0 - eps;
    auto sample = [&](double opt) {
        const double omt = 2.0 - opt;
        try {
            double v = std::pow(opt, p) * g(omt, opt).norm();
            if (!std::isfinite(v) || v > rep.bound) {
                rep.bound = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
                rep.worst_t = opt - 1.0;
            }
        } catch (const ResolventFailure&) {
            rep.failed_t.push_back(opt - 1.0);
        }
    };
    for (int k = 1; k < 64; ++k) sample(2.0 * k / 64.0);
    for (int k = 6; k <= 60; ++k) sample(std::ldexp(1.0, -k));
    return rep;
}

Vec u_s_continuation(const CalculusContext& ctx, cplx alpha, double s, const Vec& u, QuadStats* st) {
    if (!(std::abs(alpha.real()) < 1.0)) throw AlphaOutOfRange("power needs |Re alpha| < 1");
    if (!(s >= -1.0 && s <= 1.0)) throw InvalidArgument("s must lie in [-1, 1]");
    const cplx coef = std::sin(alpha * kPi) / kPi;
    if (s == 1.0 || coef == cplx(0.0)) return u;
    const Vec zero = Vec::Zero(u.size());
    PencilApply g(ctx.A, u);
    const double w = 1.0 - s;
    // t = 1 - (1 - s) e^{-tau}: ((t - s)/(1 - t))^alpha dt = (e^tau - 1)^alpha (1 - s) e^{-tau} dtau
    auto f = [&](double tau) -> Vec {
        const double omt = w * std::exp(-tau);
        const double opt = 2.0 - omt;
        if (tau <= 0.0) return zero;
        cplx weight = coef * w * std::exp((alpha - 1.0) * tau + alpha * std::log1p(-std::exp(-tau)));
        return weight * g(omt, opt);
    };
    Vec acc = integrate_tanh_sinh([&](double da, double) { return f(da); }, 0.0, 1.0, zero,
                                  ctx.rule.tol, st);
    // the integrand decays like exp(-(1 - Re alpha) tau); march over doubling intervals
    const double beta = 1.0 - alpha.real();
    auto fg = [&](double tau, double) { return f(tau); };
    for (double a = 1.0; a < 8192.0; a *= 2.0) {
        acc += integrate_gl(fg, a, 2.0 * a, 2.0 * a, zero, ctx.rule, st);
        const double tail = f(2.0 * a).norm() / beta;
        if (tail <= 1e-3 * ctx.rule.tol * (u.norm() + acc.norm())) break;
    }
    return u - acc;
}

Vec principal_power_op(const CalculusContext& ctx, cplx alpha, const Vec& u, QuadStats* st) {
    if (ctx.domain_policy && alpha.real() >= 0.0) {
        GrowthReport rep = power_domain(ctx, alpha, 0.1, u);
        if (!rep.failed_t.empty()) {
            double t = rep.failed_t.front();
            throw ResolventFailure(-(1.0 + t) / (1.0 - t), "pencil is singular on the negative axis");
        }
        if (!rep.finite() || rep.bound > 1e12 * (1.0 + u.norm()))
            throw GrowthViolation("growth bound not satisfied");
    }
    return u_s_continuation(ctx, alpha, -1.0, u, st);
}

Vec curve_power_op(const CalculusContext& ctx, const LipschitzCurve& c, cplx alpha, const Vec& u) {
    const int m = static_cast<int>(std::floor(std::abs(alpha.real()))) + 1;
    const NormalForm f = curve_power(c, alpha / double(m));
    Vec v = u;
    for (int i = 0; i < m; ++i) v = evaluate(ctx, f, v);
    return v;
}

LocalGroupReport local_group_check(const CalculusContext& ctx, const LipschitzCurve& c, cplx a1,
                                   cplx a2, const Vec& u) {
    LocalGroupReport r;
    r.product = curve_power_op(ctx, c, a1, curve_power_op(ctx, c, a2, u));
    r.combined = curve_power_op(ctx, c, a1 + a2, u);
    r.discrepancy = (r.product - r.combined).norm();
    return r;
}

}  // namespace curvecalc
