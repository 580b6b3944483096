#include "curvecalc/cauchy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace curvecalc {

namespace {

cplx ipow(cplx z, int n) {
    cplx r(1.0);
    for (int k = 0; k < n; ++k) r *= z;
    return r;
}

double line_angle(cplx a, cplx b) {
    double phi = std::abs(std::arg(a / b));
    return std::min(phi, kPi - phi);
}

}  // namespace

cplx curve_log(const LipschitzCurve& c, cplx z) {
    if (c.distance(z) <= kOnCurveTol) throw OnCurve("curve_log evaluated on the curve");
    const auto& v = c.vertices();
    cplx acc(0.0);
    for (std::size_t j = 0; j + 1 < v.size(); ++j) acc += std::log((v[j + 1] - z) / (v[j] - z));
    return acc;
}

cplx curve_log_pv(const LipschitzCurve& c, double s) { return curve_log_pv(c, s, c.length() - s); }

cplx curve_log_pv(const LipschitzCurve& c, double s, double sc) {
    const double L = c.length();
    if (!(s > 0.0 && s <= L && sc > 0.0)) throw EndpointParameter("principal value needs an interior parameter");
    const auto& v = c.vertices();
    const auto& t = c.params();
    const std::size_t n = c.num_segments();
    const std::size_t j = c.segment_of(s);
    const cplx z = c.point(s, sc);
    double re_a = (j == 0) ? s : std::abs(z - v.front());
    double re_b = (j + 1 == n) ? sc : std::abs(v.back() - z);
    double im = 0.0;
    bool at_vertex = (s == t[j] && j > 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == j || (at_vertex && i + 1 == j)) continue;
        im += std::arg((v[i + 1] - z) / (v[i] - z));
    }
    if (at_vertex) im += std::arg(c.direction(j) / c.direction(j - 1));
    return {std::log(re_b) - std::log(re_a), im};
}

std::vector<Break> near_breaks(const CurveSystem& sys, int c, cplx zeta) {
    std::vector<Break> bs;
    cplx pz;
    if (!sys.pullback(zeta, &pz)) return bs;
    const auto& cv = sys.curve(c);
    const auto& v = cv.vertices();
    for (std::size_t j = 0; j < cv.num_segments(); ++j) {
        double len = cv.segment_length(j), u = 0.0;
        double d = geom::point_segment_distance(pz, v[j], v[j + 1], &u);
        if (d >= 5.0 * len) continue;
        double a = cv.params()[j], b = cv.params()[j + 1];
        double foot = a + u * len;
        if (foot > a && foot < b) bs.push_back({foot, false});
        double h = std::max(d, 1e-300);
        for (int m = 0; m < 60 && h < len; ++m, h *= 4.0) {
            if (foot - h > a) bs.push_back({foot - h, false});
            if (foot + h < b) bs.push_back({foot + h, false});
        }
    }
    return bs;
}

cplx eval(const Terms& terms, cplx zeta, const QuadratureRule& rule, QuadStats* st) {
    cplx acc(0.0);
    for (const auto& term : terms) {
        const auto& mu = term.mu;
        if (mu.empty()) continue;
        const auto& sys = *mu.sys;
        if (sys.distance(zeta) <= kOnCurveTol) throw OnCurve("evaluation point lies on the carrier");
        const int k = term.k;
        for (const auto& a : mu.atoms) acc += a.w / ipow(sys.point(a.curve, a.t) - zeta, k);
        for (const auto& [c, d] : mu.densities) {
            auto extra = near_breaks(sys, c, zeta);
            acc += integrate_density(
                sys, c, d,
                [&](double, double, cplx z, cplx dg) { return dg / ipow(z - zeta, k); },
                cplx(0.0), rule, st, extra);
        }
    }
    return acc;
}

Limit extrapolate_to_zero(const std::vector<double>& eps, const std::vector<cplx>& g) {
    auto fit = [&](std::size_t from, std::size_t to) {
        const std::size_t m = to - from;
        Eigen::MatrixXd M(m, 5);
        Eigen::MatrixXcd rhs(m, 1);
        for (std::size_t i = 0; i < m; ++i) {
            double e = eps[from + i], le = std::log(e);
            M(i, 0) = 1.0;
            M(i, 1) = e;
            M(i, 2) = e * le;
            M(i, 3) = e * e;
            M(i, 4) = e * e * le;
            rhs(i, 0) = g[from + i];
        }
        // column scaling keeps the normal equations well conditioned
        Eigen::VectorXd sc = M.colwise().norm().transpose();
        for (int j = 0; j < 5; ++j) M.col(j) /= sc(j);
        Eigen::MatrixXcd Mc = M.cast<cplx>();
        Eigen::VectorXcd x = Mc.colPivHouseholderQr().solve(rhs);
        return x(0) / sc(0);
    };
    const std::size_t n = eps.size();
    cplx v = fit(0, n);
    cplx v1 = fit(0, n - 2), v2 = fit(2, n);
    return {v, std::max(std::abs(v - v1), std::abs(v - v2))};
}

namespace {

void require_hoelder(const Terms& terms, int curve, double s) {
    for (const auto& term : terms)
        for (const auto& [c, d] : term.mu.densities)
            if (c == curve && !d.holder && s >= d.lo && s <= d.hi)
                throw NonHoelderDensity("density near the point is not flagged Hoelder");
}

/// Distance scale around (curve, s) for the eps sequence.
double local_scale(const CurveSystem& sys, int curve, double s) {
    const auto& cv = sys.curve(curve);
    double h = cv.length();
    for (double t : cv.params())
        if (std::abs(t - s) > 0.0) h = std::min(h, std::abs(t - s));
    return std::min(0.25 * h, 0.1);
}

}  // namespace

Limit boundary_value(const Terms& terms, int curve, double s, Side side, const QuadratureRule& rule) {
    if (terms.empty()) return {};
    require_hoelder(terms, curve, s);
    const auto& sys = *terms.front().mu.sys;
    const auto& cv = sys.curve(curve);
    if (!(s > 0.0 && s < cv.length())) throw EndpointParameter("boundary value needs an interior parameter");
    cplx tau = sys.dgamma(curve, s);
    tau /= std::abs(tau);
    cplx xi = (side == Side::Right ? -kI : kI) * tau;
    cplx z0 = sys.point(curve, s);
    double h0 = local_scale(sys, curve, s);
    std::vector<double> eps;
    std::vector<cplx> g;
    QuadratureRule r = rule;
    r.tol = std::min(rule.tol, 1e-12);
    for (int k = 0; k < 14; ++k) {
        double e = h0 * std::pow(0.5, k);
        eps.push_back(e);
        g.push_back(eval(terms, z0 + e * xi, r));
    }
    return extrapolate_to_zero(eps, g);
}

Limit jump_density(const Terms& terms, int curve, double s, const QuadratureRule& rule) {
    Limit p = boundary_value(terms, curve, s, Side::Left, rule);
    Limit m = boundary_value(terms, curve, s, Side::Right, rule);
    return {(p.value - m.value) / (2.0 * kPi * kI), (p.err + m.err) / (2.0 * kPi)};
}

Limit atom_limit(const Terms& terms, int curve, double s, cplx xi, const QuadratureRule& rule) {
    if (terms.empty()) return {};
    if (std::abs(xi) == 0.0) throw ZeroDirection("approach direction is zero");
    const auto& sys = *terms.front().mu.sys;
    const cplx z0 = sys.point(curve, s);
    // curve directions at the point, including other curves through a node
    std::vector<cplx> dirs;
    for (std::size_t c = 0; c < sys.num_curves(); ++c) {
        const auto& cv = sys.curve(c);
        for (std::size_t j = 0; j < cv.num_segments(); ++j) {
            cplx p = cv.vertices()[j], q = cv.vertices()[j + 1];
            if (geom::point_arc_distance(z0, p, q, sys.embedding()) > 1e-12) continue;
            double u = 0.0;
            cplx pz;
            if (sys.pullback(z0, &pz)) geom::point_segment_distance(pz, p, q, &u);
            dirs.push_back(sys.dgamma_on_segment(static_cast<int>(c), j, p + u * (q - p)));
        }
    }
    for (cplx d : dirs)
        if (line_angle(d, xi) < 1e-2)
            throw SectorViolation("approach direction is nearly tangent to the curve");
    const cplx u = xi / std::abs(xi);
    double h0 = local_scale(sys, curve, s);
    std::vector<double> eps;
    std::vector<cplx> g;
    for (int k = 0; k < 14; ++k) {
        double e = h0 * std::pow(0.5, k);
        eps.push_back(e);
        g.push_back(-e * u * eval(terms, z0 + e * u, rule));
    }
    return extrapolate_to_zero(eps, g);
}

}  // namespace curvecalc
