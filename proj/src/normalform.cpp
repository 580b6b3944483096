#include "curvecalc/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace curvecalc {

namespace {

cplx ipow(cplx z, int n) {
    cplx r(1.0);
    for (int k = 0; k < n; ++k) r *= z;
    return r;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

bool proportional(const Moebius& f, const Moebius& g) {
    const cplx x[4] = {f.a, f.b, f.c, f.d};
    const cplx y[4] = {g.a, g.b, g.c, g.d};
    double nx = 0.0, ny = 0.0;
    for (int i = 0; i < 4; ++i) {
        nx = std::max(nx, std::abs(x[i]));
        ny = std::max(ny, std::abs(y[i]));
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(x[i] * y[j] - x[j] * y[i]) > 1e-12 * nx * ny) return false;
    return true;
}

bool same_polylines(const CurveSystem& a, const CurveSystem& b) {
    if (a.num_curves() != b.num_curves()) return false;
    for (std::size_t i = 0; i < a.num_curves(); ++i)
        if (a.curve(i).vertices() != b.curve(i).vertices()) return false;
    return proportional(a.embedding(), b.embedding());
}

/// Collapses terms to one measure per level.
Terms by_level(const std::map<int, CurveMeasure>& levels) {
    Terms out;
    for (const auto& [k, m] : levels)
        if (!m.empty()) out.push_back({k, m});
    return out;
}

void check_alpha(cplx alpha) {
    if (!(std::abs(alpha.real()) < 1.0))
        throw AlphaOutOfRange("power needs |Re alpha| < 1");
}

CurveSystemPtr unit_interval() {
    static const CurveSystemPtr sys = single_curve_system(make_curve({0.0, 1.0}));
    return sys;
}

void require_closed(const LipschitzCurve& c) {
    if (!c.closed()) throw InvalidArgument("curve must be closed");
}

double signed_area(const LipschitzCurve& c) {
    const auto& v = c.vertices();
    double a = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) a += (std::conj(v[i]) * v[i + 1]).imag();
    return 0.5 * a;
}

}  // namespace

// ------------------------------------------------------------- NormalForm

cplx NormalForm::eval(cplx z, const QuadratureRule& rule, QuadStats* st) const {
    cplx zeta = chart(z);
    if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag())) return constant;
    return constant + curvecalc::eval(terms, zeta, rule, st);
}

int NormalForm::top_level() const {
    int k = 0;
    for (const auto& t : terms)
        if (!t.mu.empty()) k = std::max(k, t.k);
    return k;
}

CurveMeasure NormalForm::level(int k) const {
    CurveMeasure m(carrier);
    for (const auto& t : terms)
        if (t.k == k) m += t.mu;
    return m;
}

NormalForm NormalForm::scaled(cplx c) const {
    NormalForm r = *this;
    r.constant *= c;
    for (auto& t : r.terms) t.mu = t.mu.scaled(c);
    return r;
}

NormalForm constant_form(cplx c, CurveSystemPtr carrier, Moebius chart) {
    NormalForm f;
    f.chart = chart;
    f.carrier = std::move(carrier);
    f.constant = c;
    return f;
}

static CurveSystemPtr common_carrier(const NormalForm& f, const NormalForm& g) {
    if (!proportional(f.chart, g.chart)) throw InvalidArgument("forms use different charts");
    if (f.carrier != g.carrier && !same_polylines(*f.carrier, *g.carrier))
        throw InvalidArgument("forms live on different carriers");
    return f.carrier;
}

NormalForm add(const NormalForm& f, const NormalForm& g) {
    CurveSystemPtr sys = common_carrier(f, g);
    NormalForm r;
    r.chart = f.chart;
    r.carrier = sys;
    r.constant = f.constant + g.constant;
    std::map<int, CurveMeasure> levels;
    for (const auto* h : {&f, &g})
        for (const auto& t : h->terms) {
            auto& m = levels.try_emplace(t.k, CurveMeasure(sys)).first->second;
            m += t.mu.rebased(sys);
        }
    r.terms = by_level(levels);
    r.degree = std::max(f.degree, g.degree);
    return r;
}

// ---------------------------------------------------------- simple forms

NormalForm SimpleNormalForm::to_normal_form() const {
    NormalForm f;
    f.chart = chart;
    f.carrier = carrier;
    f.constant = constant;
    for (int j = 1; j < top; ++j) {
        CurveMeasure m(carrier);
        for (std::size_t b = 0; b < bases.size(); ++b) {
            cplx c = coeffs[b][j - 1];
            if (c != cplx(0.0)) m.atoms.push_back({bases[b].curve, bases[b].t, c});
        }
        if (!m.empty()) f.terms.push_back({j, m});
    }
    if (!measure.empty()) f.terms.push_back({top, measure});
    f.degree = top;
    return f;
}

SimpleNormalForm to_simple(const NormalForm& nf, const std::vector<CurvePoint>& bases, int level,
                           const QuadratureRule& rule) {
    const CurveSystem& sys = *nf.carrier;
    const int ncomp = sys.num_components();
    if (static_cast<int>(bases.size()) != ncomp)
        throw InvalidArgument("to_simple needs one base point per component");
    std::vector<int> base_of(ncomp, -1);
    for (std::size_t b = 0; b < bases.size(); ++b) {
        const auto& p = bases[b];
        if (p.curve < 0 || p.curve >= static_cast<int>(sys.num_curves()) || p.t < 0.0 ||
            p.t > sys.curve(p.curve).length())
            throw BaseOffCarrier("base point is not on the carrier");
        int comp = sys.component_of(p.curve);
        if (base_of[comp] >= 0) throw InvalidArgument("two base points on one component");
        base_of[comp] = static_cast<int>(b);
    }
    const int top = level < 0 ? std::max(nf.degree, 0) + 1 : level;
    if (top < 1 || top < nf.top_level())
        throw InvalidArgument("target level below the degree of the form");

    SimpleNormalForm s;
    s.chart = nf.chart;
    s.carrier = nf.carrier;
    s.constant = nf.constant;
    s.bases = bases;
    s.top = top;
    s.coeffs.assign(bases.size(), std::vector<cplx>(std::max(top - 1, 0), cplx(0.0)));
    ChoiceFunction phi(nf.carrier);
    CurveMeasure carry(nf.carrier);
    for (int k = 1; k < top; ++k) {
        CurveMeasure m = nf.level(k);
        m += carry;
        carry = CurveMeasure(nf.carrier);
        for (int comp = 0; comp < ncomp; ++comp) {
            CurveMeasure part = m.restricted_to_component(comp);
            if (part.empty()) continue;
            int b = base_of[comp];
            AdditiveReduction red = additive_reduce(part, k, bases[b], phi, rule);
            s.coeffs[b][k - 1] = red.c;
            carry += red.theta.scaled(static_cast<double>(k));
        }
    }
    s.measure = nf.level(top);
    s.measure += carry;
    return s;
}

// -------------------------------------------------------------- transport

NormalForm transport(const NormalForm& nf, const Moebius& h2, const QuadratureRule& rule) {
    const Moebius g = h2.compose(nf.chart.inverse());
    auto image = std::make_shared<const CurveSystem>(nf.carrier->transported(g));
    NormalForm r;
    r.chart = h2;
    r.carrier = image;
    r.constant = nf.constant;
    r.degree = nf.degree;
    const CurveSystemPtr old = nf.carrier;
    // 1/(s - zeta)^k = sum_j C(k,j) q^(k-j) D^j / (g(s) - g(zeta))^j,
    // q = c/(cs + d), D = det/(cs + d)^2; the j = 0 part is a constant.
    auto qd = [g](cplx s) {
        cplx den = g.c * s + g.d;
        return std::pair<cplx, cplx>{g.c / den, g.det() / (den * den)};
    };
    std::map<int, CurveMeasure> levels;
    auto level = [&](int j) -> CurveMeasure& {
        return levels.try_emplace(j, CurveMeasure(image)).first->second;
    };
    for (const auto& term : nf.terms) {
        const int k = term.k;
        for (const auto& a : term.mu.atoms) {
            auto [q, D] = qd(old->point(a.curve, a.t));
            r.constant += a.w * ipow(q, k);
            for (int j = 1; j <= k; ++j)
                level(j).atoms.push_back({a.curve, a.t, a.w * binom(k, j) * ipow(q, k - j) * ipow(D, j)});
        }
        for (const auto& [c, d] : term.mu.densities) {
            if (!g.is_affine()) {
                auto kern = [&](double, double, cplx s, cplx dg) { return ipow(qd(s).first, k) * dg; };
                r.constant += integrate_density(*old, c, d, kern, cplx(0.0), rule, nullptr);
            }
            const Moebius e = old->embedding();
            const LipschitzCurve cv = old->curve(c);
            for (int j = 1; j <= k; ++j) {
                if (g.is_affine() && j < k) continue;
                Density nd = d;
                nd.spec.clear();
                const double bk = binom(k, j);
                auto base = d.fn;
                nd.fn = [base, bk, k, j, g, e, cv](double t, double tc) {
                    cplx s = e(cv.point(t, tc));
                    cplx den = g.c * s + g.d;
                    cplx q = g.c / den, D = g.det() / (den * den);
                    return base(t, tc) * bk * ipow(q, k - j) * ipow(D, j - 1);
                };
                level(j).densities.emplace_back(c, std::move(nd));
            }
        }
    }
    r.terms = by_level(levels);
    return r;
}

// --------------------------------------------------------------- multiply

NormalForm multiply(const NormalForm& f, const NormalForm& g, const ChoiceFunction& phi,
                    const QuadratureRule& rule) {
    CurveSystemPtr sys = common_carrier(f, g);
    NormalForm r;
    r.chart = f.chart;
    r.carrier = sys;
    r.constant = f.constant * g.constant;
    r.degree = f.degree + g.degree;
    std::map<int, CurveMeasure> levels;
    auto level = [&](int j) -> CurveMeasure& {
        return levels.try_emplace(j, CurveMeasure(sys)).first->second;
    };
    if (f.constant != cplx(0.0))
        for (const auto& t : g.terms) level(t.k) += t.mu.rebased(sys).scaled(f.constant);
    if (g.constant != cplx(0.0))
        for (const auto& t : f.terms) level(t.k) += t.mu.rebased(sys).scaled(g.constant);
    const int tf = f.top_level(), tg = g.top_level();
    for (int k1 = 1; k1 <= tf; ++k1) {
        CurveMeasure m1 = f.level(k1);
        if (m1.empty()) continue;
        m1 = m1.rebased(sys);
        for (int k2 = 1; k2 <= tg; ++k2) {
            CurveMeasure m2 = g.level(k2);
            if (m2.empty()) continue;
            auto th = multiplicative_reduce(m1, k1 - 1, m2.rebased(sys), k2 - 1, phi, rule);
            for (std::size_t i = 0; i < th.size(); ++i)
                if (!th[i].empty()) level(static_cast<int>(i) + 1) += th[i];
        }
    }
    r.terms = by_level(levels);
    return r;
}

NormalForm multiply(const NormalForm& f, const NormalForm& g, const QuadratureRule& rule) {
    ChoiceFunction phi(f.carrier);
    return multiply(f, g, phi, rule);
}

// ------------------------------------------------------------ named forms

Moebius principal_chart() { return {0.0, 1.0, -1.0, 1.0}; }

NormalForm principal_power(cplx alpha) {
    check_alpha(alpha);
    NormalForm f;
    f.chart = principal_chart();
    f.carrier = unit_interval();
    f.constant = 1.0;
    f.degree = 1;
    const cplx coef = std::sin(alpha * kPi) / kPi;
    if (coef != cplx(0.0)) {
        Density d;
        d.fn = [alpha, coef](double t, double tc) {
            if (t <= 0.0 || tc <= 0.0) return cplx(0.0);
            return coef * std::exp(alpha * (std::log(tc) - std::log(t)));
        };
        d.sing_lo = d.sing_hi = true;
        CurveMeasure m(f.carrier);
        m.densities.emplace_back(0, std::move(d));
        f.terms.push_back({1, m});
    }
    return f;
}

NormalForm principal_log() {
    NormalForm f;
    f.chart = principal_chart();
    f.carrier = unit_interval();
    f.constant = 0.0;
    f.degree = 1;
    CurveMeasure m(f.carrier);
    m.densities.emplace_back(0, Density::constant(1.0));
    f.terms.push_back({1, m});
    return f;
}

NormalForm curve_power(const LipschitzCurve& c, cplx alpha) {
    check_alpha(alpha);
    NormalForm f;
    f.carrier = single_curve_system(c);
    f.constant = 1.0;
    f.degree = 1;
    const cplx coef = std::sin(alpha * kPi) / kPi;
    if (coef != cplx(0.0)) {
        Density d;
        d.fn = [c, alpha, coef](double t, double tc) {
            if (t <= 0.0 || tc <= 0.0) return cplx(0.0);
            return coef * std::exp(alpha * curve_log_pv(c, t, tc));
        };
        d.sing_lo = d.sing_hi = true;
        CurveMeasure m(f.carrier);
        m.densities.emplace_back(0, std::move(d));
        f.terms.push_back({1, m});
    }
    return f;
}

NormalForm curve_log_power(const LipschitzCurve& c, int n) {
    if (n < 1) throw InvalidArgument("log power needs n >= 1");
    NormalForm f;
    f.carrier = single_curve_system(c);
    f.degree = 1;
    Density d;
    if (n == 1) {
        d = Density::constant(1.0);
    } else {
        d.fn = [c, n](double t, double tc) {
            if (t <= 0.0 || tc <= 0.0) return cplx(0.0);
            cplx p = curve_log_pv(c, t, tc);
            return (ipow(p + kI * kPi, n) - ipow(p - kI * kPi, n)) / (2.0 * kPi * kI);
        };
        d.sing_lo = d.sing_hi = true;
    }
    CurveMeasure m(f.carrier);
    m.densities.emplace_back(0, std::move(d));
    f.terms.push_back({1, m});
    return f;
}

NormalForm rational(const std::vector<Pole>& poles, cplx constant) {
    std::vector<cplx> pts;
    for (const auto& p : poles) {
        if (p.order < 1) throw InvalidArgument("pole order must be >= 1");
        bool seen = false;
        for (cplx q : pts) seen = seen || std::abs(q - p.p) <= 1e-14 * (1.0 + std::abs(q));
        if (!seen) pts.push_back(p.p);
    }
    if (pts.empty()) pts.push_back(0.0);
    double delta = 1e-2;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            delta = std::min(delta, 0.25 * std::abs(pts[i] - pts[j]));
    std::vector<LipschitzCurve> curves;
    for (cplx p : pts) curves.push_back(make_curve({p, p + delta}));
    NormalForm f;
    f.carrier = std::make_shared<const CurveSystem>(std::move(curves));
    f.constant = constant;
    std::map<int, CurveMeasure> levels;
    for (const auto& p : poles) {
        int idx = 0;
        while (std::abs(pts[idx] - p.p) > 1e-14 * (1.0 + std::abs(pts[idx]))) ++idx;
        levels.try_emplace(p.order, CurveMeasure(f.carrier)).first->second.atoms.push_back({idx, 0.0, p.coeff});
        f.degree = std::max(f.degree, p.order);
    }
    f.terms = by_level(levels);
    return f;
}

// ------------------------------------------------------ closed contours

int winding_number(const LipschitzCurve& closed, cplx z) {
    require_closed(closed);
    if (closed.distance(z) <= kOnCurveTol) throw OnCurve("winding number on the curve");
    const auto& v = closed.vertices();
    double a = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) a += std::arg((v[i + 1] - z) / (v[i] - z));
    return static_cast<int>(std::lround(a / (2.0 * kPi)));
}

cplx vanishing_cycle_check(const LipschitzCurve& boundary, const std::vector<cplx>& P, int n, cplx z,
                           const QuadratureRule& rule) {
    require_closed(boundary);
    if (n < 1) throw InvalidArgument("vanishing cycle needs n >= 1");
    std::vector<cplx> coeffs = P;
    while (!coeffs.empty() && coeffs.back() == cplx(0.0)) coeffs.pop_back();
    if (static_cast<int>(coeffs.size()) > n) throw InvalidArgument("polynomial degree exceeds n - 1");
    if (winding_number(boundary, z) != 0) throw ZInside("z lies inside the cycle");
    NormalForm f = boundary_form(boundary, coeffs, false, n);
    return eval(f.terms, z, rule);
}

NormalForm boundary_form(const LipschitzCurve& boundary, const std::vector<cplx>& poly, bool with_exp,
                         int n) {
    require_closed(boundary);
    if (n < 0) throw InvalidArgument("boundary form needs n >= 0");
    NormalForm f;
    f.carrier = single_curve_system(boundary);
    f.degree = n + 1;
    Density d;
    d.fn = [boundary, poly, with_exp](double t, double tc) {
        cplx w = boundary.point(t, tc);
        cplx acc(0.0);
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * w + *it;
        return with_exp ? acc * std::exp(w) : acc;
    };
    CurveMeasure m(f.carrier);
    m.densities.emplace_back(0, std::move(d));
    f.terms.push_back({n + 1, m});
    return f;
}

Terms encircle_reduce(const std::vector<InteriorPoint>& mu, const LipschitzCurve& boundary, double t0,
                      int n) {
    require_closed(boundary);
    if (n < 1) throw InvalidArgument("encircle_reduce needs n >= 1");
    if (signed_area(boundary) <= 0.0) throw InvalidArgument("boundary must be counterclockwise");
    const double L = boundary.length();
    if (!(t0 >= 0.0 && t0 < L)) throw InvalidArgument("t0 outside [0, L)");
    for (const auto& p : mu) {
        if (boundary.distance(p.w) <= 1e-9) throw SupportTouchesBoundary("support point on the boundary");
        if (winding_number(boundary, p.w) != 1)
            throw SupportTouchesBoundary("support point outside the enclosed domain");
    }
    if (mu.empty()) return {};
    auto sys = single_curve_system(boundary);

    // Unwrapped argument of gamma(t) - w along the contour, starting just after t0.
    struct Branch {
        cplx w, c;
        std::vector<double> u;   // arc position from t0 of each visited vertex
        std::vector<cplx> pt;    // the vertex
        std::vector<double> th;  // unwrapped argument at the vertex
    };
    const auto& par = boundary.params();
    const auto& v = boundary.vertices();
    std::vector<std::pair<double, cplx>> visit{{0.0, boundary.point(t0)}};
    for (std::size_t i = 1; i < par.size(); ++i) {
        double u = par[i] > t0 ? par[i] - t0 : par[i] + L - t0;
        if (u > 0.0 && u < L) visit.emplace_back(u, v[i]);
    }
    std::sort(visit.begin(), visit.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<Branch> br;
    cplx total(0.0);
    for (const auto& p : mu) {
        Branch b{p.w, p.c, {}, {}, {}};
        double th = std::arg(visit[0].second - p.w);
        for (std::size_t i = 0; i < visit.size(); ++i) {
            if (i > 0) th += std::arg((visit[i].second - p.w) / (visit[i - 1].second - p.w));
            b.u.push_back(visit[i].first);
            b.pt.push_back(visit[i].second);
            b.th.push_back(th);
        }
        br.push_back(std::move(b));
        total += p.c;
    }
    Density d;
    const double scale = n / (2.0 * kPi);
    d.fn = [br, boundary, t0, L, scale](double t, double tc) {
        cplx z = boundary.point(t, tc);
        double u = t >= t0 ? t - t0 : t + L - t0;
        cplx acc(0.0);
        for (const auto& b : br) {
            std::size_t k = std::upper_bound(b.u.begin(), b.u.end(), u) - b.u.begin() - 1;
            double th = b.th[k] + std::arg((z - b.w) / (b.pt[k] - b.w));
            acc += b.c * cplx(std::log(std::abs(z - b.w)), th);
        }
        return acc * scale / kI;
    };
    if (t0 > 0.0) d.breaks.push_back(t0);
    Terms out;
    CurveMeasure pole(sys);
    pole.atoms.push_back({0, t0, total});
    out.push_back({n, pole});
    CurveMeasure dens(sys);
    dens.densities.emplace_back(0, std::move(d));
    out.push_back({n + 1, dens});
    return out;
}

}  // namespace curvecalc
