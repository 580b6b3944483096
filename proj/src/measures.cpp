#include "curvecalc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <sstream>

namespace curvecalc {

namespace {

std::string num_json(cplx c) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << c.real() << "," << c.imag() << "]";
    return os.str();
}

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

cplx ipow(cplx z, int n) {
    cplx r(1.0);
    for (int k = 0; k < n; ++k) r *= z;
    return r;
}

}  // namespace

// ---------------------------------------------------------------- densities

Density Density::constant(cplx c) {
    Density d;
    d.fn = [c](double, double) { return c; };
    d.spec = "{\"kind\":\"const\",\"data\":" + num_json(c) + "}";
    return d;
}

Density Density::polynomial(std::vector<cplx> coeffs) {
    Density d;
    std::string s = "{\"kind\":\"poly\",\"data\":[";
    for (std::size_t k = 0; k < coeffs.size(); ++k) s += (k ? "," : "") + num_json(coeffs[k]);
    d.spec = s + "]}";
    d.fn = [coeffs = std::move(coeffs)](double t, double) {
        cplx acc(0.0);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
        return acc;
    };
    return d;
}

Density Density::table(std::vector<double> ts, std::vector<cplx> values, bool holder) {
    if (ts.size() != values.size() || ts.size() < 2)
        throw InvalidArgument("table density needs matching t and value lists of length >= 2");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1])) throw InvalidArgument("table density parameters must increase");
    Density d;
    std::ostringstream os;
    os.precision(17);
    os << "{\"kind\":\"table\",\"holder\":" << (holder ? "true" : "false") << ",\"data\":[";
    for (std::size_t i = 0; i < ts.size(); ++i)
        os << (i ? "," : "") << "[" << ts[i] << "," << values[i].real() << "," << values[i].imag()
           << "]";
    os << "]}";
    d.spec = os.str();
    d.lo = ts.front();
    d.hi = ts.back();
    d.breaks = ts;
    d.holder = holder;
    d.fn = [ts = std::move(ts), values = std::move(values)](double t, double) {
        auto it = std::upper_bound(ts.begin(), ts.end(), t);
        std::size_t j = std::clamp<std::size_t>(std::distance(ts.begin(), it), 1, ts.size() - 1);
        double u = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
        return (1.0 - u) * values[j - 1] + u * values[j];
    };
    return d;
}

Density Density::restricted(Density d, double lo, double hi) {
    bool keep_lo = lo <= d.lo, keep_hi = hi >= d.hi;
    d.lo = std::max(d.lo, lo);
    d.hi = std::min(d.hi, hi);
    if (!keep_lo) d.sing_lo = false;
    if (!keep_hi) d.sing_hi = false;
    d.breaks.push_back(d.lo);
    if (std::isfinite(d.hi)) d.breaks.push_back(d.hi);
    d.spec.clear();
    return d;
}

Density Density::scaled(cplx c) const {
    Density d = *this;
    auto f = fn;
    d.fn = [f, c](double t, double tc) { return c * f(t, tc); };
    d.spec.clear();
    return d;
}

// ----------------------------------------------------------------- measures

CurveMeasure CurveMeasure::scaled(cplx c) const {
    CurveMeasure m(sys);
    for (auto a : atoms) {
        a.w *= c;
        m.atoms.push_back(a);
    }
    for (const auto& [cv, d] : densities) m.densities.emplace_back(cv, d.scaled(c));
    return m;
}

CurveMeasure& CurveMeasure::operator+=(const CurveMeasure& o) {
    if (!sys) sys = o.sys;
    atoms.insert(atoms.end(), o.atoms.begin(), o.atoms.end());
    densities.insert(densities.end(), o.densities.begin(), o.densities.end());
    return *this;
}

CurveMeasure CurveMeasure::restricted_to_component(int comp) const {
    CurveMeasure m(sys);
    for (const auto& a : atoms)
        if (sys->component_of(a.curve) == comp) m.atoms.push_back(a);
    for (const auto& cd : densities)
        if (sys->component_of(cd.first) == comp) m.densities.push_back(cd);
    return m;
}

CurveMeasure CurveMeasure::rebased(CurveSystemPtr s) const {
    CurveMeasure m = *this;
    m.sys = std::move(s);
    return m;
}

namespace {

std::vector<const Density*> densities_on(const CurveMeasure& mu, int c) {
    std::vector<const Density*> r;
    for (const auto& [cv, d] : mu.densities)
        if (cv == c) r.push_back(&d);
    return r;
}

}  // namespace

double total_variation(const CurveMeasure& mu, const QuadratureRule& rule) {
    double tv = 0.0;
    for (const auto& a : mu.atoms) tv += std::abs(a.w);
    const auto& sys = *mu.sys;
    for (std::size_t c = 0; c < sys.num_curves(); ++c) {
        auto ds = densities_on(mu, static_cast<int>(c));
        if (ds.empty()) continue;
        const auto& cv = sys.curve(c);
        std::vector<Break> bs;
        bool slo = false, shi = false;
        for (double t : cv.params()) bs.push_back({t, false});
        for (const auto* d : ds) {
            for (double t : d->breaks) bs.push_back({t, false});
            for (double t : d->singular) bs.push_back({t, true});
            if (d->lo > 0.0) bs.push_back({d->lo, d->sing_lo});
            else slo = slo || d->sing_lo;
            if (d->hi < cv.length()) bs.push_back({d->hi, d->sing_hi});
            else shi = shi || d->sing_hi;
        }
        auto f = [&](double t, double tc) {
            cplx v(0.0);
            for (const auto* d : ds) v += (*d)(t, tc);
            std::size_t j = cv.segment_of(t);
            cplx P = cv.point(t, tc);
            return std::abs(v) * std::abs(sys.dgamma_on_segment(static_cast<int>(c), j, P));
        };
        tv += integrate_pieces(f, 0.0, cv.length(), cv.length(), bs, slo, shi, 0.0, rule);
    }
    return tv;
}

cplx total_mass(const CurveMeasure& mu, const QuadratureRule& rule) {
    cplx m(0.0);
    for (const auto& a : mu.atoms) m += a.w;
    for (const auto& [c, d] : mu.densities)
        m += integrate_density(*mu.sys, c, d, [](double, double, cplx, cplx dg) { return dg; },
                               cplx(0.0), rule, nullptr);
    return m;
}

CurveMeasure omega_measure(const LipschitzCurve& c, double a1, double b1) {
    CurveMeasure m(single_curve_system(c));
    if (a1 == b1) return m;
    double lo = std::min(a1, b1), hi = std::max(a1, b1);
    cplx v = a1 < b1 ? cplx(-1.0) : cplx(1.0);
    m.densities.emplace_back(0, Density::restricted(Density::constant(v), lo, hi));
    return m;
}

namespace {

/// Density of the beta-type kernel along a path from z1 to z2, against the
/// path differential; sigma converts it to the curve orientation.
cplx xi_kernel(cplx zw, cplx z1, cplx z2, int n1, int n2, double coef) {
    int N = n1 + n2 + 2;
    return coef * ipow(zw - z1, n2) * ipow(z2 - zw, n1) / ipow(z2 - z1, N - 1);
}

}  // namespace

CurveMeasure xi_measure(const LipschitzCurve& c, double a1, double b1, int n1, int n2) {
    auto sys = single_curve_system(c);
    CurveMeasure m(sys);
    if (a1 == b1) {
        m.atoms.push_back({0, a1, 1.0});
        return m;
    }
    double coef = factorial(n1 + n2 + 1) / (factorial(n1) * factorial(n2));
    cplx z1 = c.point(a1), z2 = c.point(b1);
    double sigma = a1 < b1 ? 1.0 : -1.0;
    Density d;
    d.fn = [c, z1, z2, n1, n2, coef, sigma](double t, double tc) {
        return sigma * xi_kernel(c.point(t, tc), z1, z2, n1, n2, coef);
    };
    d = Density::restricted(d, std::min(a1, b1), std::max(a1, b1));
    m.densities.emplace_back(0, d);
    return m;
}

// ------------------------------------------------------------ choice function

ChoiceFunction::ChoiceFunction(CurveSystemPtr sys) : sys_(std::move(sys)) {
    const std::size_t nn = sys_->num_nodes(), nc = sys_->num_curves();
    std::vector<std::vector<std::pair<int, int>>> adj(nn);  // (neighbour, curve)
    for (std::size_t c = 0; c < nc; ++c) {
        auto e = sys_->curve_nodes(c);
        if (e[0] == e[1]) continue;
        adj[e[0]].push_back({e[1], static_cast<int>(c)});
        adj[e[1]].push_back({e[0], static_cast<int>(c)});
    }
    parent_.assign(nn, -2);
    parent_edge_.assign(nn, -1);
    depth_.assign(nn, 0);
    for (std::size_t r = 0; r < nn; ++r) {
        if (parent_[r] != -2) continue;
        parent_[r] = -1;
        std::deque<int> q{static_cast<int>(r)};
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (auto [y, c] : adj[x]) {
                if (parent_[y] != -2) continue;
                parent_[y] = x;
                parent_edge_[y] = c;
                depth_[y] = depth_[x] + 1;
                q.push_back(y);
            }
        }
    }
    ends_.assign(nc, std::vector<std::pair<int, int>>(nc, {0, 0}));
    for (std::size_t a = 0; a < nc; ++a)
        for (std::size_t b = 0; b < nc; ++b)
            if (a != b && sys_->component_of(a) == sys_->component_of(b))
                ends_[a][b] = best_ends(static_cast<int>(a), static_cast<int>(b));
}

std::vector<std::pair<int, int>> ChoiceFunction::node_path(int na, int nb) const {
    std::vector<std::pair<int, int>> up, down;
    auto step_sign = [&](int from, int curve) {
        return sys_->curve_nodes(curve)[0] == from ? 1 : -1;
    };
    int a = na, b = nb;
    while (depth_[a] > depth_[b]) {
        up.push_back({parent_edge_[a], step_sign(a, parent_edge_[a])});
        a = parent_[a];
    }
    while (depth_[b] > depth_[a]) {
        down.push_back({parent_edge_[b], -step_sign(b, parent_edge_[b])});
        b = parent_[b];
    }
    while (a != b) {
        up.push_back({parent_edge_[a], step_sign(a, parent_edge_[a])});
        a = parent_[a];
        down.push_back({parent_edge_[b], -step_sign(b, parent_edge_[b])});
        b = parent_[b];
    }
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

std::pair<int, int> ChoiceFunction::best_ends(int c1, int c2) const {
    std::pair<int, int> best{0, 0};
    double best_len = std::numeric_limits<double>::infinity();
    std::size_t best_steps = std::numeric_limits<std::size_t>::max();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            auto steps = node_path(sys_->curve_nodes(c1)[x], sys_->curve_nodes(c2)[y]);
            double len = 0.0;
            for (auto [c, s] : steps) len += sys_->curve(c).length();
            if (steps.size() < best_steps ||
                (steps.size() == best_steps && len < best_len - 1e-12)) {
                best_steps = steps.size();
                best_len = len;
                best = {x, y};
            }
        }
    return best;
}

int ChoiceFunction::exit_end(int c1, double s1, int c2) const {
    const auto& cv = sys_->curve(c1);
    if (cv.closed()) return s1 < 0.5 * cv.length() ? 0 : 1;
    return ends_[c1][c2].first;
}

int ChoiceFunction::entry_end(int c1, int c2, double s2) const {
    const auto& cv = sys_->curve(c2);
    if (cv.closed()) return s2 < 0.5 * cv.length() ? 0 : 1;
    return ends_[c1][c2].second;
}

std::vector<std::pair<int, int>> ChoiceFunction::tree_steps(int c1, int c2) const {
    auto [x, y] = ends_[c1][c2];
    return node_path(sys_->curve_nodes(c1)[x], sys_->curve_nodes(c2)[y]);
}

std::optional<Path> ChoiceFunction::path(CurvePoint p1, CurvePoint p2) const {
    if (sys_->component_of(p1.curve) != sys_->component_of(p2.curve)) return std::nullopt;
    if (p1.curve == p2.curve) return Path{{p1.curve, p1.t, p2.t}};
    Path path;
    const double L1 = sys_->curve(p1.curve).length(), L2 = sys_->curve(p2.curve).length();
    int x = exit_end(p1.curve, p1.t, p2.curve);
    path.push_back({p1.curve, p1.t, x ? L1 : 0.0});
    for (auto [c, s] : tree_steps(p1.curve, p2.curve)) {
        double L = sys_->curve(c).length();
        path.push_back({c, s > 0 ? 0.0 : L, s > 0 ? L : 0.0});
    }
    int y = entry_end(p1.curve, p2.curve, p2.t);
    path.push_back({p2.curve, y ? L2 : 0.0, p2.t});
    return path;
}

CurvePoint locate(const CurveSystem& sys, cplx z, double tol) {
    CurvePoint p;
    double d = sys.distance(z, &p);
    if (d > tol) throw BaseOffCarrier("point is not on the carrier (distance " + std::to_string(d) + ")");
    return p;
}

std::vector<Break> curve_breaks(const CurveSystem& sys, int c) {
    std::vector<Break> bs;
    for (double t : sys.curve(c).params()) bs.push_back({t, false});
    return bs;
}

// -------------------------------------------------------- additive reduction

namespace {

/// F(t) = mu({s < t}) restricted to one curve, with prefix sums cached at
/// the breakpoints.
class Cumulative {
public:
    Cumulative(CurveSystemPtr sys, int c, const CurveMeasure& mu, const QuadratureRule& rule)
        : sys_(std::move(sys)), c_(c), rule_(rule) {
        const auto& cv = sys_->curve(c);
        for (const auto& a : mu.atoms)
            if (a.curve == c) atoms_.push_back({a.t, a.w});
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [cv2, d] : mu.densities)
            if (cv2 == c) dens_.push_back(d);
        std::vector<Break> bs;
        for (double t : cv.params()) bs.push_back({t, false});
        for (const auto& d : dens_) {
            for (double t : d.breaks) bs.push_back({t, false});
            for (double t : d.singular) bs.push_back({t, true});
            if (d.lo > 0.0 && d.lo < cv.length()) bs.push_back({d.lo, d.sing_lo});
            if (d.hi < cv.length()) bs.push_back({d.hi, d.sing_hi});
        }
        std::sort(bs.begin(), bs.end(), [](const Break& x, const Break& y) { return x.t < y.t; });
        for (const auto& b : bs) {
            if (b.t < 0.0 || b.t > cv.length()) continue;
            if (!knots_.empty() && b.t - knots_.back() <= 1e-14 * std::max(1.0, cv.length()))
                continue;
            knots_.push_back(b.t);
        }
        prefix_.assign(knots_.size(), 0.0);
        for (std::size_t i = 1; i < knots_.size(); ++i)
            prefix_[i] = prefix_[i - 1] + density_integral(knots_[i - 1], knots_[i]);
        total_ = prefix_.back();
        for (const auto& a : atoms_) total_ += a.second;
    }

    cplx density_integral(double a, double b) const {
        cplx acc(0.0);
        for (const auto& d : dens_)
            acc += integrate_density(*sys_, c_, d,
                                     [](double, double, cplx, cplx dg) { return dg; }, cplx(0.0),
                                     rule_, nullptr, {}, a, b);
        return acc;
    }

    /// mu({s < t})
    cplx below(double t) const {
        cplx acc(0.0);
        for (const auto& a : atoms_) {
            if (a.first >= t) break;
            acc += a.second;
        }
        if (dens_.empty()) return acc;
        auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
        std::size_t j = std::distance(knots_.begin(), it);
        if (j == 0) return acc;
        --j;
        return acc + prefix_[j] + density_integral(knots_[j], t);
    }
    /// mu({s > t})
    cplx above(double t) const {
        cplx at(0.0);
        for (const auto& a : atoms_)
            if (a.first == t) at += a.second;
        return total_ - below(t) - at;
    }
    cplx total() const { return total_; }
    std::vector<double> atom_positions() const {
        std::vector<double> r;
        for (const auto& a : atoms_) r.push_back(a.first);
        return r;
    }
    const std::vector<double>& knots() const { return knots_; }

private:
    CurveSystemPtr sys_;
    int c_;
    QuadratureRule rule_;
    std::vector<std::pair<double, cplx>> atoms_;
    std::vector<Density> dens_;
    std::vector<double> knots_;
    std::vector<cplx> prefix_;
    cplx total_{0.0};
};

}  // namespace

AdditiveReduction additive_reduce(const CurveMeasure& mu, int n, CurvePoint base,
                                  const ChoiceFunction& phi, const QuadratureRule& rule) {
    if (n < 1) throw InvalidArgument("additive reduction needs n >= 1");
    const auto& sysp = mu.sys;
    const auto& sys = *sysp;
    if (base.curve < 0 || base.curve >= static_cast<int>(sys.num_curves()))
        throw BaseOffCarrier("base curve index out of range");
    const int comp = sys.component_of(base.curve);
    for (const auto& a : mu.atoms)
        if (sys.component_of(a.curve) != comp)
            throw DisconnectedWithoutChoice("measure has mass outside the base component");
    for (const auto& cd : mu.densities)
        if (sys.component_of(cd.first) != comp)
            throw DisconnectedWithoutChoice("measure has mass outside the base component");

    AdditiveReduction out;
    out.theta = CurveMeasure(sysp);
    if (mu.empty()) return out;

    const int c0 = base.curve;
    const double t0 = base.t;
    const std::size_t nc = sys.num_curves();
    std::vector<std::shared_ptr<Cumulative>> cum(nc);
    std::vector<cplx> mass(nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
        if (sys.component_of(c) != comp) continue;
        cum[c] = std::make_shared<Cumulative>(sysp, static_cast<int>(c), mu, rule);
        mass[c] = cum[c]->total();
        out.c += mass[c];
    }

    // pass-through constants: on c0 split at t0, elsewhere one value per curve
    cplx pass_lo(0.0), pass_hi(0.0);
    std::vector<cplx> pass(nc, 0.0);
    std::vector<int> entry(nc, 0);
    for (std::size_t c = 0; c < nc; ++c) {
        if (static_cast<int>(c) == c0 || !cum[c] || mass[c] == cplx(0.0)) continue;
        int x = phi.exit_end(c0, t0, static_cast<int>(c));
        if (x == 0) pass_lo += mass[c];  // traversed backwards on [0, t0]
        else pass_hi -= mass[c];         // forwards on [t0, L]
        for (auto [e, s] : phi.tree_steps(c0, static_cast<int>(c))) pass[e] -= double(s) * mass[c];
    }
    for (std::size_t c = 0; c < nc; ++c) {
        if (!cum[c]) continue;
        const auto& cv = sys.curve(c);
        const double L = cv.length();
        auto F = cum[c];
        Density d;
        if (static_cast<int>(c) == c0) {
            d.fn = [F, t0, pass_lo, pass_hi](double t, double) {
                return t < t0 ? F->below(t) + pass_lo : -F->above(t) + pass_hi;
            };
            d.breaks.push_back(t0);
        } else if (cv.closed()) {
            const double h = 0.5 * L;
            cplx pc = pass[c];
            d.fn = [F, h, pc](double t, double) {
                return t < h ? -(F->below(h) - F->below(t)) + pc : F->below(t) - F->below(h) + pc;
            };
            d.breaks.push_back(h);
        } else {
            int y = phi.entry_end(c0, static_cast<int>(c), 0.0);
            cplx pc = pass[c];
            if (y == 0) d.fn = [F, pc](double t, double) { return -F->above(t) + pc; };
            else d.fn = [F, pc](double t, double) { return F->below(t) + pc; };
        }
        for (double t : F->knots()) d.breaks.push_back(t);
        for (double t : F->atom_positions()) d.breaks.push_back(t);
        out.theta.densities.emplace_back(static_cast<int>(c), std::move(d));
    }
    return out;
}

// --------------------------------------------------- multiplicative reduction

namespace {

struct Piece {
    int curve = 0;
    bool atom = false;
    double t = 0.0;
    cplx w{0.0};
    Density d;
};

std::vector<Piece> pieces_of(const CurveMeasure& mu) {
    std::vector<Piece> r;
    for (const auto& a : mu.atoms) r.push_back({a.curve, true, a.t, a.w, {}});
    for (const auto& [c, d] : mu.densities) r.push_back({c, false, 0.0, 0.0, d});
    return r;
}

struct Range {
    double lo, hi;
    bool lo_incl, hi_incl;
};

struct MulContext {
    CurveSystemPtr sys;
    ChoiceFunction phi;
    int n1, n2, N;
    double coef;
    QuadratureRule rule;
    std::vector<Piece> p1, p2;

    MulContext(CurveSystemPtr s, ChoiceFunction ph, int a, int b, QuadratureRule r)
        : sys(std::move(s)), phi(std::move(ph)), n1(a), n2(b), N(a + b + 2),
          coef(factorial(a + b + 1) / (factorial(a) * factorial(b))), rule(r) {
        rule.paired = true;
    }

    cplx point(int c, double s) const {
        const auto& cv = sys->curve(c);
        return sys->embedding()(cv.point(s, cv.length() - s));
    }

    /// Sum over the piece restricted to the range of w * g(s, z) (atoms) or
    /// int d(s) g(s, z) dgamma(s) (densities).
    template <class G>
    cplx integrate_piece(const Piece& P, const Range& R, G&& g,
                         const std::vector<Break>& extra = {}) const {
        if (P.atom) {
            bool in = (P.t > R.lo || (R.lo_incl && P.t == R.lo)) &&
                      (P.t < R.hi || (R.hi_incl && P.t == R.hi));
            return in ? P.w * g(P.t, point(P.curve, P.t)) : cplx(0.0);
        }
        return integrate_density(
            *sys, P.curve, P.d, [&](double s, double, cplx z, cplx dg) { return g(s, z) * dg; },
            cplx(0.0), rule, nullptr, extra, R.lo, R.hi);
    }

    cplx kernel(cplx zw, cplx z1, cplx z2) const {
        if (std::abs(z2 - z1) <= 1e-13) return 0.0;
        return xi_kernel(zw, z1, z2, n1, n2, coef);
    }

    /// Integral over {a < t < b} of K(zw, z(first), z(second)) dA(a) dB(b) dgamma dgamma * sigma
    /// on curve c; a_is_first says whether a plays the role of s1. The domain is cut
    /// into rectangles on which both points stay on one segment; only the square
    /// at the corner (t, t) is singular and gets a Duffy split.
    cplx duffy(int c, const Density& dA, const Density& dB, double t, cplx zw, bool a_is_first,
               double sigma) const {
        const auto& cv = sys->curve(c);
        const double L = cv.length();
        const double A = std::max(0.0, dA.lo), B = std::min(L, dB.hi);
        if (!(t > A && B > t)) return 0.0;
        struct Node {
            cplx z, dg, v;
        };
        auto node = [&](const Density& d, double s) -> Node {
            std::size_t j = cv.segment_of(s);
            cplx Pp = cv.point(s, L - s);
            return {sys->embedding()(Pp), sys->dgamma_on_segment(c, j, Pp), d.fn(s, L - s)};
        };
        auto F = [&](const Node& na, const Node& nb) -> cplx {
            cplx k = a_is_first ? kernel(zw, na.z, nb.z) : kernel(zw, nb.z, na.z);
            return sigma * k * na.v * nb.v * na.dg * nb.dg;
        };
        auto cuts = [&](const Density& d, double lo, double hi, bool sing_lo, bool sing_hi) {
            std::vector<Break> bs{{lo, sing_lo}, {hi, sing_hi}};
            for (double v : cv.params()) bs.push_back({v, false});
            for (double v : d.breaks) bs.push_back({v, false});
            for (double v : d.singular) bs.push_back({v, true});
            std::sort(bs.begin(), bs.end(), [](const Break& x, const Break& y) { return x.t < y.t; });
            std::vector<Break> r;
            for (const auto& b : bs) {
                if (b.t < lo || b.t > hi) continue;
                if (!r.empty() && b.t - r.back().t <= 1e-14 * std::max(1.0, L)) {
                    r.back().singular = r.back().singular || b.singular;
                    if (b.t == lo || b.t == hi) r.back().t = b.t;
                    continue;
                }
                r.push_back(b);
            }
            return r;
        };
        const auto ac = cuts(dA, A, t, dA.sing_lo && A == std::max(0.0, dA.lo), false);
        const auto bc = cuts(dB, t, B, false, dB.sing_hi && B == std::min(L, dB.hi));

        auto rect = [&](double a0, double a1, bool sa0, bool sa1, double b0, double b1, bool sb0,
                        bool sb1) {
            // graded cuts toward the corner nearest (t, t)
            auto graded = [](double from, double to, double d) {
                std::vector<Break> g;
                const double len = std::abs(to - from), dir = to > from ? 1.0 : -1.0;
                for (double h = d; h < len; h *= 4.0) g.push_back({from + dir * h, false});
                return g;
            };
            auto outer = [&](double a, double) {
                const Node na = node(dA, a);
                auto inner = [&](double b, double) { return F(na, node(dB, b)); };
                return integrate_pieces(inner, b0, b1, L, graded(b0, b1, (t - a) + (b0 - t)), sb0, sb1,
                                        cplx(0.0), rule);
            };
            return integrate_pieces(outer, a0, a1, L, graded(a1, a0, (t - a1) + (b0 - t)), sa0, sa1,
                                    cplx(0.0), rule);
        };
        cplx acc(0.0);
        for (std::size_t i = 0; i + 1 < ac.size(); ++i) {
            const double a0 = ac[i].t, a1 = ac[i + 1].t;
            const bool sa0 = ac[i].singular, sa1 = ac[i + 1].singular;
            for (std::size_t k = 0; k + 1 < bc.size(); ++k) {
                const double b0 = bc[k].t, b1 = bc[k + 1].t;
                const bool sb0 = bc[k].singular, sb1 = bc[k + 1].singular;
                if (a1 != t || b0 != t) {
                    acc += rect(a0, a1, sa0, sa1, b0, b1, sb0, sb1);
                    continue;
                }
                const double h = std::min(t - a0, b1 - t);
                const bool ea = (h == t - a0) && sa0, eb = (h == b1 - t) && sb1;
                // a = t - p, b = t + p r
                auto tri1 = [&](double p, double) {
                    const Node na = node(dA, t - p);
                    auto inner = [&](double r, double) { return p * F(na, node(dB, t + p * r)); };
                    return integrate_pieces(inner, 0.0, 1.0, 1.0, {}, false, false, cplx(0.0), rule);
                };
                // b = t + q, a = t - q r
                auto tri2 = [&](double q, double) {
                    const Node nb = node(dB, t + q);
                    auto inner = [&](double r, double) { return q * F(node(dA, t - q * r), nb); };
                    return integrate_pieces(inner, 0.0, 1.0, 1.0, {}, false, false, cplx(0.0), rule);
                };
                acc += integrate_pieces(tri1, 0.0, h, h, {}, false, ea, cplx(0.0), rule);
                acc += integrate_pieces(tri2, 0.0, h, h, {}, false, eb, cplx(0.0), rule);
                if (t - h > a0) acc += rect(a0, t - h, sa0, false, t, b1, false, sb1);
                if (t + h < b1) acc += rect(t - h, t, false, false, t + h, b1, false, sb1);
            }
        }
        return acc;
    }

    /// Within-component top-level density at parameter t of curve cw.
    cplx theta_top(int cw, double t, double tc) const {
        const auto& cv = sys->curve(cw);
        const double L = cv.length();
        const cplx zw = sys->embedding()(cv.point(t, tc));
        const int comp = sys->component_of(cw);
        const Range full{0.0, std::numeric_limits<double>::infinity(), true, true};
        cplx acc(0.0);
        for (const auto& A1 : p1) {
            if (sys->component_of(A1.curve) != comp) continue;
            for (const auto& A2 : p2) {
                if (sys->component_of(A2.curve) != comp) continue;
                const int c1 = A1.curve, c2 = A2.curve;
                if (c1 == c2) {
                    if (c1 != cw) continue;
                    if (!A1.atom && !A2.atom) {
                        acc += duffy(cw, A1.d, A2.d, t, zw, true, 1.0);
                        acc += duffy(cw, A2.d, A1.d, t, zw, false, -1.0);
                        continue;
                    }
                    // one or both atoms: s1 < t < s2 (sigma +1) and s2 < t < s1 (sigma -1)
                    const Range below{0.0, t, true, false}, above{t, L, false, true};
                    acc += integrate_piece(A1, below, [&](double, cplx z1) {
                        return integrate_piece(A2, above, [&](double, cplx z2) {
                            return kernel(zw, z1, z2);
                        });
                    });
                    acc -= integrate_piece(A1, above, [&](double, cplx z1) {
                        return integrate_piece(A2, below, [&](double, cplx z2) {
                            return kernel(zw, z1, z2);
                        });
                    });
                    continue;
                }
                const auto& C1 = sys->curve(c1);
                const auto& C2 = sys->curve(c2);
                if (cw == c1) {
                    // w between s1 and the exit endpoint of c1
                    std::vector<std::pair<Range, double>> regions;
                    if (C1.closed()) {
                        double h = 0.5 * L;
                        if (t < h) regions.push_back({{t, h, false, false}, -1.0});
                        else regions.push_back({{h, t, true, false}, 1.0});
                    } else if (phi.exit_end(c1, 0.0, c2) == 0) {
                        regions.push_back({{t, L, false, true}, -1.0});
                    } else {
                        regions.push_back({{0.0, t, true, false}, 1.0});
                    }
                    for (const auto& [R, sg] : regions)
                        acc += sg * integrate_piece(A1, R, [&](double, cplx z1) {
                            return integrate_piece(A2, full, [&](double, cplx z2) {
                                return kernel(zw, z1, z2);
                            });
                        });
                    continue;
                }
                if (cw == c2) {
                    std::vector<std::pair<Range, double>> regions;
                    if (C2.closed()) {
                        double h = 0.5 * L;
                        if (t < h) regions.push_back({{t, h, false, false}, 1.0});
                        else regions.push_back({{h, t, true, false}, -1.0});
                    } else if (phi.entry_end(c1, c2, 0.0) == 0) {
                        regions.push_back({{t, L, false, true}, 1.0});
                    } else {
                        regions.push_back({{0.0, t, true, false}, -1.0});
                    }
                    for (const auto& [R, sg] : regions)
                        acc += sg * integrate_piece(A1, full, [&](double, cplx z1) {
                            return integrate_piece(A2, R, [&](double, cplx z2) {
                                return kernel(zw, z1, z2);
                            });
                        });
                    continue;
                }
                for (auto [e, sg] : phi.tree_steps(c1, c2)) {
                    if (e != cw) continue;
                    acc += double(sg) * integrate_piece(A1, full, [&](double, cplx z1) {
                        return integrate_piece(A2, full, [&](double, cplx z2) {
                            return kernel(zw, z1, z2);
                        });
                    });
                }
                (void)C2;
            }
        }
        return acc;
    }

    /// sum over pieces of mu_other outside component comp of
    /// int mu_other(s) / (s - z)^m
    cplx far_moment(const std::vector<Piece>& other, int comp, cplx z, int m) const {
        const Range full{0.0, std::numeric_limits<double>::infinity(), true, true};
        cplx acc(0.0);
        for (const auto& P : other) {
            if (sys->component_of(P.curve) == comp) continue;
            acc += integrate_piece(P, full, [&](double, cplx zs) { return 1.0 / ipow(zs - z, m); });
        }
        return acc;
    }
};

}  // namespace

std::vector<CurveMeasure> multiplicative_reduce(const CurveMeasure& mu1, int n1,
                                                const CurveMeasure& mu2, int n2,
                                                const ChoiceFunction& phi,
                                                const QuadratureRule& rule) {
    if (n1 < 0 || n2 < 0) throw InvalidArgument("levels must be nonnegative");
    if (mu1.sys.get() != mu2.sys.get() && mu1.sys && mu2.sys &&
        mu1.sys->num_curves() != mu2.sys->num_curves())
        throw InvalidArgument("measures live on different carriers");
    const auto sysp = mu1.sys ? mu1.sys : mu2.sys;
    const auto& sys = *sysp;
    auto ctx = std::make_shared<MulContext>(sysp, phi, n1, n2, rule);
    ctx->p1 = pieces_of(mu1);
    ctx->p2 = pieces_of(mu2);
    const int N = n1 + n2 + 2;
    std::vector<CurveMeasure> theta(N, CurveMeasure(sysp));

    // atom pairs sitting at the same point
    std::vector<char> comp_has1(sys.num_components(), 0), comp_has2(sys.num_components(), 0);
    for (const auto& P : ctx->p1) comp_has1[sys.component_of(P.curve)] = 1;
    for (const auto& P : ctx->p2) comp_has2[sys.component_of(P.curve)] = 1;
    for (const auto& A1 : ctx->p1) {
        if (!A1.atom) continue;
        for (const auto& A2 : ctx->p2) {
            if (!A2.atom) continue;
            if (std::abs(ctx->point(A1.curve, A1.t) - ctx->point(A2.curve, A2.t)) <= 1e-12)
                theta[N - 1].atoms.push_back({A1.curve, A1.t, A1.w * A2.w});
        }
    }

    // within-component top-level densities
    for (std::size_t c = 0; c < sys.num_curves(); ++c) {
        int comp = sys.component_of(c);
        if (!comp_has1[comp] || !comp_has2[comp]) continue;
        const auto& cv = sys.curve(c);
        const double L = cv.length();
        bool single = true;
        for (std::size_t c2 = 0; c2 < sys.num_curves(); ++c2)
            if (c2 != c && sys.component_of(c2) == comp) single = false;
        Density d;
        int cw = static_cast<int>(c);
        d.fn = [ctx, cw](double t, double tc) { return ctx->theta_top(cw, t, tc); };
        double lo = L, hi = 0.0;
        for (const auto* ps : {&ctx->p1, &ctx->p2})
            for (const auto& P : *ps) {
                if (P.curve != cw) continue;
                if (P.atom) {
                    d.singular.push_back(P.t);
                    lo = std::min(lo, P.t);
                    hi = std::max(hi, P.t);
                } else {
                    double a = std::max(0.0, P.d.lo), b = std::min(L, P.d.hi);
                    lo = std::min(lo, a);
                    hi = std::max(hi, b);
                    d.breaks.insert(d.breaks.end(), P.d.breaks.begin(), P.d.breaks.end());
                    d.singular.insert(d.singular.end(), P.d.singular.begin(), P.d.singular.end());
                    if (P.d.sing_lo) d.singular.push_back(a);
                    else d.breaks.push_back(a);
                    if (P.d.sing_hi) d.singular.push_back(b);
                    else d.breaks.push_back(b);
                }
            }
        if (single) {
            if (!(hi > lo)) continue;
            d.lo = lo;
            d.hi = hi;
        } else {
            d.sing_lo = d.sing_hi = true;
        }
        theta[N - 1].densities.emplace_back(cw, std::move(d));
    }

    // cross-component partial fractions
    if (sys.num_components() > 1) {
        for (int side = 0; side < 2; ++side) {
            const auto& mine = side == 0 ? ctx->p1 : ctx->p2;
            const auto& other = side == 0 ? ctx->p2 : ctx->p1;
            const int na = side == 0 ? n1 : n2, nb = side == 0 ? n2 : n1;
            for (int j = 0; j <= na; ++j) {
                const double cj = (j % 2 ? -1.0 : 1.0) * factorial(j + nb) / (factorial(j) * factorial(nb));
                const int level = na - j + 1, m = nb + j + 1;
                for (const auto& P : mine) {
                    int comp = sys.component_of(P.curve);
                    if (P.atom) {
                        cplx g = ctx->far_moment(other, comp, ctx->point(P.curve, P.t), m);
                        if (g != cplx(0.0)) theta[level - 1].atoms.push_back({P.curve, P.t, cj * P.w * g});
                        continue;
                    }
                    bool any = false;
                    for (const auto& Q : other)
                        if (sys.component_of(Q.curve) != comp) any = true;
                    if (!any) continue;
                    Density d = P.d;
                    d.spec.clear();
                    int c = P.curve;
                    const bool mine_first = side == 0;
                    auto base = P.d.fn;
                    d.fn = [ctx, base, c, comp, m, cj, mine_first](double t, double tc) {
                        const auto& oth = mine_first ? ctx->p2 : ctx->p1;
                        cplx z = ctx->point(c, t);
                        return cj * base(t, tc) * ctx->far_moment(oth, comp, z, m);
                    };
                    theta[level - 1].densities.emplace_back(c, std::move(d));
                }
            }
        }
    }
    return theta;
}

// -------------------------------------------------------------- pushforward

CurveMeasure pushforward_moebius(const CurveMeasure& mu, CurveSystemPtr image) {
    CurveMeasure out(image);
    out.atoms = mu.atoms;
    // g = e_new o e_old^{-1}; density against the new dgamma is d / g'(old point)
    const Moebius g = image->embedding().compose(mu.sys->embedding().inverse());
    const Moebius e_old = mu.sys->embedding();
    for (const auto& [c, d] : mu.densities) {
        Density nd = d;
        nd.spec.clear();
        auto base = d.fn;
        const auto& cv = mu.sys->curve(c);
        nd.fn = [base, g, e_old, cv](double t, double tc) {
            return base(t, tc) / g.derivative(e_old(cv.point(t, tc)));
        };
        out.densities.emplace_back(c, std::move(nd));
    }
    return out;
}

CurveMeasure pushforward_moebius(const CurveMeasure& mu, const Moebius& h) {
    if (h.is_identity()) return mu;
    auto image = std::make_shared<const CurveSystem>(mu.sys->transported(h));
    return pushforward_moebius(mu, image);
}

}  // namespace curvecalc
