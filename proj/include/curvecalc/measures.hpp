#pragma once

#include "curvecalc/common.hpp"
#include "curvecalc/curves.hpp"
#include "curvecalc/quadrature.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace curvecalc {

/// Complex density on one curve, taken against dgamma. The handle receives
/// (t, tc) with tc = L - t so it can stay accurate near the far end.
struct Density {
    std::function<cplx(double, double)> fn;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();  ///< support, clamped to [0, L]
    std::vector<double> breaks;    ///< kinks or jumps
    std::vector<double> singular;  ///< interior integrable singularities
    bool sing_lo = false;
    bool sing_hi = false;
    bool holder = true;            ///< Hoelder continuous between breaks
    std::string spec;              ///< JSON text for serializable kinds, empty if derived

    cplx operator()(double t, double tc) const { return (t < lo || t > hi) ? cplx(0.0) : fn(t, tc); }

    static Density constant(cplx c);
    /// sum_k coeffs[k] t^k
    static Density polynomial(std::vector<cplx> coeffs);
    /// Piecewise linear interpolation of (t, value) samples.
    static Density table(std::vector<double> ts, std::vector<cplx> values, bool holder = false);
    /// Restriction of d to [lo, hi].
    static Density restricted(Density d, double lo, double hi);
    Density scaled(cplx c) const;
};

struct Atom {
    int curve = 0;
    double t = 0.0;
    cplx w{0.0};
};

/// Finite measure on a curve system: atoms plus densities against dgamma.
/// Several densities on the same curve add up.
struct CurveMeasure {
    CurveSystemPtr sys;
    std::vector<Atom> atoms;
    std::vector<std::pair<int, Density>> densities;

    CurveMeasure() = default;
    explicit CurveMeasure(CurveSystemPtr s) : sys(std::move(s)) {}

    bool empty() const { return atoms.empty() && densities.empty(); }
    CurveMeasure scaled(cplx c) const;
    CurveMeasure& operator+=(const CurveMeasure& o);
    /// Part of the measure living on the curves of component comp.
    CurveMeasure restricted_to_component(int comp) const;
    /// Same measure viewed on another system with the same polylines.
    CurveMeasure rebased(CurveSystemPtr s) const;
};

/// Variation of the density on curve c: integral of |sum of densities| |dgamma|.
double total_variation(const CurveMeasure& mu, const QuadratureRule& rule = {});
/// Integral of the measure against 1.
cplx total_mass(const CurveMeasure& mu, const QuadratureRule& rule = {});

CurveMeasure omega_measure(const LipschitzCurve& c, double a1, double b1);
CurveMeasure xi_measure(const LipschitzCurve& c, double a1, double b1, int n1, int n2);

/// Parameter range of curve c actually traversed: from ta to tb.
struct PathPiece {
    int curve = 0;
    double ta = 0.0;
    double tb = 0.0;
};
using Path = std::vector<PathPiece>;

/// Connecting sub-curves inside each component: the direct sub-interval on a
/// common curve, otherwise through the endpoints of the two curves along a
/// spanning tree of the component's node graph. Points in different
/// components map to the empty marker.
class ChoiceFunction {
public:
    explicit ChoiceFunction(CurveSystemPtr sys);

    const CurveSystemPtr& system() const { return sys_; }
    std::optional<Path> path(CurvePoint p1, CurvePoint p2) const;

    /// Endpoint (0 = start, 1 = end) of c1 through which paths towards
    /// curve c2 leave, given the position s1 on c1 (matters for closed curves).
    int exit_end(int c1, double s1, int c2) const;
    /// Tree steps (curve, +1 forward / -1 backward) from the exit node of c1
    /// to the entry node of c2 (entry_end is the end of c2 reached).
    std::vector<std::pair<int, int>> tree_steps(int c1, int c2) const;
    int entry_end(int c1, int c2, double s2) const;

    /// Lower bound for |s1 - s2| when path() returns the empty marker.
    double gap() const { return sys_->component_gap(); }

private:
    std::vector<std::pair<int, int>> node_path(int na, int nb) const;
    std::pair<int, int> best_ends(int c1, int c2) const;

    CurveSystemPtr sys_;
    std::vector<int> parent_;       // parent node in spanning forest, -1 at roots
    std::vector<int> parent_edge_;  // curve joining node to parent
    std::vector<int> depth_;
    std::vector<std::vector<std::pair<int, int>>> ends_;  // best (x_end, y_end) per curve pair
};

/// Locates a plane point on the carrier of sys.
CurvePoint locate(const CurveSystem& sys, cplx z, double tol = 1e-9);

struct AdditiveReduction {
    cplx c{0.0};
    CurveMeasure theta;
};

/// c = total mass, theta = superposition of the Omega measures from the base
/// to each point, so that
///   int mu/(w-z)^n = c/(w0-z)^n + n int theta/(w-z)^(n+1).
AdditiveReduction additive_reduce(const CurveMeasure& mu, int n, CurvePoint base,
                                  const ChoiceFunction& phi, const QuadratureRule& rule = {});

/// theta_k for k = 1..n1+n2+2 (index k-1), such that
///   int mu1/(s-z)^(n1+1) * int mu2/(s-z)^(n2+1) = sum_k int theta_k/(s-z)^k.
std::vector<CurveMeasure> multiplicative_reduce(const CurveMeasure& mu1, int n1,
                                                const CurveMeasure& mu2, int n2,
                                                const ChoiceFunction& phi,
                                                const QuadratureRule& rule = {});

/// Image measure under the Moebius map h, on the transported system. Masses
/// of corresponding sets are kept.
CurveMeasure pushforward_moebius(const CurveMeasure& mu, const Moebius& h);
CurveMeasure pushforward_moebius(const CurveMeasure& mu, CurveSystemPtr image_sys);

/// Breakpoints on curve c: vertices plus every density break.
std::vector<Break> curve_breaks(const CurveSystem& sys, int c);

/// Integrates kernel(t, tc, z, dgamma) * density over the support of d on
/// curve c, intersected with [range_lo, range_hi]; z is the plane point and
/// dgamma the derivative.
template <class T, class K>
T integrate_density(const CurveSystem& sys, int c, const Density& d, K&& kernel, const T& zero,
                    const QuadratureRule& rule, QuadStats* st,
                    const std::vector<Break>& extra = {}, double range_lo = 0.0,
                    double range_hi = std::numeric_limits<double>::infinity()) {
    const auto& cv = sys.curve(c);
    const double L = cv.length();
    const double slo = std::max(0.0, d.lo), shi = std::min(L, d.hi);
    const double lo = std::max(slo, range_lo), hi = std::min(shi, range_hi);
    if (!(hi > lo)) return zero;
    std::vector<Break> bs = extra;
    for (double t : cv.params()) bs.push_back({t, false});
    for (double t : d.breaks) bs.push_back({t, false});
    for (double t : d.singular) bs.push_back({t, true});
    auto f = [&](double t, double tc) -> T {
        std::size_t j = cv.segment_of(t);
        cplx P = cv.point(t, tc);
        cplx z = sys.embedding()(P);
        cplx dg = sys.dgamma_on_segment(c, j, P);
        return kernel(t, tc, z, dg) * d.fn(t, tc);
    };
    bool sl = d.sing_lo && lo == slo;
    bool sh = d.sing_hi && hi == shi;
    return integrate_pieces(f, lo, hi, L, std::move(bs), sl, sh, zero, rule, st);
}

}  // namespace curvecalc
