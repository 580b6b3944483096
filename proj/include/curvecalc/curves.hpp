#pragma once

#include "curvecalc/common.hpp"
#include "curvecalc/moebius.hpp"

#include <array>
#include <memory>
#include <vector>

namespace curvecalc {

enum class Side { Left = 1, Right = -1, On = 0 };

/// Closed cone of forward directions, given by its boundary angles.
struct DirectionCone {
    double lo = 0.0;          ///< clockwise boundary angle (radians)
    double hi = 0.0;          ///< counterclockwise boundary angle, hi >= lo
    double semi_angle = 0.0;  ///< (hi - lo) / 2
    double axis = 0.0;        ///< (hi + lo) / 2
    bool is_short = true;     ///< semi_angle < pi/2
};

/// Polyline with chord-length parameter t in [0, L]. A polyline whose last
/// vertex equals the first is a closed curve.
class LipschitzCurve {
public:
    explicit LipschitzCurve(std::vector<cplx> vertices, double tol = kOnCurveTol);

    const std::vector<cplx>& vertices() const { return v_; }
    const std::vector<double>& params() const { return t_; }
    std::size_t num_segments() const { return v_.size() - 1; }
    double length() const { return t_.back(); }
    double c1() const { return c1_; }
    bool closed() const { return closed_; }
    cplx start() const { return v_.front(); }
    cplx end() const { return v_.back(); }

    /// Index j of the segment with params[j] <= t <= params[j+1].
    std::size_t segment_of(double t) const;
    /// Unit direction of segment j.
    cplx direction(std::size_t j) const { return dir_[j]; }
    double segment_length(std::size_t j) const { return t_[j + 1] - t_[j]; }

    cplx point(double t) const;
    /// Same point, using tc = L - t for accuracy near the far end.
    cplx point(double t, double tc) const;
    cplx point_on_segment(std::size_t j, double t) const;

    LipschitzCurve reversed() const;

    /// Distance from z to the polyline and the parameter of the nearest point.
    double distance(cplx z, double* t_near = nullptr) const;

private:
    std::vector<cplx> v_;
    std::vector<double> t_;
    std::vector<cplx> dir_;
    double c1_ = 1.0;
    bool closed_ = false;
};

LipschitzCurve make_curve(const std::vector<cplx>& points);
DirectionCone forward_cone(const LipschitzCurve& c);
double transversal_angle(const LipschitzCurve& c, cplx xi);
Side side_of(const LipschitzCurve& c, cplx z, double tol = kOnCurveTol);

struct CurvePoint {
    int curve = 0;
    double t = 0.0;
};

/// Finite union of polylines meeting only at shared endpoints, optionally
/// carried through a Moebius embedding e: the actual points are e(P(t)).
class CurveSystem {
public:
    explicit CurveSystem(std::vector<LipschitzCurve> curves,
                         Moebius embedding = Moebius::identity(),
                         double node_tol = 1e-10);

    std::size_t num_curves() const { return curves_.size(); }
    const LipschitzCurve& curve(std::size_t i) const { return curves_[i]; }
    const std::vector<LipschitzCurve>& curves() const { return curves_; }
    const Moebius& embedding() const { return emb_; }
    bool embedded() const { return !emb_.is_identity(); }

    cplx point(int c, double t) const;
    cplx point(int c, double t, double tc) const;
    /// dgamma/dt at parameter t.
    cplx dgamma(int c, double t) const;
    cplx dgamma_on_segment(int c, std::size_t j, cplx polyline_point) const;

    std::size_t num_nodes() const { return nodes_.size(); }
    /// Node position in polyline coordinates.
    cplx node(std::size_t i) const { return nodes_[i]; }
    cplx node_point(std::size_t i) const { return emb_(nodes_[i]); }
    std::array<int, 2> curve_nodes(std::size_t c) const { return curve_nodes_[c]; }
    const std::vector<std::vector<int>>& node_curves() const { return node_curves_; }

    int component_of(std::size_t c) const { return comp_[c]; }
    int num_components() const { return ncomp_; }
    /// Smallest distance between points of different components (inf if one).
    double component_gap() const;

    /// Distance from z to the carrier, measured in the embedded plane.
    double distance(cplx z, CurvePoint* nearest = nullptr) const;
    bool on_carrier(cplx z, double tol = kOnCurveTol) const { return distance(z) <= tol; }
    /// Pull a plane point back to polyline coordinates; false if it is e(inf).
    bool pullback(cplx z, cplx* p) const;

    /// Same polylines with embedding g o e.
    CurveSystem transported(const Moebius& g) const;

    /// Parameters of all vertices of curve c (including both ends).
    const std::vector<double>& vertex_params(int c) const { return curves_[c].params(); }

private:
    std::vector<LipschitzCurve> curves_;
    Moebius emb_;
    std::vector<cplx> nodes_;
    std::vector<std::array<int, 2>> curve_nodes_;
    std::vector<std::vector<int>> node_curves_;
    std::vector<int> comp_;
    int ncomp_ = 0;
    mutable double gap_ = -1.0;
};

using CurveSystemPtr = std::shared_ptr<const CurveSystem>;

/// Single-curve system with identity embedding.
CurveSystemPtr single_curve_system(const LipschitzCurve& c);

namespace geom {
double point_segment_distance(cplx z, cplx p, cplx q, double* s = nullptr);
double segment_segment_distance(cplx p1, cplx p2, cplx q1, cplx q2);
/// Distance from z to the image of segment [p, q] under the map e.
double point_arc_distance(cplx z, cplx p, cplx q, const Moebius& e);
}  // namespace geom

}  // namespace curvecalc
