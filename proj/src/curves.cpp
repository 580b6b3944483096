#include "curvecalc/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace curvecalc {

namespace {

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }
double dot(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// Angle in [0, pi/2] between the lines spanned by a and b.
double line_angle(cplx a, cplx b) {
    double phi = std::abs(std::arg(a / b));  // [0, pi]
    return std::min(phi, kPi - phi);
}

// Golden-section minimisation of a unimodal function on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, int iters, double* xmin = nullptr) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int k = 0; k < iters; ++k) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - g * (hi - lo); f1 = f(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + g * (hi - lo); f2 = f(x2);
        }
    }
    double best = std::min({f1, f2, f(lo), f(hi)});
    if (xmin) *xmin = (f1 < f2) ? x1 : x2;
    return best;
}

}  // namespace

namespace geom {

double point_segment_distance(cplx z, cplx p, cplx q, double* s) {
    cplx d = q - p;
    double l2 = std::norm(d);
    double u = l2 > 0.0 ? dot(z - p, d) / l2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    if (s) *s = u;
    return std::abs(z - (p + u * d));
}

double segment_segment_distance(cplx p1, cplx p2, cplx q1, cplx q2) {
    cplx d1 = p2 - p1, d2 = q2 - q1;
    double c1 = cross(d1, q1 - p1), c2 = cross(d1, q2 - p1);
    double c3 = cross(d2, p1 - q1), c4 = cross(d2, p2 - q1);
    if (((c1 > 0 && c2 < 0) || (c1 < 0 && c2 > 0)) &&
        ((c3 > 0 && c4 < 0) || (c3 < 0 && c4 > 0)))
        return 0.0;
    return std::min({point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2),
                     point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2)});
}

double point_arc_distance(cplx z, cplx p, cplx q, const Moebius& e) {
    if (e.is_affine()) return point_segment_distance(z, e(p), e(q));
    cplx A = e(p), B = e(q), M = e(0.5 * (p + q));
    double scale = std::max(std::norm(B - A), 1e-300);
    if (std::abs(cross(M - A, B - A)) <= 1e-13 * scale) return point_segment_distance(z, A, B);
    // circumcentre of A, M, B
    cplx b = M - A, c = B - A;
    double dd = 2.0 * cross(b, c);
    cplx C = A + cplx(c.imag() * std::norm(b) - b.imag() * std::norm(c),
                      b.real() * std::norm(c) - c.real() * std::norm(b)) / dd;
    double R = std::abs(A - C);
    double rz = std::abs(z - C);
    if (rz == 0.0) return R;
    cplx P = C + R * (z - C) / rz;
    // P lies on the arc A -> M -> B iff it sits on the same side of chord AB as M
    double sM = cross(B - A, M - A), sP = cross(B - A, P - A);
    if ((sM > 0) == (sP > 0)) return std::abs(rz - R);
    return std::min(std::abs(z - A), std::abs(z - B));
}

}  // namespace geom

LipschitzCurve::LipschitzCurve(std::vector<cplx> vertices, double tol) : v_(std::move(vertices)) {
    if (v_.size() < 2) throw InvalidArgument("a curve needs at least two points");
    for (std::size_t j = 0; j + 1 < v_.size(); ++j)
        if (std::abs(v_[j + 1] - v_[j]) <= tol)
            throw DegenerateSegment("consecutive vertices " + std::to_string(j) + " and " +
                                    std::to_string(j + 1) + " coincide");
    const std::size_t n = v_.size() - 1;
    if (n >= 3 && std::abs(v_.back() - v_.front()) <= tol) {
        closed_ = true;
        v_.back() = v_.front();
    }
    t_.assign(v_.size(), 0.0);
    dir_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double l = std::abs(v_[j + 1] - v_[j]);
        t_[j + 1] = t_[j] + l;
        dir_[j] = (v_[j + 1] - v_[j]) / l;
    }

    auto adjacent = [&](std::size_t i, std::size_t j) {
        return j == i + 1 || (closed_ && i == 0 && j == n - 1);
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (adjacent(i, j)) {
                cplx a = dir_[i], b = dir_[j];
                if (std::abs(cross(a, b)) <= 1e-14 && dot(a, b) < 0)
                    throw SelfIntersection("segments " + std::to_string(i) + " and " +
                                           std::to_string(j) + " fold back onto each other");
                continue;
            }
            if (geom::segment_segment_distance(v_[i], v_[i + 1], v_[j], v_[j + 1]) <= tol)
                throw SelfIntersection("segments " + std::to_string(i) + " and " +
                                       std::to_string(j) + " intersect");
        }
    }

    // Lower bi-Lipschitz constant: vertex pairs, refined inside segment pairs
    // for moderately sized polylines.
    const double L = t_.back();
    auto pd = [&](double x) { return closed_ ? std::min(x, L - x) : x; };
    double c1 = 1.0;
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j) {
            double den = pd(t_[j] - t_[i]);
            if (den <= 0.0) continue;
            c1 = std::min(c1, std::abs(v_[j] - v_[i]) / den);
        }
    if (n <= 48) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double li = segment_length(i), lj = segment_length(j);
                auto f = [&](double a, double b) {
                    double den = pd(t_[j] + b - t_[i] - a);
                    if (den <= 1e-300) return 1.0;
                    return std::abs(v_[j] + b * dir_[j] - v_[i] - a * dir_[i]) / den;
                };
                auto g = [&](double a) {
                    return golden_min([&](double b) { return f(a, b); }, 0.0, lj, 50);
                };
                c1 = std::min(c1, golden_min(g, 0.0, li, 50));
            }
    }
    c1_ = c1;
}

std::size_t LipschitzCurve::segment_of(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::ptrdiff_t j = std::distance(t_.begin(), it) - 1;
    j = std::clamp<std::ptrdiff_t>(j, 0, static_cast<std::ptrdiff_t>(num_segments()) - 1);
    return static_cast<std::size_t>(j);
}

cplx LipschitzCurve::point_on_segment(std::size_t j, double t) const {
    double a = t - t_[j], b = t_[j + 1] - t;
    return a <= b ? v_[j] + a * dir_[j] : v_[j + 1] - b * dir_[j];
}

cplx LipschitzCurve::point(double t) const { return point_on_segment(segment_of(t), t); }

cplx LipschitzCurve::point(double t, double tc) const {
    std::size_t j = segment_of(t);
    if (j + 1 == num_segments() && tc < 0.5 * segment_length(j)) return v_.back() - tc * dir_[j];
    return point_on_segment(j, t);
}

LipschitzCurve LipschitzCurve::reversed() const {
    std::vector<cplx> r(v_.rbegin(), v_.rend());
    return LipschitzCurve(r);
}

double LipschitzCurve::distance(cplx z, double* t_near) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < num_segments(); ++j) {
        double s;
        double d = geom::point_segment_distance(z, v_[j], v_[j + 1], &s);
        if (d < best) {
            best = d;
            if (t_near) *t_near = t_[j] + s * segment_length(j);
        }
    }
    return best;
}

LipschitzCurve make_curve(const std::vector<cplx>& points) { return LipschitzCurve(points); }

DirectionCone forward_cone(const LipschitzCurve& c) {
    const auto& v = c.vertices();
    std::vector<double> ang;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            cplx d = v[j] - v[i];
            if (std::abs(d) > 0.0) ang.push_back(std::arg(d));
        }
    std::sort(ang.begin(), ang.end());
    DirectionCone cone;
    std::size_t m = ang.size();
    double best_gap = -1.0;
    std::size_t k_best = 0;
    for (std::size_t k = 0; k < m; ++k) {
        double gap = (k + 1 < m) ? ang[k + 1] - ang[k] : ang[0] + 2.0 * kPi - ang[m - 1];
        if (gap > best_gap) {
            best_gap = gap;
            k_best = k;
        }
    }
    double lo = ang[(k_best + 1) % m];
    double span = 2.0 * kPi - best_gap;
    if (span < 1e-15) span = 0.0;
    cone.lo = lo;
    cone.hi = lo + span;
    cone.semi_angle = 0.5 * span;
    cone.axis = lo + cone.semi_angle;
    cone.is_short = cone.semi_angle < 0.5 * kPi;
    return cone;
}

double transversal_angle(const LipschitzCurve& c, cplx xi) {
    if (std::abs(xi) == 0.0) throw ZeroDirection("transversal direction is zero");
    const auto& v = c.vertices();
    double best = 0.5 * kPi;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            cplx d = v[j] - v[i];
            if (std::abs(d) > 0.0) best = std::min(best, line_angle(d, xi));
        }
    return best;
}

Side side_of(const LipschitzCurve& c, cplx z, double tol) {
    const auto& v = c.vertices();
    const std::size_t n = c.num_segments();
    std::vector<double> dist(n), s(n);
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        dist[j] = geom::point_segment_distance(z, v[j], v[j + 1], &s[j]);
        dmin = std::min(dmin, dist[j]);
    }
    if (dmin <= tol) return Side::On;
    std::vector<std::size_t> cand;
    for (std::size_t j = 0; j < n; ++j)
        if (dist[j] <= dmin * (1.0 + 1e-9) + 1e-300) cand.push_back(j);

    auto sign_of = [](double x) { return x > 0 ? Side::Left : Side::Right; };
    if (cand.size() == 1) {
        std::size_t j = cand[0];
        cplx foot = v[j] + s[j] * (v[j + 1] - v[j]);
        return sign_of(cross(c.direction(j), z - foot));
    }
    // Several nearest segments: acceptable only when they meet at one vertex.
    auto shared_vertex = [&](std::size_t i, std::size_t j, std::size_t* k) {
        if (j == i + 1 && s[i] >= 1.0 - 1e-12 && s[j] <= 1e-12) { *k = j; return true; }
        if (c.closed() && i == 0 && j == n - 1 && s[i] <= 1e-12 && s[j] >= 1.0 - 1e-12) {
            *k = 0;
            return true;
        }
        return false;
    };
    std::size_t k = 0;
    if (cand.size() == 2 && shared_vertex(cand[0], cand[1], &k)) {
        std::size_t in = (k == 0) ? n - 1 : k - 1, out = k;
        cplx d_in = c.direction(in), d_out = c.direction(out);
        auto ang = [](cplx w) {
            double a = std::arg(w);
            return a < 0 ? a + 2.0 * kPi : a;
        };
        double phi = ang((z - v[k]) / d_out);
        double psi = ang(-d_in / d_out);
        return (phi > 0 && phi < psi) ? Side::Left : Side::Right;
    }
    throw AmbiguousProjection("point is equidistant from non-adjacent segments");
}

CurveSystem::CurveSystem(std::vector<LipschitzCurve> curves, Moebius embedding, double node_tol)
    : curves_(std::move(curves)), emb_(embedding) {
    if (curves_.empty()) throw InvalidArgument("empty curve system");
    curve_nodes_.resize(curves_.size());
    auto node_index = [&](cplx p) {
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (std::abs(nodes_[i] - p) <= node_tol) return static_cast<int>(i);
        nodes_.push_back(p);
        node_curves_.emplace_back();
        return static_cast<int>(nodes_.size() - 1);
    };
    for (std::size_t c = 0; c < curves_.size(); ++c) {
        int a = node_index(curves_[c].start());
        int b = node_index(curves_[c].end());
        curve_nodes_[c] = {a, b};
        node_curves_[a].push_back(static_cast<int>(c));
        if (b != a) node_curves_[b].push_back(static_cast<int>(c));
    }

    // Pairwise disjointness except at shared nodes, with distinct directions there.
    for (std::size_t A = 0; A < curves_.size(); ++A) {
        for (std::size_t B = A + 1; B < curves_.size(); ++B) {
            const auto& ca = curves_[A];
            const auto& cb = curves_[B];
            for (std::size_t i = 0; i < ca.num_segments(); ++i) {
                for (std::size_t j = 0; j < cb.num_segments(); ++j) {
                    cplx p1 = ca.vertices()[i], p2 = ca.vertices()[i + 1];
                    cplx q1 = cb.vertices()[j], q2 = cb.vertices()[j + 1];
                    if (geom::segment_segment_distance(p1, p2, q1, q2) > node_tol) continue;
                    // allowed only at a common node where both segments end
                    bool ok = false;
                    for (int na : curve_nodes_[A]) {
                        for (int nb : curve_nodes_[B]) {
                            if (na != nb) continue;
                            cplx nd = nodes_[na];
                            auto out_dir = [&](cplx x1, cplx x2, cplx* d) {
                                if (std::abs(x1 - nd) <= node_tol) { *d = x2 - x1; return true; }
                                if (std::abs(x2 - nd) <= node_tol) { *d = x1 - x2; return true; }
                                return false;
                            };
                            cplx da, db;
                            if (out_dir(p1, p2, &da) && out_dir(q1, q2, &db) &&
                                std::abs(std::arg(da / db)) > 1e-9)
                                ok = true;
                        }
                    }
                    if (!ok)
                        throw SelfIntersection("curves " + std::to_string(A) + " and " +
                                               std::to_string(B) + " meet away from a shared node");
                }
            }
        }
    }

    // Components by union-find over shared nodes.
    std::vector<int> parent(curves_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& inc : node_curves_)
        for (std::size_t k = 1; k < inc.size(); ++k) parent[find(inc[k])] = find(inc[0]);
    comp_.assign(curves_.size(), -1);
    std::vector<int> label(curves_.size(), -1);
    for (std::size_t c = 0; c < curves_.size(); ++c) {
        int r = find(static_cast<int>(c));
        if (label[r] < 0) label[r] = ncomp_++;
        comp_[c] = label[r];
    }
    if (!emb_.is_affine()) {
        for (std::size_t c = 0; c < curves_.size(); ++c)
            if (curves_[c].distance(emb_.pole()) <= node_tol)
                throw PoleOnCarrier("embedding pole lies on curve " + std::to_string(c));
    }
}

cplx CurveSystem::point(int c, double t) const { return emb_(curves_[c].point(t)); }

cplx CurveSystem::point(int c, double t, double tc) const { return emb_(curves_[c].point(t, tc)); }

cplx CurveSystem::dgamma_on_segment(int c, std::size_t j, cplx p) const {
    cplx d = curves_[c].direction(j);
    return emb_.is_identity() ? d : emb_.derivative(p) * d;
}

cplx CurveSystem::dgamma(int c, double t) const {
    std::size_t j = curves_[c].segment_of(t);
    return dgamma_on_segment(c, j, curves_[c].point_on_segment(j, t));
}

double CurveSystem::distance(cplx z, CurvePoint* nearest) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < curves_.size(); ++c) {
        const auto& cv = curves_[c];
        for (std::size_t j = 0; j < cv.num_segments(); ++j) {
            cplx p = cv.vertices()[j], q = cv.vertices()[j + 1];
            double d = geom::point_arc_distance(z, p, q, emb_);
            if (d < best) {
                best = d;
                if (nearest) {
                    cplx pz;
                    double s = 0.0;
                    if (pullback(z, &pz)) geom::point_segment_distance(pz, p, q, &s);
                    nearest->curve = static_cast<int>(c);
                    nearest->t = cv.params()[j] + s * cv.segment_length(j);
                }
            }
        }
    }
    return best;
}

bool CurveSystem::pullback(cplx z, cplx* p) const {
    if (!emb_.is_affine() && z == emb_.at_infinity()) return false;
    *p = emb_.inverse()(z);
    return std::isfinite(p->real()) && std::isfinite(p->imag());
}

double CurveSystem::component_gap() const {
    if (gap_ >= 0.0) return gap_;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t A = 0; A < curves_.size(); ++A)
        for (std::size_t B = A + 1; B < curves_.size(); ++B) {
            if (comp_[A] == comp_[B]) continue;
            const auto& ca = curves_[A];
            const auto& cb = curves_[B];
            for (std::size_t i = 0; i < ca.num_segments(); ++i)
                for (std::size_t j = 0; j < cb.num_segments(); ++j) {
                    cplx p1 = ca.vertices()[i], p2 = ca.vertices()[i + 1];
                    cplx q1 = cb.vertices()[j], q2 = cb.vertices()[j + 1];
                    if (emb_.is_affine()) {
                        best = std::min(best, geom::segment_segment_distance(
                                                  emb_(p1), emb_(p2), emb_(q1), emb_(q2)));
                        continue;
                    }
                    const int m = 64;
                    for (int k = 0; k <= m; ++k) {
                        cplx x = emb_(p1 + (p2 - p1) * (double(k) / m));
                        best = std::min(best, geom::point_arc_distance(x, q1, q2, emb_));
                        cplx y = emb_(q1 + (q2 - q1) * (double(k) / m));
                        best = std::min(best, geom::point_arc_distance(y, p1, p2, emb_));
                    }
                }
        }
    gap_ = best;
    return gap_;
}

CurveSystem CurveSystem::transported(const Moebius& g) const {
    return CurveSystem(curves_, g.compose(emb_));
}

CurveSystemPtr single_curve_system(const LipschitzCurve& c) {
    return std::make_shared<const CurveSystem>(std::vector<LipschitzCurve>{c});
}

}  // namespace curvecalc
