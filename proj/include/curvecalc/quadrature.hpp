#pragma once

#include "curvecalc/common.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

namespace curvecalc {

/// Composite Gauss-Legendre rule with bisection refinement.
struct QuadratureRule {
    int order = 16;
    double tol = 1e-10;
    int max_depth = 30;
    /// Estimate the error of a panel by comparing with the half-order rule on
    /// the same panel instead of bisecting (cheaper, used for inner integrals).
    bool paired = false;
};

/// Diagnostics accumulated across quadrature calls.
struct QuadStats {
    long evals = 0;
    long intervals = 0;
    bool converged = true;
    double err_est = 0.0;

    void merge(const QuadStats& o) {
        evals += o.evals;
        intervals += o.intervals;
        converged = converged && o.converged;
        err_est += o.err_est;
    }
};

inline double qnorm(cplx z) { return std::abs(z); }
inline double qnorm(const Vec& v) { return v.norm(); }
inline double qnorm(double x) { return std::abs(x); }

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration.
struct GaussLegendre {
    std::vector<double> x, w;

    explicit GaussLegendre(int n) : x(n), w(n) {
        auto legendre = [n](double z, double* dp) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            *dp = n * (z * p1 - p0) / (z * z - 1.0);
            return p1;
        };
        for (int i = 0; i < n; ++i) {
            double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), dp = 1.0;
            for (int it = 0; it < 100; ++it) {
                double dz = legendre(z, &dp) / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            legendre(z, &dp);
            x[i] = -z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }

    static const GaussLegendre& get(int n) {
        static const GaussLegendre g8(8), g12(12), g16(16), g24(24), g32(32);
        switch (n) {
            case 8: return g8;
            case 12: return g12;
            case 24: return g24;
            case 32: return g32;
            default: return g16;
        }
    }
};

namespace detail {

// f(t, tc) with tc = total - t supplied by the caller.
template <class T, class F>
T gl_panel(F& f, double a, double b, double total, const T& zero, const GaussLegendre& g,
           QuadStats* st) {
    T acc = zero;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        double t = mid + half * g.x[i];
        acc += (half * g.w[i]) * f(t, total - t);
    }
    if (st) st->evals += static_cast<long>(g.x.size());
    return acc;
}

template <class T, class F>
T gl_paired(F& f, double a, double b, double total, const T& zero, const QuadratureRule& rule,
            int depth, QuadStats* st) {
    const auto& g = GaussLegendre::get(16);
    const auto& h = GaussLegendre::get(8);
    T fine = gl_panel(f, a, b, total, zero, g, st);
    T coarse = gl_panel(f, a, b, total, zero, h, st);
    // the 8-point mismatch overstates the 16-point error roughly quadratically
    double diff = qnorm(T(fine - coarse)), scale = 1.0 + qnorm(fine);
    double err = diff * std::min(1.0, diff / (std::sqrt(rule.tol) * scale));
    double m = 0.5 * (a + b);
    if (err <= rule.tol * scale || depth >= rule.max_depth || !(m > a && m < b)) {
        if (st) {
            ++st->intervals;
            if (err > rule.tol * scale) st->converged = false;
            st->err_est += err;
        }
        return fine;
    }
    return gl_paired(f, a, m, total, zero, rule, depth + 1, st) +
           gl_paired(f, m, b, total, zero, rule, depth + 1, st);
}

template <class T, class F>
T gl_adapt(F& f, double a, double b, double total, const T& whole, const T& zero,
           const GaussLegendre& g, const QuadratureRule& rule, int depth, QuadStats* st) {
    double m = 0.5 * (a + b);
    T left = gl_panel(f, a, m, total, zero, g, st);
    T right = gl_panel(f, m, b, total, zero, g, st);
    T fine = left + right;
    double err = qnorm(T(fine - whole));
    if (err <= rule.tol * (1.0 + qnorm(fine)) || depth >= rule.max_depth || !(m > a && m < b)) {
        if (st) {
            ++st->intervals;
            if (err > rule.tol * (1.0 + qnorm(fine))) st->converged = false;
            st->err_est += err;
        }
        return fine;
    }
    T l = gl_adapt(f, a, m, total, left, zero, g, rule, depth + 1, st);
    T r = gl_adapt(f, m, b, total, right, zero, g, rule, depth + 1, st);
    return l + r;
}

}  // namespace detail

/// Adaptive Gauss-Legendre on [a, b]; f is called as f(t, total - t).
template <class T, class F>
T integrate_gl(F&& f, double a, double b, double total, const T& zero, const QuadratureRule& rule,
               QuadStats* st = nullptr) {
    if (!(b > a)) return zero;
    if (rule.paired) return detail::gl_paired(f, a, b, total, zero, rule, 1, st);
    const auto& g = GaussLegendre::get(rule.order);
    T whole = detail::gl_panel(f, a, b, total, zero, g, st);
    return detail::gl_adapt(f, a, b, total, whole, zero, g, rule, 1, st);
}

/// Tanh-sinh rule on [a, b] for integrands with endpoint singularities.
/// f is called as f(da, db) with da = x - a and db = b - x computed without
/// cancellation; nodes where either distance underflows are skipped.
template <class T, class F>
T integrate_tanh_sinh(F&& f, double a, double b, const T& zero, double tol,
                      QuadStats* st = nullptr) {
    const double L = b - a;
    if (!(L > 0.0)) return zero;
    const double tmax = 6.1;
    auto term = [&](double tau) -> T {
        double u = 0.5 * kPi * std::sinh(tau);
        double da = L / (1.0 + std::exp(-2.0 * u));
        double db = L / (1.0 + std::exp(2.0 * u));
        if (da == 0.0 || db == 0.0) return zero;
        double ch = std::cosh(u);
        double w = 0.5 * L * 0.5 * kPi * std::cosh(tau) / (ch * ch);
        if (w == 0.0 || !std::isfinite(w)) return zero;
        if (st) ++st->evals;
        return w * f(da, db);
    };
    double h = 0.5;
    T sum = term(0.0);
    for (int k = 1; k * h <= tmax; ++k) sum += term(k * h) + term(-k * h);
    T I = h * sum;
    double err = 0.0;
    for (int level = 0; level < 5; ++level) {
        h *= 0.5;
        T extra = zero;
        for (int k = 1; k * h <= tmax; k += 2) extra += term(k * h) + term(-k * h);
        sum += extra;
        T In = h * sum;
        err = qnorm(T(In - I));
        I = In;
        if (level >= 1 && err <= tol * (1.0 + qnorm(I))) {
            if (st) { ++st->intervals; st->err_est += err; }
            return I;
        }
    }
    if (st) {
        ++st->intervals;
        st->err_est += err;
        if (err > std::sqrt(tol) * (1.0 + qnorm(I))) st->converged = false;
    }
    return I;
}

/// A break in the integration interval; singular breaks get tanh-sinh panels.
struct Break {
    double t;
    bool singular = false;
};

/// Integrates f(t, tc) over [lo, hi] inside a parameter range [0, total],
/// split at the given breaks, with tc = total - t. Pieces adjacent to a
/// singular break (or a singular end of [lo, hi]) use tanh-sinh, the rest
/// adaptive Gauss-Legendre.
template <class T, class F>
T integrate_pieces(F&& f, double lo, double hi, double total, std::vector<Break> breaks,
                   bool sing_lo, bool sing_hi, const T& zero, const QuadratureRule& rule,
                   QuadStats* st = nullptr) {
    if (!(hi > lo)) return zero;
    breaks.push_back({lo, sing_lo});
    breaks.push_back({hi, sing_hi});
    std::sort(breaks.begin(), breaks.end(), [](const Break& x, const Break& y) { return x.t < y.t; });
    std::vector<Break> bs;
    const double eps = 1e-14 * std::max(1.0, total);
    for (const auto& b : breaks) {
        if (b.t < lo || b.t > hi) continue;
        if (!bs.empty() && std::abs(b.t - bs.back().t) <= eps) {
            bs.back().singular = bs.back().singular || b.singular;
            if (b.t == lo || b.t == hi) bs.back().t = b.t;
            continue;
        }
        bs.push_back(b);
    }
    T acc = zero;
    for (std::size_t i = 0; i + 1 < bs.size(); ++i) {
        double a = bs[i].t, b = bs[i + 1].t;
        if (!(b > a)) continue;
        if (bs[i].singular || bs[i + 1].singular) {
            const bool at_end = (b == total);
            auto g = [&](double da, double db) {
                if (db < da) {
                    double t = b - db;
                    return f(t, at_end ? db : total - t);
                }
                double t = a + da;
                return f(t, total - t);
            };
            acc += integrate_tanh_sinh(g, a, b, zero, rule.tol, st);
        } else {
            acc += integrate_gl(f, a, b, total, zero, rule, st);
        }
    }
    return acc;
}

}  // namespace curvecalc
