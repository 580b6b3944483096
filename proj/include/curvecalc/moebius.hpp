#pragma once

#include "curvecalc/common.hpp"

#include <cmath>
#include <limits>

namespace curvecalc {

/// h(z) = (a z + b) / (c z + d) with ad - bc != 0.
struct Moebius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    Moebius() = default;
    Moebius(cplx a_, cplx b_, cplx c_, cplx d_) : a(a_), b(b_), c(c_), d(d_) {
        if (std::abs(det()) == 0.0)
            throw InvalidArgument("Moebius map with ad - bc = 0");
    }

    static Moebius identity() { return {}; }

    cplx det() const { return a * d - b * c; }
    bool is_affine() const { return c == cplx(0.0); }
    bool is_identity() const {
        return b == cplx(0.0) && c == cplx(0.0) && a == d;
    }

    /// Finite preimage of infinity; only meaningful when !is_affine().
    cplx pole() const { return -d / c; }
    /// Image of infinity; only meaningful when !is_affine().
    cplx at_infinity() const { return a / c; }

    cplx operator()(cplx z) const {
        cplx den = c * z + d;
        if (den == cplx(0.0))
            return {std::numeric_limits<double>::infinity(), 0.0};
        return (a * z + b) / den;
    }
    cplx derivative(cplx z) const {
        cplx den = c * z + d;
        return det() / (den * den);
    }

    Moebius inverse() const { return {d, -b, -c, a}; }

    /// (*this) o g
    Moebius compose(const Moebius& g) const {
        return {a * g.a + b * g.c, a * g.b + b * g.d, c * g.a + d * g.c,
                c * g.b + d * g.d};
    }

    /// True when z is within tol of the pole, scaled to the map.
    bool near_pole(cplx z, double tol) const {
        return !is_affine() && std::abs(z - pole()) <= tol;
    }
};

}  // namespace curvecalc
