#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace curvecalc {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cplx kI{0.0, 1.0};

/// Absolute distance below which a point counts as lying on a curve.
inline constexpr double kOnCurveTol = 1e-12;

/// Base of every library error. kind() is the stable error name used by the
/// CLI, the Python bindings and the tests.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define CURVECALC_ERROR(Name)                                             \
    class Name : public Error {                                           \
    public:                                                               \
        explicit Name(const std::string& what) : Error(#Name, what) {}    \
    }

CURVECALC_ERROR(InvalidArgument);
CURVECALC_ERROR(SelfIntersection);
CURVECALC_ERROR(DegenerateSegment);
CURVECALC_ERROR(ZeroDirection);
CURVECALC_ERROR(AmbiguousProjection);
CURVECALC_ERROR(OnCurve);
CURVECALC_ERROR(EndpointParameter);
CURVECALC_ERROR(NonHoelderDensity);
CURVECALC_ERROR(SectorViolation);
CURVECALC_ERROR(DisconnectedWithoutChoice);
CURVECALC_ERROR(PoleOnCarrier);
CURVECALC_ERROR(BaseOffCarrier);
CURVECALC_ERROR(AlphaOutOfRange);
CURVECALC_ERROR(ZInside);
CURVECALC_ERROR(SupportTouchesBoundary);
CURVECALC_ERROR(NotInDomain);
CURVECALC_ERROR(MultiValued);
CURVECALC_ERROR(DefectiveMatrix);
CURVECALC_ERROR(GrowthViolation);
CURVECALC_ERROR(NegativeWeight);
CURVECALC_ERROR(HypothesisViolated);
CURVECALC_ERROR(ParseError);

#undef CURVECALC_ERROR

/// Raised when a resolvent needed by an evaluation does not apply at a node.
class ResolventFailure : public Error {
public:
    ResolventFailure(cplx node, const std::string& what)
        : Error("ResolventFailure", what), node_(node) {}
    cplx node() const noexcept { return node_; }

private:
    cplx node_;
};

}  // namespace curvecalc
