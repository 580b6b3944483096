#pragma once

#include "curvecalc/common.hpp"
#include "curvecalc/curves.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace curvecalc {

/// Nonincreasing step function: value values[i] on [breaks[i], breaks[i+1]),
/// zero from breaks.back() on.
struct StraightenedFunction {
    std::vector<double> breaks{0.0};
    std::vector<double> values;

    double operator()(double x) const;
    double support() const { return breaks.back(); }
};

/// Decreasing rearrangement of the samples f weighted by mu.
StraightenedFunction straighten(const std::vector<double>& f, const std::vector<double>& mu);

/// int over [0, inf) of the product of the straightened functions.
double product_integral(const std::vector<StraightenedFunction>& fs);

/// sum_j mu_j prod_i f_i(j)
double weighted_product_sum(const std::vector<std::vector<double>>& fs, const std::vector<double>& mu);

/// Every pair of functions is comonotone on the support of mu.
bool monotone_pairing(const std::vector<std::vector<double>>& fs, const std::vector<double>& mu);

struct BruteForceReport {
    long instances = 0;
    long violations = 0;
    long equality_cases = 0;
    long equality_failures = 0;
};
/// All step-function instances with up to max_points points, two functions
/// with values in {0..3} and weights in {0..2}.
BruteForceReport brute_force_rearrangement(int max_points = 4);

// ---- geometry used by the kernel estimates

/// Direction range of gamma(t) - gamma(a) for t > a, as [lo, hi] relative to axis.
std::pair<double, double> start_direction_range(const LipschitzCurve& c, double axis);
/// int |dgamma| / |gamma - q|^2, exact per segment.
double inv_dist_sq_integral(const LipschitzCurve& c, cplx q);
/// int |dgamma| / |gamma - q|, exact per segment.
double inv_dist_integral(const LipschitzCurve& c, cplx q);
/// int |dgamma| / (|gamma - q1| |gamma - q2|) by graded quadrature.
double inv_dist_product_integral(const LipschitzCurve& c, cplx q1, cplx q2);
/// Arc length of the part of c inside the open disc |z - w| < rho.
double arc_length_in_disc(const LipschitzCurve& c, cplx w, double rho);
/// int prod_i (c + |log |gamma - w_i||) |dgamma|.
double log_product_integral(const LipschitzCurve& c, const std::vector<cplx>& ws, double cst);

struct InequalityResult {
    std::string lemma;
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  ///< (rhs - lhs) / rhs
    int regenerated = 0;  ///< configurations rejected for failed hypotheses
};

/// Lemma ids: 3.2, 3.4b, 3.4c, 3.5, 3.7, 3.9, 3.10, 3.11, 3.12.
const std::vector<std::string>& lemma_ids();

/// One randomized configuration for the lemma, drawn from seed.
InequalityResult verify_inequality(const std::string& lemma, std::uint64_t seed);

/// Empirical constant for the last lemma on a fixture curve system.
struct LogConstant {
    double c_n = 0.0;   ///< max ratio over n samples
    double c_2n = 0.0;  ///< max ratio over 2n samples
};
/// Fixtures: 0 L-shape, 1 closed square, 2 zigzag. power is the exponent n.
LogConstant log_constant(int fixture, int power, int samples, std::uint64_t seed);
/// Constant used by verify_inequality("3.12"): twice the calibrated 2n maximum.
double log_constant_reference(int fixture, int power);

/// Per-config seed derived from a run seed.
std::uint64_t config_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace curvecalc
