#pragma once

#include "curvecalc/common.hpp"
#include "curvecalc/curves.hpp"
#include "curvecalc/moebius.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace curvecalc {

/// Relative tolerance for ranks and residuals, scaled by the largest singular value.
inline constexpr double kRankTol = 1e-10;

/// Subspace {(Y c, X c)} of C^d x C^d; Ax = y for (y, x) in A.
class LinearRelation {
public:
    LinearRelation() = default;
    /// Removes redundant generators so that [Y; X] has full column rank.
    LinearRelation(Mat Y, Mat X);
    /// The graph {(M x, x)} of a matrix.
    static LinearRelation from_matrix(const Mat& M);

    int dim() const { return static_cast<int>(Y_.rows()); }
    int rank() const { return static_cast<int>(Y_.cols()); }
    const Mat& Y() const { return Y_; }
    const Mat& X() const { return X_; }
    /// Set when the relation is the graph of a matrix with X = I.
    const std::optional<Mat>& matrix() const { return M_; }

    /// True when every x has at most one image.
    bool is_operator() const;
    /// Solves X c = u and returns Y c.
    Vec apply(const Vec& u) const;
    /// (aA + b) / (cA + d) = {(a y + b x, c y + d x)}.
    LinearRelation moebius_apply(const Moebius& h) const;
    /// (w - A)^{-1} u.
    Vec resolvent_apply(cplx w, const Vec& u) const;
    /// (w_1 - A)^{-1} ... (w_m - A)^{-1} u, rightmost factor first.
    Vec iterated_resolvent(const std::vector<cplx>& ws, const Vec& u) const;
    /// Column spans of [Y; X] agree.
    bool same_subspace(const LinearRelation& o) const;
    /// Eigenvalues (infinite entries for the multivalued part), through a random shift.
    std::vector<cplx> spectrum(std::uint64_t seed = 1) const;

private:
    Mat Y_, X_;
    std::optional<Mat> M_;
};

/// Factorized (w - A)^{-1}, reusable for repeated application to a running vector.
class Resolvent {
public:
    Resolvent(const LinearRelation& A, cplx w);
    cplx node() const { return w_; }
    /// Throws ResolventFailure when the resolvent does not apply to u.
    Vec apply(const Vec& u) const;

private:
    cplx w_;
    bool fast_ = false;
    Eigen::PartialPivLU<Mat> lu_;
    Mat X_;
    LinearRelation general_;
};

/// h(A) u for a Moebius map h; node is reported on failure.
Vec apply_moebius(const LinearRelation& A, const Moebius& h, const Vec& u, cplx node);

struct DomainFailure {
    std::vector<cplx> nodes;
    std::string message;
};

struct DomainReport {
    double max_norm = 0.0;
    std::size_t evaluated = 0;
    std::vector<DomainFailure> failures;
    bool ok() const { return failures.empty(); }
};

struct DomainSampler {
    int per_curve = 33;
    int near_diagonal = 8;
    int random_tuples = 200;  ///< used for m >= 3 instead of the full grid
    std::uint64_t seed = 1;
};

/// Sampled surrogate for u in D^n: iterated resolvents at grid tuples on the
/// carrier (embedded points), for every tuple length m <= n.
DomainReport domain_check(const LinearRelation& A, const CurveSystem& sys, int n, const Vec& u,
                          const DomainSampler& sampler = {});

}  // namespace curvecalc
