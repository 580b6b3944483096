#include "curvecalc/linrel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <random>

namespace curvecalc {

namespace {

Mat stacked(const Mat& Y, const Mat& X) {
    Mat S(Y.rows() + X.rows(), Y.cols());
    S << Y, X;
    return S;
}

int numerical_rank(const Eigen::VectorXd& sv, double scale) {
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > kRankTol * scale) ++r;
    return r;
}

int rank_of(const Mat& S) {
    if (S.cols() == 0 || S.rows() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(S);
    const auto& sv = svd.singularValues();
    return sv.size() == 0 ? 0 : numerical_rank(sv, sv[0]);
}

}  // namespace

LinearRelation::LinearRelation(Mat Y, Mat X) {
    if (Y.rows() != X.rows() || Y.cols() != X.cols())
        throw InvalidArgument("Y and X must have the same shape");
    const Eigen::Index d = Y.rows();
    if (Y.cols() == 0) {
        Y_ = Mat(d, 0);
        X_ = Mat(d, 0);
        return;
    }
    Mat S = stacked(Y, X);
    Eigen::JacobiSVD<Mat> svd(S, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const int r = sv[0] > 0.0 ? numerical_rank(sv, sv[0]) : 0;
    if (r == S.cols()) {
        Y_ = std::move(Y);
        X_ = std::move(X);
        return;
    }
    Mat G = svd.matrixU().leftCols(r) * sv.head(r).cast<cplx>().asDiagonal();
    Y_ = G.topRows(d);
    X_ = G.bottomRows(d);
}

LinearRelation LinearRelation::from_matrix(const Mat& M) {
    if (M.rows() != M.cols()) throw InvalidArgument("operator matrix must be square");
    LinearRelation A;
    A.Y_ = M;
    A.X_ = Mat::Identity(M.rows(), M.cols());
    A.M_ = M;
    return A;
}

bool LinearRelation::is_operator() const {
    if (M_) return true;
    return rank_of(X_) == rank();
}

Vec LinearRelation::apply(const Vec& u) const {
    if (u.size() != dim()) throw InvalidArgument("vector dimension mismatch");
    if (M_) return *M_ * u;
    if (rank() == 0) {
        if (u.norm() > 0.0) throw NotInDomain("relation has empty domain");
        return Vec::Zero(dim());
    }
    Eigen::JacobiSVD<Mat> svd(X_, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = std::max(sv.size() ? sv[0] : 0.0, stacked(Y_, X_).norm() / std::sqrt(double(rank())));
    const int r = numerical_rank(sv, scale);
    Vec c = Vec::Zero(rank());
    if (r > 0) {
        Vec proj = svd.matrixU().leftCols(r).adjoint() * u;
        for (int i = 0; i < r; ++i) proj[i] /= sv[i];
        c = svd.matrixV().leftCols(r) * proj;
    }
    const double res = (X_ * c - u).norm();
    if (res > kRankTol * (scale * c.norm() + u.norm()) + 1e-300)
        throw NotInDomain("u is not in the domain (residual " + std::to_string(res) + ")");
    if (r < rank()) {
        Mat N = svd.matrixV().rightCols(rank() - r);
        if ((Y_ * N).norm() > kRankTol * scale)
            throw MultiValued("relation is multivalued at u");
    }
    return Y_ * c;
}

LinearRelation LinearRelation::moebius_apply(const Moebius& h) const {
    LinearRelation B(h.a * Y_ + h.b * X_, h.c * Y_ + h.d * X_);
    if (M_ && h.is_affine()) {
        B.M_ = (h.a * *M_ + h.b * Mat::Identity(dim(), dim())) / h.d;
        B.Y_ = *B.M_;
        B.X_ = Mat::Identity(dim(), dim());
    }
    return B;
}

Vec LinearRelation::resolvent_apply(cplx w, const Vec& u) const { return Resolvent(*this, w).apply(u); }

Vec LinearRelation::iterated_resolvent(const std::vector<cplx>& ws, const Vec& u) const {
    Vec v = u;
    for (auto it = ws.rbegin(); it != ws.rend(); ++it) v = Resolvent(*this, *it).apply(v);
    return v;
}

bool LinearRelation::same_subspace(const LinearRelation& o) const {
    if (dim() != o.dim()) return false;
    Mat S1 = stacked(Y_, X_), S2 = stacked(o.Y_, o.X_);
    Mat S(S1.rows(), S1.cols() + S2.cols());
    S << S1, S2;
    int r1 = rank_of(S1), r2 = rank_of(S2), r = rank_of(S);
    return r1 == r2 && r == r1;
}

std::vector<cplx> LinearRelation::spectrum(std::uint64_t seed) const {
    if (rank() != dim()) throw InvalidArgument("spectrum needs a relation of full rank d");
    if (M_) {
        Eigen::ComplexEigenSolver<Mat> es(*M_, false);
        std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + dim());
        return ev;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const double scale = 1.0 + Y_.norm() / std::max(X_.norm(), 1e-300);
    for (int attempt = 0; attempt < 8; ++attempt) {
        cplx sigma = scale * cplx(nd(rng), nd(rng));
        Eigen::PartialPivLU<Mat> lu(Y_ - sigma * X_);
        if (lu.rcond() < 1e-13) continue;
        Mat B = X_ * lu.inverse();
        Eigen::ComplexEigenSolver<Mat> es(B, false);
        const double bnorm = B.norm();
        std::vector<cplx> ev;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            cplx mu = es.eigenvalues()[i];
            if (std::abs(mu) <= 1e-13 * bnorm)
                ev.push_back({std::numeric_limits<double>::infinity(), 0.0});
            else
                ev.push_back(sigma + 1.0 / mu);
        }
        return ev;
    }
    throw InvalidArgument("spectrum covers the whole plane");
}

// --------------------------------------------------------------- Resolvent

Resolvent::Resolvent(const LinearRelation& A, cplx w) : w_(w) {
    const int d = A.dim();
    if (A.rank() == d) {
        Mat T = A.matrix() ? Mat(w * Mat::Identity(d, d) - *A.matrix()) : Mat(w * A.X() - A.Y());
        lu_.compute(T);
        if (lu_.rcond() > 1e-14) {
            fast_ = true;
            if (!A.matrix()) X_ = A.X();
            return;
        }
    }
    general_ = LinearRelation(A.X(), w * A.X() - A.Y());
}

Vec Resolvent::apply(const Vec& u) const {
    if (fast_) {
        Vec c = lu_.solve(u);
        return X_.size() ? Vec(X_ * c) : c;
    }
    try {
        return general_.apply(u);
    } catch (const NotInDomain& e) {
        throw ResolventFailure(w_, e.what());
    } catch (const MultiValued& e) {
        throw ResolventFailure(w_, e.what());
    }
}

Vec apply_moebius(const LinearRelation& A, const Moebius& h, const Vec& u, cplx node) {
    const int d = A.dim();
    if (A.rank() == d) {
        Mat T = h.c * A.Y() + h.d * A.X();
        Eigen::PartialPivLU<Mat> lu(T);
        if (lu.rcond() > 1e-14) return (h.a * A.Y() + h.b * A.X()) * lu.solve(u);
    }
    try {
        return A.moebius_apply(h).apply(u);
    } catch (const NotInDomain& e) {
        throw ResolventFailure(node, e.what());
    } catch (const MultiValued& e) {
        throw ResolventFailure(node, e.what());
    }
}

// ------------------------------------------------------------ domain check

namespace {

/// Failure text without the error-kind prefix added by Error.
std::string failure_text(const ResolventFailure& e) {
    std::string s = e.what();
    const std::string pre = e.kind() + ": ";
    return s.compare(0, pre.size(), pre) == 0 ? s.substr(pre.size()) : s;
}

void dfs(const std::vector<Resolvent>& R, const std::vector<cplx>& nodes, int depth, const Vec& v,
         std::vector<cplx>& tuple, DomainReport& rep) {
    if (depth == 0) return;
    for (std::size_t i = 0; i < R.size(); ++i) {
        tuple.push_back(nodes[i]);
        try {
            Vec w = R[i].apply(v);
            rep.max_norm = std::max(rep.max_norm, w.norm());
            ++rep.evaluated;
            dfs(R, nodes, depth - 1, w, tuple, rep);
        } catch (const ResolventFailure& e) {
            if (rep.failures.size() < 64) rep.failures.push_back({tuple, failure_text(e)});
        }
        tuple.pop_back();
    }
}

}  // namespace

DomainReport domain_check(const LinearRelation& A, const CurveSystem& sys, int n, const Vec& u,
                          const DomainSampler& sampler) {
    DomainReport rep;
    rep.max_norm = u.norm();
    rep.evaluated = 1;
    if (n <= 0) return rep;
    std::vector<cplx> nodes;
    std::vector<std::pair<int, double>> where;
    for (std::size_t c = 0; c < sys.num_curves(); ++c) {
        const double L = sys.curve(c).length();
        for (int i = 0; i < sampler.per_curve; ++i) {
            double t = L * (i + 0.5) / sampler.per_curve;
            nodes.push_back(sys.point(static_cast<int>(c), t));
            where.emplace_back(static_cast<int>(c), t);
        }
    }
    // eigenvalues on the carrier fall between grid nodes; test them exactly
    if (A.rank() == A.dim()) {
        for (cplx l : A.spectrum()) {
            if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) continue;
            CurvePoint cp;
            if (sys.distance(l, &cp) > 1e-8 * (1.0 + std::abs(l))) continue;
            nodes.push_back(l);
            where.emplace_back(cp.curve, cp.t);
        }
    }
    std::vector<Resolvent> R;
    R.reserve(nodes.size());
    for (cplx w : nodes) R.emplace_back(A, w);
    std::vector<cplx> tuple;
    dfs(R, nodes, std::min(n, 2), u, tuple, rep);

    std::mt19937_64 rng(sampler.seed);
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    auto run = [&](const std::vector<cplx>& ws) {
        try {
            Vec w = A.iterated_resolvent(ws, u);
            rep.max_norm = std::max(rep.max_norm, w.norm());
            ++rep.evaluated;
        } catch (const ResolventFailure& e) {
            if (rep.failures.size() < 64) rep.failures.push_back({ws, failure_text(e)});
        }
    };
    for (int m = 3; m <= n; ++m)
        for (int k = 0; k < sampler.random_tuples; ++k) {
            std::vector<cplx> ws(m);
            for (auto& w : ws) w = nodes[pick(rng)];
            run(ws);
        }
    if (n >= 2)
        for (int k = 0; k < sampler.near_diagonal; ++k) {
            auto [c, t] = where[pick(rng)];
            const double L = sys.curve(c).length();
            double t2 = std::min(L, t + 1e-3 * L);
            std::vector<cplx> ws(n, sys.point(c, t));
            ws.back() = sys.point(c, t2);
            run(ws);
        }
    return rep;
}

}  // namespace curvecalc
