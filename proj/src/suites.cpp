#include "curvecalc/suites.hpp"

#include "curvecalc/cauchy.hpp"
#include "curvecalc/estimates.hpp"
#include "curvecalc/funcalc.hpp"
#include "curvecalc/linrel.hpp"
#include "curvecalc/normalform.hpp"
#include "curvecalc/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cstdio>
#include <functional>
#include <map>
#include <random>

namespace curvecalc {

bool SuiteResult::pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

std::vector<SuiteRow> SuiteResult::summary() const {
    std::vector<SuiteRow> out;
    std::map<std::string, std::size_t> at;
    for (const auto& r : rows) {
        auto it = at.find(r.check);
        if (it == at.end()) {
            at[r.check] = out.size();
            out.push_back(r);
            continue;
        }
        SuiteRow& w = out[it->second];
        bool worse = !r.pass && w.pass;
        if (r.pass == w.pass) worse = r.lower_bound ? r.value < w.value : r.value > w.value;
        if (worse) w = r;
    }
    return out;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"resolvent", "reductions", "welldef", "multiplicativity",
                                                "locality",  "powers",     "estimates", "cauchy"};
    return names;
}

void write_csv(std::ostream& os, const SuiteResult& r, bool header) {
    if (header) os << "suite,check,criterion,index,value,threshold,kind,pass,note\n";
    char buf[64];
    for (const auto& row : r.rows) {
        os << r.suite << ',' << row.check << ',' << row.criterion << ',' << row.index << ',';
        std::snprintf(buf, sizeof buf, "%.17e", row.value);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17e", row.threshold);
        os << buf << ',' << (row.lower_bound ? "min" : "max") << ',' << (row.pass ? 1 : 0) << ',';
        std::string note = row.note;
        for (char& ch : note)
            if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
        os << note << '\n';
    }
}

namespace {

// ------------------------------------------------------------------ helpers

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t s) : eng(s) {}
    double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng); }
    double normal() { return std::normal_distribution<double>()(eng); }
    cplx cnormal() { return {normal(), normal()}; }
    double logu(double a, double b) { return std::exp(uni(std::log(a), std::log(b))); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
};

std::uint64_t salt(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char ch : s) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
    return h;
}

struct Check {
    std::string name;
    int criterion = 0;
    double threshold = 0.0;
    bool lower_bound = false;
};

using Instance = std::function<std::vector<double>(Rng&, int index)>;

/// Runs n instances of a check in parallel. Each instance may report several
/// values; rows keep the instance order. Failed hypotheses are redrawn.
void run_check(SuiteResult& res, const SuiteOptions& o, const Check& c, int n, const Instance& fn) {
    std::vector<std::vector<SuiteRow>> slots(static_cast<std::size_t>(n));
    const double thr = (!c.lower_bound && o.tol > 0.0) ? o.tol : c.threshold;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        std::vector<double> vals;
        std::string note;
        for (int attempt = 0;; ++attempt) {
            Rng rng(config_seed(o.seed ^ salt(c.name), i + 1000003ULL * attempt));
            try {
                vals = fn(rng, static_cast<int>(i));
                break;
            } catch (const HypothesisViolated& e) {
                if (attempt >= 200) {
                    note = e.what();
                    break;
                }
            } catch (const std::exception& e) {
                note = e.what();
                break;
            }
        }
        auto& out = slots[i];
        if (vals.empty()) {
            SuiteRow r{c.name, c.criterion, static_cast<int>(i), std::nan(""), thr, c.lower_bound, false, note};
            out.push_back(r);
            return;
        }
        for (std::size_t k = 0; k < vals.size(); ++k) {
            SuiteRow r{c.name, c.criterion, static_cast<int>(i * vals.size() + k), vals[k], thr, c.lower_bound,
                       false, ""};
            r.pass = std::isfinite(vals[k]) && (c.lower_bound ? vals[k] >= thr : vals[k] <= thr);
            out.push_back(r);
        }
    });
    for (auto& s : slots)
        for (auto& r : s) res.rows.push_back(std::move(r));
}

int count(const SuiteOptions& o, int def) { return o.n > 0 ? o.n : def; }

Vec random_vec(Rng& g, int d) {
    Vec u(d);
    for (int i = 0; i < d; ++i) u[i] = g.cnormal();
    return u;
}

Mat random_mat(Rng& g, int r, int c) {
    Mat M(r, c);
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < c; ++k) M(i, k) = g.cnormal();
    return M;
}

double cond(const Mat& V) {
    Eigen::JacobiSVD<Mat> svd(V);
    const auto& s = svd.singularValues();
    return s[0] / s[s.size() - 1];
}

/// V diag(ev) V^-1 with cond(V) <= max_cond.
Mat with_spectrum(Rng& g, const std::vector<cplx>& ev, double spread, double max_cond) {
    const int d = static_cast<int>(ev.size());
    Mat V = Mat::Identity(d, d) + spread * random_mat(g, d, d);
    if (cond(V) > max_cond) throw HypothesisViolated("eigenvector basis too ill-conditioned");
    Mat L = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) L(i, i) = ev[i];
    return V * L * V.inverse();
}

/// Eigenvalues drawn by rejection from a box.
std::vector<cplx> draw_spectrum(Rng& g, int d, double lo, double hi, const std::function<bool(cplx)>& ok) {
    std::vector<cplx> ev;
    for (int tries = 0; static_cast<int>(ev.size()) < d; ++tries) {
        if (tries > 10000) throw HypothesisViolated("no admissible eigenvalue");
        cplx z(g.uni(lo, hi), g.uni(lo, hi));
        if (ok(z)) ev.push_back(z);
    }
    return ev;
}

double dist_neg_axis(cplx z) { return z.real() >= 0.0 ? std::abs(z) : std::abs(z.imag()); }

double rel(const Vec& a, const Vec& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

std::vector<cplx> graph_polyline(Rng& g, cplx start, int nseg, double len, double spread, double axis) {
    std::vector<cplx> pts{start};
    for (int k = 0; k < nseg; ++k) pts.push_back(pts.back() + std::polar(len / nseg, axis + g.uni(-spread, spread)));
    return pts;
}

/// Random carrier: one polyline, two disjoint polylines, or two curves at a node.
CurveSystemPtr random_system(Rng& g) {
    const int kind = g.integer(0, 2);
    std::vector<LipschitzCurve> cs;
    if (kind == 1) {
        cs.push_back(make_curve(graph_polyline(g, {-1.5, 1.2}, g.integer(1, 3), 3.0, 0.5, 0.0)));
        cs.push_back(make_curve(graph_polyline(g, {-1.5, -1.2}, g.integer(1, 3), 3.0, 0.5, 0.0)));
    } else {
        auto pts = graph_polyline(g, {-1.5, g.uni(-0.5, 0.5)}, 4, 3.0, 0.6, 0.0);
        if (kind == 0) {
            cs.push_back(make_curve(pts));
        } else {
            cs.push_back(make_curve({pts[0], pts[1], pts[2]}));
            cs.push_back(make_curve({pts[2], pts[3], pts[4]}));
        }
    }
    return std::make_shared<const CurveSystem>(std::move(cs));
}

CurveMeasure random_measure(Rng& g, const CurveSystemPtr& sys) {
    CurveMeasure mu(sys);
    const int nc = static_cast<int>(sys->num_curves());
    const int na = g.integer(0, 2), nd = g.integer(na == 0 ? 1 : 0, 2);
    for (int i = 0; i < na; ++i) {
        int c = g.integer(0, nc - 1);
        double L = sys->curve(c).length();
        mu.atoms.push_back({c, g.uni(0.05, 0.95) * L, g.cnormal()});
    }
    for (int i = 0; i < nd; ++i) {
        std::vector<cplx> coeffs(g.integer(1, 3));
        for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = g.cnormal() / double(1 + k);
        mu.densities.emplace_back(g.integer(0, nc - 1), Density::polynomial(coeffs));
    }
    return mu;
}

NormalForm random_form(Rng& g, const CurveSystemPtr& sys, int degree) {
    NormalForm nf;
    nf.carrier = sys;
    nf.constant = g.cnormal();
    for (int k = 1; k <= degree; ++k) nf.terms.push_back({k, random_measure(g, sys)});
    nf.degree = degree;
    return nf;
}

Mat off_carrier_matrix(Rng& g, const CurveSystem& sys, int d, double margin) {
    auto ev = draw_spectrum(g, d, -3.0, 3.0, [&](cplx z) { return sys.distance(z) >= margin; });
    return with_spectrum(g, ev, 0.3, 50.0);
}

std::vector<CurvePoint> component_bases(const CurveSystem& sys) {
    std::vector<CurvePoint> b(sys.num_components(), CurvePoint{-1, 0.0});
    for (std::size_t c = 0; c < sys.num_curves(); ++c) {
        int comp = sys.component_of(c);
        if (b[comp].curve < 0) b[comp] = {static_cast<int>(c), 0.5 * sys.curve(c).length()};
    }
    return b;
}

LipschitzCurve square() { return make_curve({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}); }

LipschitzCurve hexagon() {
    std::vector<cplx> v;
    for (int k = 0; k <= 6; ++k) v.push_back(std::polar(1.0, kPi * (k % 6) / 3.0));
    return make_curve(v);
}

// ------------------------------------------------------------------- suites

void suite_resolvent(SuiteResult& res, const SuiteOptions& o) {
    const int n = count(o, 100);
    run_check(res, o, {"resolvent_identity", 1, 1e-10}, n, [](Rng& g, int i) {
        const int d = 4;
        LinearRelation A;
        if (i % 2 == 0) {
            A = LinearRelation::from_matrix(random_mat(g, d, d));
        } else {
            // multivalued: X drops rank, the pair still has rank d
            const int r = g.integer(d - 2, d - 1);
            Mat X = random_mat(g, d, r) * random_mat(g, r, d);
            A = LinearRelation(random_mat(g, d, d), X);
            if (A.rank() != d) throw HypothesisViolated("relation lost rank");
        }
        cplx w1 = 2.0 * g.cnormal(), w2 = 2.0 * g.cnormal();
        if (std::abs(w1 - w2) < 1e-3) throw HypothesisViolated("nodes coincide");
        Vec u = random_vec(g, d);
        Resolvent R1(A, w1), R2(A, w2);
        Vec a = R1.apply(u), b = R2.apply(u), ab = R1.apply(R2.apply(u));
        double scale = a.norm() + b.norm() + std::abs(w2 - w1) * ab.norm();
        return std::vector<double>{(a - b - (w2 - w1) * ab).norm() / scale};
    });
}

void suite_powers(SuiteResult& res, const SuiteOptions& o) {
    const int n_scalar = count(o, 20);
    run_check(res, o, {"scalar_consistency", 2, 1e-7}, n_scalar, [](Rng& g, int) {
        LipschitzCurve c = make_curve(graph_polyline(g, {-1.0, -0.5}, 3, 2.0, 0.7, g.uni(-kPi, kPi)));
        CurveSystemPtr sys = single_curve_system(c);
        cplx a;
        for (int tries = 0;; ++tries) {
            if (tries > 1000) throw HypothesisViolated("no admissible point");
            a = std::polar(g.logu(0.1, 10.0), g.uni(-kPi, kPi));
            if (dist_neg_axis(a) >= 0.1 && sys->distance(a) >= 0.2) break;
        }
        Mat A(1, 1);
        A(0, 0) = a;
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 1);
        cplx lg = curve_log(c, a);
        std::vector<std::pair<NormalForm, cplx>> cases{{principal_power(0.5), std::sqrt(a)},
                                                       {principal_log(), std::log(a)},
                                                       {curve_power(c, 1.0 / 3.0), std::exp(lg / 3.0)},
                                                       {curve_log_power(c, 2), lg * lg}};
        std::vector<double> out;
        for (const auto& [nf, fa] : cases) {
            Vec v = evaluate(ctx, nf, u);
            out.push_back(std::abs(v[0] - fa * u[0]) / ((1.0 + std::abs(fa)) * std::abs(u[0])));
        }
        return out;
    });

    auto root_matrix = [](Rng& g, int d) {
        auto ev = draw_spectrum(g, d, -6.0, 6.0, [](cplx z) { return dist_neg_axis(z) >= 0.5; });
        Mat A = with_spectrum(g, ev, 0.5, 1e3);
        if (eigenvector_condition(A) > 100.0) throw HypothesisViolated("eigenvector condition above 100");
        return A;
    };
    const int n_root = count(o, 50);
    run_check(res, o, {"oracle_root", 3, 1e-6}, n_root, [&](Rng& g, int) {
        Mat A = root_matrix(g, 5);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 5);
        Vec ref = oracle(A, [](cplx z) { return std::sqrt(z); }, u, 100.0);
        return std::vector<double>{rel(principal_power_op(ctx, 0.5, u), ref)};
    });
    run_check(res, o, {"semigroup", 4, 1e-6}, count(o, 20), [&](Rng& g, int) {
        Mat A = root_matrix(g, 4);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 4);
        Vec h = principal_power_op(ctx, 0.5, principal_power_op(ctx, 0.5, u));
        return std::vector<double>{rel(h, A * u)};
    });
    run_check(res, o, {"curve_power_group", 4, 1e-6}, count(o, 20), [](Rng& g, int) {
        LipschitzCurve c = make_curve(graph_polyline(g, {-1.0, 0.0}, 3, 2.0, 0.6, g.uni(-kPi, kPi)));
        CurveSystemPtr sys = single_curve_system(c);
        Mat A = off_carrier_matrix(g, *sys, 4, 0.3);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 4);
        LocalGroupReport r = local_group_check(ctx, c, 0.4, 0.4, u);
        Vec ref = oracle(A, [&](cplx z) { return std::exp(0.8 * curve_log(c, z)); }, u);
        return std::vector<double>{r.discrepancy / r.combined.norm(), rel(r.combined, ref)};
    });
    run_check(res, o, {"u_s_closed_form", 12, 1e-6}, count(o, 20), [](Rng& g, int i) {
        cplx a = i % 2 == 0 ? cplx(g.logu(0.05, 20.0), 0.0) : std::polar(g.logu(0.05, 20.0), g.uni(-2.8, 2.8));
        double alpha = i % 4 < 2 ? 0.5 : g.uni(-0.9, 0.9);
        Mat A(1, 1);
        A(0, 0) = a;
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = Vec::Ones(1);
        double worst = 0.0;
        for (int k = 0; k <= 8; ++k) {
            double s = -1.0 + 0.25 * k;
            cplx want = std::pow(0.5 * (1.0 + s) + 0.5 * (1.0 - s) * a, alpha);
            cplx got = u_s_continuation(ctx, alpha, s, u)[0];
            worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
        }
        return std::vector<double>{worst};
    });
    run_check(res, o, {"u_s_continuity", 12, 1e-5}, count(o, 10), [&](Rng& g, int) {
        Mat A = root_matrix(g, 4);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 4);
        Vec end = u_s_continuation(ctx, 0.5, -1.0, u);
        // s_k = -1 + 2^-k; the tail of the grid must sit on the endpoint value
        double worst = 0.0;
        for (int k = 17; k <= 40; ++k) {
            double s = -1.0 + std::ldexp(1.0, -k);
            worst = std::max(worst, rel(u_s_continuation(ctx, 0.5, s, u), end));
        }
        return std::vector<double>{worst};
    });
    run_check(res, o, {"u_s_transformed", 12, 1e-6}, count(o, 10), [&](Rng& g, int) {
        Mat A = root_matrix(g, 4);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 4);
        double s = g.uni(-0.9, 0.9);
        Mat B = 0.5 * (1.0 + s) * Mat::Identity(4, 4) + 0.5 * (1.0 - s) * A;
        CalculusContext cb(LinearRelation::from_matrix(B));
        return std::vector<double>{rel(u_s_continuation(ctx, 0.5, s, u), principal_power_op(cb, 0.5, u))};
    });
}

void suite_welldef(SuiteResult& res, const SuiteOptions& o) {
    run_check(res, o, {"well_defined", 5, 1e-7}, count(o, 20), [](Rng& g, int) {
        CurveSystemPtr sys = random_system(g);
        NormalForm nf = random_form(g, sys, g.integer(1, 2));
        Mat A = off_carrier_matrix(g, *sys, 4, 0.3);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 4);
        Vec ref = evaluate(ctx, nf, u);
        std::vector<double> out;
        SimpleNormalForm s = to_simple(nf, component_bases(*sys));
        out.push_back(rel(evaluate(ctx, s.to_normal_form(), u), ref));
        Eigen::ComplexEigenSolver<Mat> es(A, false);
        for (int k = 0; k < 5;) {
            Moebius h(g.cnormal(), g.cnormal(), g.cnormal(), g.cnormal());
            cplx p = h.pole();
            bool ok = sys->distance(p) >= 0.5;
            for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
                ok = ok && std::abs(es.eigenvalues()[j] - p) >= 0.5;
            if (!ok) continue;
            out.push_back(rel(evaluate(ctx, transport(nf, h), u), ref));
            ++k;
        }
        return out;
    });
}

void suite_multiplicativity(SuiteResult& res, const SuiteOptions& o) {
    run_check(res, o, {"multiplicativity", 6, 1e-7}, count(o, 50), [](Rng& g, int) {
        CurveSystemPtr sys = random_system(g);
        NormalForm f = random_form(g, sys, g.integer(0, 2));
        NormalForm h = random_form(g, sys, g.integer(0, 2));
        Mat A = off_carrier_matrix(g, *sys, 4, 0.3);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 4);
        ProductReport r = multiply_check(ctx, f, h, u);
        return std::vector<double>{r.discrepancy / std::max(r.sequential.norm(), 1e-300)};
    });
}

/// Matrix with spectrum strictly outside (inside = false) or inside a closed boundary.
Mat boundary_matrix(Rng& g, const LipschitzCurve& b, bool inside, int d) {
    CurveSystemPtr sys = single_curve_system(b);
    auto ev = draw_spectrum(g, d, -2.0, 2.5, [&](cplx z) {
        bool in = winding_number(b, z) != 0;
        return in == inside && sys->distance(z) >= (inside ? 0.15 : 0.3);
    });
    return with_spectrum(g, ev, 0.3, 50.0);
}

void suite_locality(SuiteResult& res, const SuiteOptions& o) {
    const int n = count(o, 12);
    auto instance = [](bool inside) {
        return [inside](Rng& g, int i) {
            LipschitzCurve b = i % 2 == 0 ? square() : hexagon();
            const int level = g.integer(0, 2);
            std::vector<cplx> poly(g.integer(1, 3));
            for (auto& c : poly) c = g.cnormal();
            NormalForm nf = boundary_form(b, poly, inside || g.integer(0, 1) == 1, level);
            Mat A = boundary_matrix(g, b, inside, 4);
            CalculusContext ctx(LinearRelation::from_matrix(A));
            Vec u = random_vec(g, 4);
            LocalityReport r = locality_check(ctx, nf, u);
            return std::vector<double>{r.norm / r.u_norm};
        };
    };
    run_check(res, o, {"locality_exterior", 7, 1e-6}, n, instance(false));
    if (o.negative_control) run_check(res, o, {"locality_interior_control", 7, 1e-2, true}, n, instance(true));
}

void suite_reductions(SuiteResult& res, const SuiteOptions& o) {
    const int n = count(o, 50);
    run_check(res, o, {"additive_reduction", 8, 1e-8}, n, [](Rng& g, int) {
        CurveSystemPtr sys = random_system(g);
        const int k = g.integer(1, 2);
        CurveMeasure mu = random_measure(g, sys);
        NormalForm f;
        f.carrier = sys;
        f.terms.push_back({k, mu});
        f.degree = k;
        NormalForm r;
        r.carrier = sys;
        r.degree = k + 1;
        ChoiceFunction phi(sys);
        auto bases = component_bases(*sys);
        for (int comp = 0; comp < sys->num_components(); ++comp) {
            CurveMeasure part = mu.restricted_to_component(comp);
            if (part.empty()) continue;
            AdditiveReduction red = additive_reduce(part, k, bases[comp], phi);
            CurveMeasure atom(sys);
            atom.atoms.push_back({bases[comp].curve, bases[comp].t, red.c});
            r.terms.push_back({k, atom});
            r.terms.push_back({k + 1, red.theta.scaled(double(k))});
        }
        Mat A = off_carrier_matrix(g, *sys, 4, 0.3);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 4);
        return std::vector<double>{rel(evaluate(ctx, r, u), evaluate(ctx, f, u))};
    });
    run_check(res, o, {"multiplicative_reduction", 8, 1e-8}, n, [](Rng& g, int) {
        CurveSystemPtr sys = random_system(g);
        const int n1 = g.integer(0, 1), n2 = g.integer(0, 1);
        CurveMeasure m1 = random_measure(g, sys), m2 = random_measure(g, sys);
        ChoiceFunction phi(sys);
        auto theta = multiplicative_reduce(m1, n1, m2, n2, phi);
        NormalForm f1, f2, r;
        f1.carrier = f2.carrier = r.carrier = sys;
        f1.terms.push_back({n1 + 1, m1});
        f2.terms.push_back({n2 + 1, m2});
        f1.degree = n1 + 1;
        f2.degree = n2 + 1;
        for (std::size_t k = 0; k < theta.size(); ++k)
            if (!theta[k].empty()) r.terms.push_back({static_cast<int>(k) + 1, theta[k]});
        r.degree = static_cast<int>(theta.size());
        Mat A = off_carrier_matrix(g, *sys, 4, 0.3);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 4);
        Vec seq = evaluate(ctx, f1, evaluate(ctx, f2, u));
        return std::vector<double>{rel(evaluate(ctx, r, u), seq)};
    });
    run_check(res, o, {"cycle_vanishing", 9, 1e-9}, count(o, 12), [](Rng& g, int i) {
        LipschitzCurve b = i % 2 == 0 ? square() : hexagon();
        std::vector<double> out;
        for (int level = 1; level <= 3; ++level) {
            std::vector<cplx> poly(g.integer(1, level));
            double scale = 1.0;
            for (auto& c : poly) {
                c = g.cnormal();
                scale += std::abs(c);
            }
            NormalForm nf = boundary_form(b, poly, false, level);
            Mat A = boundary_matrix(g, b, g.integer(0, 1) == 1, 4);
            CalculusContext ctx(LinearRelation::from_matrix(A));
            Vec u = random_vec(g, 4);
            out.push_back(evaluate(ctx, nf, u).norm() / (u.norm() * scale));
            cplx z;
            CurveSystemPtr sys = single_curve_system(b);
            do z = cplx(g.uni(-3.0, 3.0), g.uni(-3.0, 3.0));
            while (winding_number(b, z) != 0 || sys->distance(z) < 0.2);
            out.push_back(std::abs(vanishing_cycle_check(b, poly, level, z)) / scale);
        }
        return out;
    });
    run_check(res, o, {"interior_pole_replacement", 0, 1e-7}, count(o, 12), [](Rng& g, int i) {
        LipschitzCurve b = i % 2 == 0 ? square() : hexagon();
        const int level = g.integer(1, 3);
        std::vector<InteriorPoint> pts;
        std::vector<Pole> poles;
        CurveSystemPtr sys = single_curve_system(b);
        for (int k = g.integer(1, 3); k > 0; --k) {
            cplx w;
            do w = cplx(g.uni(-1.0, 1.0), g.uni(-1.0, 1.0));
            while (winding_number(b, w) != 1 || sys->distance(w) < 0.1);
            cplx c = g.cnormal();
            pts.push_back({w, c});
            poles.push_back({w, level, c});
        }
        Terms t = encircle_reduce(pts, b, g.uni(0.0, b.length()), level);
        NormalForm r;
        r.carrier = t.front().mu.sys;
        r.terms = t;
        r.degree = level + 1;
        Mat A = boundary_matrix(g, b, false, 4);
        CalculusContext ctx(LinearRelation::from_matrix(A));
        Vec u = random_vec(g, 4);
        NormalForm direct = rational(poles);
        return std::vector<double>{rel(evaluate(ctx, r, u), evaluate(ctx, direct, u))};
    });
}

void suite_estimates(SuiteResult& res, const SuiteOptions& o) {
    const int n = count(o, 1000);
    for (const auto& id : lemma_ids()) {
        if (!o.lemma.empty() && o.lemma != id) continue;
        std::vector<SuiteRow> rows(static_cast<std::size_t>(n));
        parallel_for(rows.size(), [&](std::size_t i) {
            SuiteRow r{"lemma_" + id, 11, static_cast<int>(i), 0.0, 1.0 + 1e-12, false, false, ""};
            try {
                InequalityResult q = verify_inequality(id, config_seed(o.seed ^ salt(id), i));
                r.value = q.rhs > 0.0 ? q.lhs / q.rhs : (q.lhs == 0.0 ? 0.0 : INFINITY);
                r.pass = q.holds;
                if (!q.holds && q.lhs <= q.rhs * (1.0 + 1e-12)) r.note = "equality case broken";
            } catch (const std::exception& e) {
                r.value = std::nan("");
                r.note = e.what();
            }
            rows[i] = r;
        });
        for (auto& r : rows) res.rows.push_back(std::move(r));
    }
    if (o.lemma.empty() || o.lemma == "3.2") {
        BruteForceReport bf = brute_force_rearrangement(4);
        SuiteRow r{"lemma_3.2_bruteforce", 11, 0, double(bf.violations + bf.equality_failures), 0.0, false,
                   false, std::to_string(bf.instances) + " instances"};
        r.pass = r.value == 0.0;
        res.rows.push_back(r);
    }
    if (o.lemma.empty() || o.lemma == "3.12") {
        std::vector<SuiteRow> rows(9);
        parallel_for(rows.size(), [&](std::size_t i) {
            const int fixture = static_cast<int>(i) / 3, power = static_cast<int>(i) % 3 + 1;
            // fresh samples under an independent seed must stay below the reference constant
            LogConstant lc = log_constant(fixture, power, 2000, o.seed ^ 0x5EEDF00DULL);
            const double ref = log_constant_reference(fixture, power);
            SuiteRow r{"lemma_3.12_constant_margin", 11, static_cast<int>(i), lc.c_2n / ref, 1.0, false, false,
                       "fixture " + std::to_string(fixture) + " power " + std::to_string(power)};
            r.pass = std::isfinite(r.value) && r.value <= 1.0;
            rows[i] = r;
        });
        for (auto& r : rows) res.rows.push_back(std::move(r));
    }
}

void suite_cauchy(SuiteResult& res, const SuiteOptions& o) {
    const int n = count(o, 20);
    auto random_curve = [](Rng& g) {
        return make_curve(graph_polyline(g, {-1.0, 0.0}, 3, 2.0, 0.6, g.uni(-kPi, kPi)));
    };
    auto off_point = [](Rng& g, const LipschitzCurve& c) {
        CurveSystemPtr sys = single_curve_system(c);
        for (;;) {
            cplx z(g.uni(-2.5, 2.5), g.uni(-2.5, 2.5));
            if (sys->distance(z) >= 0.05) return z;
        }
    };
    auto relerr = [](cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    run_check(res, o, {"logref1_log_powers", 10, 1e-6}, n, [&](Rng& g, int) {
        LipschitzCurve c = random_curve(g);
        cplx z = off_point(g, c);
        cplx lg = curve_log(c, z);
        std::vector<double> out;
        for (int m = 1; m <= 3; ++m) out.push_back(relerr(curve_log_power(c, m).eval(z), std::pow(lg, m)));
        return out;
    });
    run_check(res, o, {"logref1_powers", 10, 1e-6}, n, [&](Rng& g, int) {
        LipschitzCurve c = random_curve(g);
        cplx z = off_point(g, c);
        cplx lg = curve_log(c, z);
        std::vector<double> out;
        for (double a : {0.3, -0.3, 0.7, -0.7}) out.push_back(relerr(curve_power(c, a).eval(z), std::exp(a * lg)));
        return out;
    });
    run_check(res, o, {"logref2_interval", 10, 1e-6}, n, [&](Rng& g, int) {
        LipschitzCurve c = make_curve({{-1.0, 0.0}, {1.0, 0.0}});
        cplx z = off_point(g, c);
        cplx lg = std::log((z - 1.0) / (z + 1.0));
        std::vector<double> out;
        for (int m = 1; m <= 3; ++m) out.push_back(relerr(curve_log_power(c, m).eval(z), std::pow(lg, m)));
        for (double a : {1.0 / 3.0, -0.5, 0.8})
            out.push_back(relerr(curve_power(c, a).eval(z), std::pow((z - 1.0) / (z + 1.0), a)));
        return out;
    });
    run_check(res, o, {"jump_recovery", 10, 1e-3}, n, [&](Rng& g, int) {
        LipschitzCurve c = random_curve(g);
        CurveSystemPtr sys = single_curve_system(c);
        CurveMeasure mu(sys);
        std::vector<cplx> coeffs(g.integer(1, 3));
        for (auto& x : coeffs) x = g.cnormal();
        Density d = Density::polynomial(coeffs);
        mu.densities.emplace_back(0, d);
        const auto& ts = c.params();
        int j = g.integer(0, static_cast<int>(ts.size()) - 2);
        double s = ts[j] + g.uni(0.2, 0.8) * (ts[j + 1] - ts[j]);
        if (s - ts[j] > 0.1) mu.atoms.push_back({0, ts[j], g.cnormal()});
        Terms terms{{1, mu}};
        Limit m = jump_density(terms, 0, s);
        return std::vector<double>{std::abs(m.value - d(s, c.length() - s))};
    });
    run_check(res, o, {"atom_limit", 10, 1e-2}, n, [&](Rng& g, int i) {
        LipschitzCurve c = random_curve(g);
        CurveSystemPtr sys = single_curve_system(c);
        const auto& ts = c.params();
        int j = g.integer(0, static_cast<int>(ts.size()) - 2);
        double s = ts[j] + g.uni(0.2, 0.8) * (ts[j + 1] - ts[j]);
        CurveMeasure mu(sys);
        cplx w = i % 4 == 3 ? cplx(0.0) : g.cnormal();
        if (w != cplx(0.0)) mu.atoms.push_back({0, s, w});
        mu.densities.emplace_back(0, Density::polynomial({g.cnormal(), g.cnormal()}));
        cplx xi = sys->dgamma(0, s) * std::polar(1.0, g.uni(0.3, kPi - 0.3) * (g.integer(0, 1) ? 1.0 : -1.0));
        Limit m = atom_limit({{1, mu}}, 0, s, xi);
        return std::vector<double>{std::abs(m.value - w)};
    });
}

}  // namespace

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
    SuiteResult res;
    res.suite = name;
    if (name == "resolvent")
        suite_resolvent(res, opts);
    else if (name == "powers")
        suite_powers(res, opts);
    else if (name == "welldef")
        suite_welldef(res, opts);
    else if (name == "multiplicativity")
        suite_multiplicativity(res, opts);
    else if (name == "locality")
        suite_locality(res, opts);
    else if (name == "reductions")
        suite_reductions(res, opts);
    else if (name == "estimates")
        suite_estimates(res, opts);
    else if (name == "cauchy")
        suite_cauchy(res, opts);
    else
        throw InvalidArgument("unknown suite \"" + name + "\"");
    return res;
}

}  // namespace curvecalc
