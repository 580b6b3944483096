#include "curvecalc/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace curvecalc::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

[[noreturn]] void bad(const std::string& what) { throw ParseError(what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double num(const json& j) {
    if (!j.is_number()) bad("expected a number");
    return j.get<double>();
}

cplx cnum(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    bad("expected a complex number [re, im]");
}

int integer(const json& j) {
    if (!j.is_number_integer()) bad("expected an integer");
    return j.get<int>();
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

Moebius moebius_from(const json& j) {
    if (!j.is_array() || j.size() != 4) bad("chart must be [a, b, c, d]");
    try {
        return Moebius(cnum(j[0]), cnum(j[1]), cnum(j[2]), cnum(j[3]));
    } catch (const InvalidArgument& e) {
        bad(e.what());
    }
}

json moebius_json(const Moebius& h) { return json::array({cjson(h.a), cjson(h.b), cjson(h.c), cjson(h.d)}); }

LipschitzCurve curve_from(const json& j) {
    const json& vs = field(j, "vertices");
    if (!vs.is_array()) bad("vertices must be an array");
    std::vector<cplx> pts;
    for (const auto& v : vs) pts.push_back(cnum(v));
    return make_curve(pts);
}

json curve_json(const LipschitzCurve& c) {
    json vs = json::array();
    for (cplx v : c.vertices()) vs.push_back(cjson(v));
    return {{"vertices", vs}};
}

CurveSystemPtr system_from(const json& j) {
    std::vector<LipschitzCurve> cs;
    if (j.is_object() && j.contains("curves")) {
        if (!j["curves"].is_array()) bad("curves must be an array");
        for (const auto& c : j["curves"]) cs.push_back(curve_from(c));
    } else {
        cs.push_back(curve_from(j));
    }
    Moebius e;
    if (j.is_object() && j.contains("embedding")) e = moebius_from(j["embedding"]);
    return std::make_shared<const CurveSystem>(std::move(cs), e);
}

Density density_from(const json& j) {
    std::string kind = field(j, "kind").is_string() ? j["kind"].get<std::string>() : "";
    const json& data = field(j, "data");
    if (kind == "const") return Density::constant(cnum(data));
    if (kind == "poly") {
        if (!data.is_array()) bad("poly data must be a coefficient list");
        std::vector<cplx> cs;
        for (const auto& c : data) cs.push_back(cnum(c));
        return Density::polynomial(std::move(cs));
    }
    if (kind == "table") {
        if (!data.is_array()) bad("table data must be a list of [t, re, im]");
        std::vector<double> ts;
        std::vector<cplx> vs;
        for (const auto& row : data) {
            if (!row.is_array() || (row.size() != 2 && row.size() != 3)) bad("table row must be [t, re, im]");
            ts.push_back(num(row[0]));
            vs.emplace_back(num(row[1]), row.size() == 3 ? num(row[2]) : 0.0);
        }
        bool holder = j.contains("holder") && j["holder"].is_boolean() && j["holder"].get<bool>();
        return Density::table(std::move(ts), std::move(vs), holder);
    }
    bad("unknown density kind \"" + kind + "\"");
}

CurveMeasure measure_from(const json& j, CurveSystemPtr sys) {
    if (!j.is_object()) bad("measure must be an object");
    CurveMeasure mu(sys);
    const int nc = static_cast<int>(sys->num_curves());
    auto curve_index = [&](const json& e) {
        int c = e.contains("curve") ? integer(e["curve"]) : 0;
        if (c < 0 || c >= nc) bad("curve index out of range");
        return c;
    };
    if (j.contains("atoms"))
        for (const auto& a : j["atoms"]) {
            Atom at;
            at.curve = curve_index(a);
            at.t = num(field(a, "t"));
            at.w = cnum(field(a, "w"));
            if (at.t < 0.0 || at.t > sys->curve(at.curve).length()) bad("atom parameter outside the curve");
            mu.atoms.push_back(at);
        }
    if (j.contains("densities"))
        for (const auto& d : j["densities"]) mu.densities.emplace_back(curve_index(d), density_from(d));
    return mu;
}

json measure_json(const CurveMeasure& mu) {
    json atoms = json::array(), dens = json::array();
    for (const auto& a : mu.atoms) atoms.push_back({{"curve", a.curve}, {"t", a.t}, {"w", cjson(a.w)}});
    for (const auto& [c, d] : mu.densities) {
        if (d.spec.empty()) throw InvalidArgument("derived density has no JSON form");
        json e = json::parse(d.spec);
        e["curve"] = c;
        dens.push_back(e);
    }
    return {{"atoms", atoms}, {"densities", dens}};
}

NormalForm named_form(const json& j) {
    std::string name = field(j, "named").is_string() ? j["named"].get<std::string>() : "";
    try {
        if (name == "principal_power") return principal_power(cnum(field(j, "alpha")));
        if (name == "principal_log") return principal_log();
        if (name == "curve_power") return curve_power(curve_from(field(j, "curve")), cnum(field(j, "alpha")));
        if (name == "curve_log_power") {
            int n = j.contains("n") ? integer(j["n"]) : 1;
            return curve_log_power(curve_from(field(j, "curve")), n);
        }
        if (name == "rational") {
            std::vector<Pole> poles;
            for (const auto& p : field(j, "poles")) {
                Pole q;
                q.p = cnum(field(p, "p"));
                if (p.contains("order")) q.order = integer(p["order"]);
                if (p.contains("coeff")) q.coeff = cnum(p["coeff"]);
                poles.push_back(q);
            }
            return rational(poles, j.contains("constant") ? cnum(j["constant"]) : cplx(0.0));
        }
    } catch (const json::exception& e) {
        bad(e.what());
    }
    bad("unknown named function \"" + name + "\"");
}

}  // namespace

LipschitzCurve curve_from_json(const std::string& text) { return curve_from(parse(text)); }
std::string curve_to_json(const LipschitzCurve& c) { return curve_json(c).dump(); }

CurveSystemPtr system_from_json(const std::string& text) { return system_from(parse(text)); }

std::string system_to_json(const CurveSystem& sys) {
    json cs = json::array();
    for (const auto& c : sys.curves()) cs.push_back(curve_json(c));
    json j{{"curves", cs}};
    if (sys.embedded()) j["embedding"] = moebius_json(sys.embedding());
    return j.dump();
}

CurveMeasure measure_from_json(const std::string& text, CurveSystemPtr sys) {
    return measure_from(parse(text), std::move(sys));
}
std::string measure_to_json(const CurveMeasure& mu) { return measure_json(mu).dump(); }

NormalForm normal_form_from_json(const std::string& text, CurveSystemPtr default_carrier) {
    json j = parse(text);
    if (!j.is_object()) bad("normal form must be an object");
    if (j.contains("named")) return named_form(j);
    NormalForm nf;
    if (j.contains("chart")) nf.chart = moebius_from(j["chart"]);
    if (j.contains("carrier"))
        nf.carrier = system_from(j["carrier"]);
    else if (default_carrier)
        nf.carrier = default_carrier;
    else
        bad("normal form needs a carrier (field \"carrier\" or --curve)");
    if (j.contains("constant")) nf.constant = cnum(j["constant"]);
    if (j.contains("terms")) {
        if (!j["terms"].is_array()) bad("terms must be an array");
        for (const auto& t : j["terms"]) {
            Term term;
            term.k = t.contains("k") ? integer(t["k"]) : 1;
            if (term.k < 1) bad("term level k must be >= 1");
            term.mu = measure_from(field(t, "measure"), nf.carrier);
            nf.degree = std::max(nf.degree, term.k);
            nf.terms.push_back(std::move(term));
        }
    }
    if (j.contains("degree")) nf.degree = std::max(nf.degree, integer(j["degree"]));
    return nf;
}

std::string normal_form_to_json(const NormalForm& nf) {
    json terms = json::array();
    for (const auto& t : nf.terms) terms.push_back({{"k", t.k}, {"measure", measure_json(t.mu)}});
    json j{{"chart", moebius_json(nf.chart)}, {"constant", cjson(nf.constant)}, {"terms", terms},
           {"degree", nf.degree}};
    if (nf.carrier) j["carrier"] = json::parse(system_to_json(*nf.carrier));
    return j.dump();
}

namespace {

Mat matrix_from(const json& rows, int d) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != d) bad("matrix must have d rows");
    Mat M(d, rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (int i = 0; i < d; ++i) {
        if (!rows[i].is_array() || static_cast<Eigen::Index>(rows[i].size()) != M.cols())
            bad("matrix rows must have equal length");
        for (Eigen::Index k = 0; k < M.cols(); ++k) M(i, k) = cnum(rows[i][k]);
    }
    return M;
}

json matrix_json(const Mat& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index k = 0; k < M.cols(); ++k) r.push_back(cjson(M(i, k)));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

LinearRelation relation_from_json(const std::string& text) {
    json j = parse(text);
    if (!j.is_object()) bad("relation must be an object");
    if (j.contains("matrix")) {
        const json& m = j["matrix"];
        if (!m.is_array()) bad("matrix must be an array of rows");
        Mat M = matrix_from(m, static_cast<int>(m.size()));
        if (M.rows() != M.cols()) bad("operator matrix must be square");
        return LinearRelation::from_matrix(M);
    }
    const int d = integer(field(j, "dim"));
    if (d <= 0) bad("dim must be positive");
    Mat Y = matrix_from(field(j, "Y"), d), X = matrix_from(field(j, "X"), d);
    if (Y.cols() != X.cols()) bad("Y and X must have the same number of columns");
    return LinearRelation(Y, X);
}

std::string relation_to_json(const LinearRelation& A) {
    if (A.matrix()) return json{{"matrix", matrix_json(*A.matrix())}}.dump();
    return json{{"dim", A.dim()}, {"Y", matrix_json(A.Y())}, {"X", matrix_json(A.X())}}.dump();
}

Vec vector_from_json(const std::string& text) {
    json j = parse(text);
    const json& a = j.is_object() ? field(j, "vector") : j;
    if (!a.is_array() || a.empty()) bad("vector must be a nonempty array");
    Vec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = cnum(a[i]);
    return v;
}

std::string vector_to_json(const Vec& v) {
    std::ostringstream os;
    os.precision(17);
    os << std::scientific << "[";
    for (Eigen::Index i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << "[" << v[i].real() << "," << v[i].imag() << "]";
    os << "]";
    return os.str();
}

std::string stats_to_json(const QuadStats& st) {
    std::ostringstream os;
    os.precision(17);
    os << std::scientific << "{\"evals\":" << st.evals << ",\"intervals\":" << st.intervals
       << ",\"converged\":" << (st.converged ? "true" : "false") << ",\"err_est\":" << st.err_est << "}";
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace curvecalc::io
