#include "curvecalc/funcalc.hpp"
#include "curvecalc/io.hpp"
#include "curvecalc/suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace curvecalc;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitResolvent = 2;
constexpr int kExitInput = 3;

struct EvalArgs {
    std::string nf, op, vec, curve, out;
    double tol = -1.0;
};

struct CheckArgs {
    std::string suite, out, lemma;
    int n = -1;
    std::uint64_t seed = 7;
    double tol = -1.0;
    bool negative_control = false;
};

std::string fmt_node(cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << std::scientific << "[" << z.real() << "," << z.imag() << "]";
    return os.str();
}

/// Writes text to --out if given, else stdout.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw ParseError("cannot write " + path);
    f << text;
}

int cmd_eval(const EvalArgs& a) {
    try {
        CurveSystemPtr carrier;
        if (!a.curve.empty()) carrier = io::system_from_json(io::read_file(a.curve));
        NormalForm nf = io::normal_form_from_json(io::read_file(a.nf), carrier);
        LinearRelation A = io::relation_from_json(io::read_file(a.op));
        Vec u = io::vector_from_json(io::read_file(a.vec));
        if (u.size() != A.dim()) throw ParseError("vector dimension does not match the operator");

        CalculusContext ctx(std::move(A));
        ctx.domain_policy = true;
        if (a.tol > 0.0) ctx.rule.tol = a.tol;
        QuadStats st;
        Vec r = evaluate(ctx, nf, u, &st);
        emit(a.out, "{\"result\":" + io::vector_to_json(r) + ",\"stats\":" + io::stats_to_json(st) + "}\n");
        if (!st.converged) std::cerr << "warning: quadrature did not reach the requested tolerance\n";
        return 0;
    } catch (const ResolventFailure& e) {
        std::cerr << "ResolventFailure at node " << fmt_node(e.node()) << ": " << std::string(e.what()).substr(e.kind().size() + 2) << "\n";
        return kExitResolvent;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInput;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitFail;
    }
}

int cmd_check(const CheckArgs& a) {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), a.suite) == names.end()) {
        std::cerr << "unknown suite \"" << a.suite << "\"; expected one of:";
        for (const auto& n : names) std::cerr << " " << n;
        std::cerr << "\n";
        return kExitInput;
    }
    SuiteOptions o;
    o.n = a.n;
    o.seed = a.seed;
    o.tol = a.tol;
    o.negative_control = a.negative_control;
    o.lemma = a.lemma;
    SuiteResult r;
    try {
        r = run_suite(a.suite, o);
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInput;
    }
    std::ostringstream csv;
    write_csv(csv, r);
    try {
        emit(a.out, csv.str());
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInput;
    }
    for (const auto& row : r.summary())
        std::cerr << (row.pass ? "PASS " : "FAIL ") << r.suite << "/" << row.check << " worst=" << row.value
                  << (row.lower_bound ? " >= " : " <= ") << row.threshold << "\n";
    return r.pass() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvecalc: holomorphic functional calculus on Lipschitz curve systems"};
    app.require_subcommand(1);

    EvalArgs ea;
    auto* ev = app.add_subcommand("eval", "evaluate f(A) u for a normal form f");
    ev->add_option("--nf", ea.nf, "normal form JSON")->required();
    ev->add_option("--op", ea.op, "operator or relation JSON")->required();
    ev->add_option("--vec", ea.vec, "vector JSON")->required();
    ev->add_option("--curve", ea.curve, "default carrier (curve system JSON)");
    ev->add_option("--tol", ea.tol, "quadrature tolerance");
    ev->add_option("--out", ea.out, "output path (default stdout)");

    CheckArgs ca;
    auto* ck = app.add_subcommand("check", "run an acceptance suite and write a CSV margin report");
    ck->add_option("suite", ca.suite, "suite name")->required();
    ck->add_option("--n", ca.n, "instances per check");
    ck->add_option("--seed", ca.seed, "run seed");
    ck->add_option("--tol", ca.tol, "override every threshold");
    ck->add_option("--out", ca.out, "CSV path (default stdout)");
    ck->add_option("--lemma", ca.lemma, "estimates: run a single lemma");
    ck->add_flag("--negative-control", ca.negative_control, "also run negative controls");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }
    if (ev->parsed()) return cmd_eval(ea);
    return cmd_check(ca);
}
