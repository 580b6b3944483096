#pragma once

#include "curvecalc/common.hpp"
#include "curvecalc/curves.hpp"
#include "curvecalc/linrel.hpp"
#include "curvecalc/measures.hpp"
#include "curvecalc/normalform.hpp"
#include "curvecalc/quadrature.hpp"

#include <string>

namespace curvecalc::io {

/// Complex numbers are written [re, im]; a bare number is read as real.
/// All readers throw ParseError on malformed text or on a missing/invalid field.

LipschitzCurve curve_from_json(const std::string& text);
std::string curve_to_json(const LipschitzCurve& c);

/// {"curves":[...]} or a single curve.
CurveSystemPtr system_from_json(const std::string& text);
std::string system_to_json(const CurveSystem& sys);

/// {"atoms":[{"curve","t","w"}], "densities":[{"curve","kind","data"}]}
CurveMeasure measure_from_json(const std::string& text, CurveSystemPtr sys);
std::string measure_to_json(const CurveMeasure& mu);

/// {"chart":[a,b,c,d], "carrier":{...}, "constant":z, "terms":[{"k":1,"measure":{...}}]}
/// or a named function: {"named":"principal_power","alpha":z}, "principal_log",
/// {"named":"curve_power","curve":{...},"alpha":z}, {"named":"curve_log_power","curve":{...},"n":k},
/// {"named":"rational","poles":[{"p":z,"order":k,"coeff":z}],"constant":z}.
/// carrier may be omitted when a default carrier is supplied.
NormalForm normal_form_from_json(const std::string& text, CurveSystemPtr default_carrier = nullptr);
std::string normal_form_to_json(const NormalForm& nf);

/// {"matrix":[[...]]} or {"dim":d,"Y":[[...]],"X":[[...]]} (rows of d entries).
LinearRelation relation_from_json(const std::string& text);
std::string relation_to_json(const LinearRelation& A);

/// [z, ...] or {"vector":[z, ...]}.
Vec vector_from_json(const std::string& text);
std::string vector_to_json(const Vec& v);

std::string stats_to_json(const QuadStats& st);

/// Whole file as a string; ParseError if unreadable.
std::string read_file(const std::string& path);

}  // namespace curvecalc::io
