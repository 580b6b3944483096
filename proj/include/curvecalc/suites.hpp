#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace curvecalc {

struct SuiteOptions {
    int n = -1;           ///< instances per check, -1 for the suite default
    std::uint64_t seed = 7;
    double tol = -1.0;    ///< overrides every threshold when > 0
    bool negative_control = false;
    std::string lemma;    ///< estimates only; empty runs every lemma
};

/// One measured value against its threshold. Upper bounds pass when
/// value <= threshold, lower bounds (negative controls) when value >= threshold.
struct SuiteRow {
    std::string check;
    int criterion = 0;
    int index = 0;
    double value = 0.0;
    double threshold = 0.0;
    bool lower_bound = false;
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    std::string suite;
    std::vector<SuiteRow> rows;
    bool pass() const;
    /// Worst row per check, in order of first appearance.
    std::vector<SuiteRow> summary() const;
};

const std::vector<std::string>& suite_names();

/// Runs a check suite; InvalidArgument for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts = {});

/// suite,check,criterion,index,value,threshold,kind,pass,note with values in
/// full-precision scientific notation.
void write_csv(std::ostream& os, const SuiteResult& r, bool header = true);

}  // namespace curvecalc
