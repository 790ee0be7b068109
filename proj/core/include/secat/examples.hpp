#pragma once

#include <string>

#include "secat/report.hpp"

namespace secat::examples {

// Shipped example files, embedded at configure time.
const std::string& twistor_text();
const std::string& twocell_text();

struct PipelineResult {
    int exit_code = 0;  // 0 definitive, 2 inconclusive, 1 error
    std::string text;
    report::json payload;
};

// Full reproduction of the twistor-fibration computation: wgt, nil-ker,
// retraction verdicts, Delta/Phi and the Swgt certificate.
PipelineResult run_twistor();

// Full reproduction of the two-cell computation, including the dimension
// bookkeeping for T(a_2,b_7) and T(a_5,b_7) and the dual-Cartan check.
PipelineResult run_twocell();

}  // namespace secat::examples
