#pragma once

#include <ostream>
#include <string>

#include "taunets/report.hpp"

namespace taunets {

// Batch commands behind the taunets binary. Exit codes: 0 suite pass,
// 1 suite fail, 2 usage/parse error, 3 evaluation error. The report is
// written (file or `out`) on codes 0 and 1; human summaries go to `err`.
int cmd_verify_counterexample(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_classify(const RunConfig& cfg, const std::string& expr, std::ostream& out,
                 std::ostream& err);
int cmd_invert_check(const RunConfig& cfg, const std::string& expr, std::ostream& out,
                     std::ostream& err);
int cmd_eval_point(const RunConfig& cfg, const std::string& expr, const std::string& point_spec,
                   std::ostream& out, std::ostream& err);

}  // namespace taunets
