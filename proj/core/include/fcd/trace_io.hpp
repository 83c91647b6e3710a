#pragma once

#include <iosfwd>
#include <string>

#include "fcd/analysis.hpp"
#include "fcd/driver.hpp"

namespace fcd {

// Per-iteration metrics: `k,F,alpha,backtracks,inner_iters,res_norm,time_s`.
void write_trace_csv(std::ostream& out, const RunTrace& trace);
void write_trace_csv_file(const std::string& path, const RunTrace& trace);

// Plot-ready long format across runs: `algorithm,k,time_s,F`.
void write_long_csv(std::ostream& out, const std::vector<RunTrace>& traces);
void write_long_csv_file(const std::string& path, const std::vector<RunTrace>& traces);

std::string trace_to_json(const RunTrace& trace);
RunTrace trace_from_json(const std::string& text);
void write_trace_json_file(const std::string& path, const RunTrace& trace);

std::string bound_report_to_json(const BoundReport& report);
void write_bound_report_json_file(const std::string& path, const BoundReport& report);

}  // namespace fcd
