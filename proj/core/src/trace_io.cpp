#include "fcd/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace fcd {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "k,F,alpha,backtracks,inner_iters,res_norm,time_s\n";
  for (const auto& r : trace.records) {
    out << r.k << ',' << fmt(r.F) << ',' << fmt(r.alpha) << ',' << r.backtracks << ','
        << r.inner_iters << ',' << fmt(r.res_norm) << ',' << fmt(r.time_s) << '\n';
  }
}

void write_trace_csv_file(const std::string& path, const RunTrace& trace) {
  auto out = open_out(path);
  write_trace_csv(out, trace);
}

void write_long_csv(std::ostream& out, const std::vector<RunTrace>& traces) {
  out << "algorithm,k,time_s,F\n";
  for (const auto& t : traces)
    for (const auto& r : t.records)
      out << t.algorithm << ',' << r.k << ',' << fmt(r.time_s) << ',' << fmt(r.F) << '\n';
}

void write_long_csv_file(const std::string& path, const std::vector<RunTrace>& traces) {
  auto out = open_out(path);
  write_long_csv(out, traces);
}

std::string trace_to_json(const RunTrace& trace) {
  nlohmann::json j;
  j["algorithm"] = trace.algorithm;
  j["dim"] = trace.dim;
  j["tau"] = trace.tau;
  j["seed"] = trace.seed;
  j["iterations"] = trace.iterations;
  j["converged"] = trace.converged;
  j["F_final"] = trace.F_final;
  j["setup_time_s"] = trace.setup_time_s;
  j["total_time_s"] = trace.total_time_s;
  j["linesearch_time_s"] = trace.linesearch_time_s;
  j["x_final"] = trace.x_final;
  auto& recs = j["records"] = nlohmann::json::array();
  for (const auto& r : trace.records) {
    recs.push_back({{"k", r.k},
                    {"F", r.F},
                    {"alpha", r.alpha},
                    {"backtracks", r.backtracks},
                    {"inner_iters", r.inner_iters},
                    {"res_norm", r.res_norm},
                    {"time_s", r.time_s}});
  }
  return j.dump(2);
}

RunTrace trace_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RunTrace t;
  t.algorithm = j.at("algorithm").get<std::string>();
  t.dim = j.at("dim").get<int>();
  t.tau = j.at("tau").get<int>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.iterations = j.at("iterations").get<long>();
  t.converged = j.at("converged").get<bool>();
  t.F_final = j.at("F_final").get<double>();
  t.setup_time_s = j.at("setup_time_s").get<double>();
  t.total_time_s = j.at("total_time_s").get<double>();
  t.linesearch_time_s = j.at("linesearch_time_s").get<double>();
  t.x_final = j.at("x_final").get<Vec>();
  for (const auto& rj : j.at("records")) {
    IterationRecord r;
    r.k = rj.at("k").get<long>();
    r.F = rj.at("F").get<double>();
    r.alpha = rj.at("alpha").get<double>();
    r.backtracks = rj.at("backtracks").get<int>();
    r.inner_iters = rj.at("inner_iters").get<int>();
    r.res_norm = rj.at("res_norm").get<double>();
    r.time_s = rj.at("time_s").get<double>();
    t.records.push_back(r);
  }
  return t;
}

void write_trace_json_file(const std::string& path, const RunTrace& trace) {
  auto out = open_out(path);
  out << trace_to_json(trace) << '\n';
}

std::string bound_report_to_json(const BoundReport& report) {
  nlohmann::json j;
  j["theorem"] = theorem_name(report.theorem);
  j["epsilon"] = report.epsilon;
  j["rho"] = report.rho;
  j["K"] = report.K;
  j["trials"] = report.trials;
  j["successes"] = report.successes;
  j["frequency"] = report.frequency;
  j["required_frequency"] = report.required_frequency;
  j["pass"] = report.pass;
  return j.dump(2);
}

void write_bound_report_json_file(const std::string& path, const BoundReport& report) {
  auto out = open_out(path);
  out << bound_report_to_json(report) << '\n';
}

}  // namespace fcd
