#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "fcd/analysis.hpp"
#include "fcd/libsvm_io.hpp"
#include "fcd/synthetic.hpp"
#include "fcd/trace_io.hpp"

namespace {

using namespace fcd;

struct ProblemOptions {
  std::string data_path;
  std::string synthetic;  // "", "quadratic", "logistic"
  int n = 100, m = 100;
  double condition = 10.0, sparsity = 1.0, margin = 0.1;
  std::string loss = "logistic";
  std::string reg = "l1";
  double c = 0.1, l2 = 0.0;
  std::uint64_t seed = 0;
};

struct AlgoOptions {
  int tau = 1;
  long budget = 1000;
  double tol = 1e-8;
  std::string hessian = "diag";
  double ridge = 0.0;
  int lbfgs_mem = 10;
  double eta = 0.9;
  std::string inner = "closed";
  int inner_max = 200;
  bool strict = false;
  double theta = 1e-3;
  int max_backtracks = 200;
};

void add_problem_flags(CLI::App* cmd, ProblemOptions& p) {
  cmd->add_option("--data", p.data_path, "LIBSVM input file");
  cmd->add_option("--synthetic", p.synthetic, "synthetic kind: quadratic | logistic")
      ->check(CLI::IsMember({"quadratic", "logistic"}));
  cmd->add_option("--n", p.n, "synthetic dimension");
  cmd->add_option("--m", p.m, "synthetic sample count");
  cmd->add_option("--cond", p.condition, "synthetic condition number of A^T A");
  cmd->add_option("--sparsity", p.sparsity, "synthetic nnz fraction");
  cmd->add_option("--margin", p.margin, "synthetic logistic separation margin");
  cmd->add_option("--loss", p.loss, "loss: quadratic | logistic")
      ->check(CLI::IsMember({"quadratic", "logistic"}));
  cmd->add_option("--reg", p.reg, "regularizer: none | l1 | l2 | elastic")
      ->check(CLI::IsMember({"none", "l1", "l2", "elastic"}));
  cmd->add_option("--c", p.c, "l1 weight");
  cmd->add_option("--l2", p.l2, "squared-l2 weight");
  cmd->add_option("--seed", p.seed, "seed for sampling and synthetic data");
}

void add_algo_flags(CLI::App* cmd, AlgoOptions& a) {
  cmd->add_option("--tau", a.tau, "coordinates per iteration");
  cmd->add_option("--budget", a.budget, "iteration budget");
  cmd->add_option("--tol", a.tol, "stationarity tolerance");
  cmd->add_option("--hessian", a.hessian, "identity | scaled | diag | minor | lbfgs")
      ->check(CLI::IsMember({"identity", "scaled", "diag", "minor", "lbfgs"}));
  cmd->add_option("--ridge", a.ridge, "ridge added to the curvature operator");
  cmd->add_option("--lbfgs-mem", a.lbfgs_mem, "quasi-Newton pair count");
  cmd->add_option("--eta", a.eta, "inner residual contraction factor");
  cmd->add_option("--inner", a.inner, "inner solver: closed | cg | prox")
      ->check(CLI::IsMember({"closed", "cg", "prox"}));
  cmd->add_option("--inner-max", a.inner_max, "inner iteration cap");
  cmd->add_flag("--strict-certificates", a.strict,
                "fail when a direction cannot be certified");
  cmd->add_option("--theta", a.theta, "line search sufficient-decrease fraction");
  cmd->add_option("--max-backtracks", a.max_backtracks, "line search halving cap");
}

SeparableRegularizer make_regularizer(const ProblemOptions& p) {
  if (p.reg == "none") return SeparableRegularizer::zero();
  if (p.reg == "l1") return SeparableRegularizer::l1(p.c);
  if (p.reg == "l2") return SeparableRegularizer::squared_l2(p.l2);
  return SeparableRegularizer::elastic_net(p.c, p.l2);
}

CompositeProblem make_problem(const ProblemOptions& p) {
  if (!p.data_path.empty() && !p.synthetic.empty())
    throw std::invalid_argument("give either --data or --synthetic, not both");
  if (p.data_path.empty() && p.synthetic.empty())
    throw std::invalid_argument("one of --data or --synthetic is required");

  if (!p.data_path.empty()) {
    LibsvmData data = parse_libsvm_file(p.data_path);
    SmoothLoss loss = p.loss == "logistic"
                          ? SmoothLoss::logistic(std::move(data.A), std::move(data.labels))
                          : SmoothLoss::quadratic(std::move(data.A), std::move(data.labels));
    return CompositeProblem(std::move(loss), make_regularizer(p));
  }
  if (p.synthetic == "quadratic") {
    auto gen = generate_quadratic({p.n, p.m, p.condition, p.sparsity, p.seed});
    std::optional<double> mu = gen.mu_f > 0.0 ? std::optional<double>(gen.mu_f) : std::nullopt;
    return CompositeProblem(SmoothLoss::quadratic(std::move(gen.A), std::move(gen.b)),
                            make_regularizer(p), mu);
  }
  auto gen = generate_logistic({p.n, p.m, p.margin, p.sparsity, p.seed});
  return CompositeProblem(SmoothLoss::logistic(std::move(gen.A), std::move(gen.labels)),
                          make_regularizer(p));
}

FcdConfig make_fcd_config(const ProblemOptions& p, const AlgoOptions& a) {
  FcdConfig cfg;
  cfg.tau = a.tau;
  cfg.seed = p.seed;
  cfg.max_iters = a.budget;
  cfg.tol = a.tol;
  if (a.hessian == "identity") cfg.curvature = CurvatureStrategy::identity();
  else if (a.hessian == "scaled") cfg.curvature = CurvatureStrategy::scaled_identity();
  else if (a.hessian == "diag") cfg.curvature = CurvatureStrategy::diagonal(a.ridge);
  else if (a.hessian == "minor")
    cfg.curvature = CurvatureStrategy::principal_minor(a.ridge > 0 ? a.ridge : 1e-6);
  else cfg.curvature = CurvatureStrategy::lbfgs(a.lbfgs_mem, a.ridge > 0 ? a.ridge : 1e-6);
  if (a.inner == "closed") cfg.inner.method = InnerMethod::ClosedForm;
  else if (a.inner == "cg") cfg.inner.method = InnerMethod::ConjugateGradient;
  else cfg.inner.method = InnerMethod::ProximalSweep;
  cfg.inner.eta = a.eta;
  cfg.inner.max_inner = a.inner_max;
  cfg.inner.strict = a.strict;
  cfg.linesearch.theta = a.theta;
  cfg.linesearch.max_backtracks = a.max_backtracks;
  return cfg;
}

std::string output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("FCD_OUT_DIR")) return env;
  return ".";
}

void emit(const std::string& dir, const std::string& name, const RunTrace& trace) {
  std::filesystem::create_directories(dir);
  write_trace_json_file(dir + "/" + name + "_trace.json", trace);
  write_trace_csv_file(dir + "/" + name + "_metrics.csv", trace);
  write_long_csv_file(dir + "/" + name + "_long.csv", {trace});
}

RunTrace run_named_algo(const std::string& algo, const CompositeProblem& problem,
                        const ProblemOptions& p, const AlgoOptions& a) {
  Vec x0(static_cast<std::size_t>(problem.dimension()), 0.0);
  if (algo == "ucdc-v1")
    return ucdc_run(problem, x0, {1, 1, p.seed, a.budget, a.tol});
  if (algo == "ucdc-v2")
    return ucdc_run(problem, x0, {2, a.tau, p.seed, a.budget, a.tol});

  AlgoOptions local = a;
  if (algo == "fcd-v1") {
    local.hessian = "diag";
    local.inner = "closed";
    local.tau = 1;
  } else if (algo == "fcd-v2") {
    local.hessian = "minor";
    local.inner = "prox";
    if (local.ridge <= 0) local.ridge = 1e-6;
  } else if (algo != "fcd") {
    throw std::invalid_argument("unknown algorithm '" + algo + "'");
  }
  RunTrace trace = fcd_run(problem, x0, make_fcd_config(p, local));
  trace.algorithm = algo;
  return trace;
}

int run(int argc, char** argv) {
  CLI::App app{"flexible coordinate descent for composite convex minimization"};
  app.require_subcommand(1);

  ProblemOptions prob;
  AlgoOptions algo;
  std::string out_flag, name = "run";
  std::string algos = "fcd-v1,fcd-v2,ucdc-v1,ucdc-v2";
  std::string theorem = "SC-N";
  int trials = 200;
  double epsilon = 1e-3, rho = 0.1;
  long k_override = 0;
  std::string gen_out = "data.libsvm";

  auto* solve = app.add_subcommand("solve", "run the solver on one problem");
  add_problem_flags(solve, prob);
  add_algo_flags(solve, algo);
  solve->add_option("--out", out_flag, "output directory");
  solve->add_option("--name", name, "basename for output files");

  auto* compare = app.add_subcommand("compare", "run several algorithms on one problem");
  add_problem_flags(compare, prob);
  add_algo_flags(compare, algo);
  compare->add_option("--out", out_flag, "output directory");
  compare->add_option("--algos", algos, "comma-separated algorithm list");
  compare->add_option("--name", name, "basename for output files");

  auto* verify = app.add_subcommand("verify-bounds", "Monte-Carlo check of an iteration bound");
  add_problem_flags(verify, prob);
  add_algo_flags(verify, algo);
  verify->add_option("--out", out_flag, "output directory");
  verify->add_option("--theorem", theorem, "C-N-i | C-N-ii | SC-N | C-S | SC-S");
  verify->add_option("--trials", trials, "independent runs");
  verify->add_option("--epsilon", epsilon, "target accuracy, relative to the initial gap");
  verify->add_option("--rho", rho, "target confidence");
  verify->add_option("--K", k_override, "override the theoretical iteration count");

  auto* gen = app.add_subcommand("gen-data", "write a synthetic classification dataset");
  add_problem_flags(gen, prob);
  gen->add_option("--file", gen_out, "output LIBSVM file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints usage or help text
    return code == 0 ? 0 : 2;
  }

  if (solve->parsed()) {
    CompositeProblem problem = make_problem(prob);
    Vec x0(static_cast<std::size_t>(problem.dimension()), 0.0);
    RunTrace trace = fcd_run(problem, x0, make_fcd_config(prob, algo));
    emit(output_dir(out_flag), name, trace);
    std::cout << "F_final=" << trace.F_final << " iterations=" << trace.iterations
              << " converged=" << (trace.converged ? "yes" : "no") << '\n';
    return 0;
  }

  if (compare->parsed()) {
    CompositeProblem problem = make_problem(prob);
    std::vector<std::string> names;
    for (std::size_t pos = 0; pos < algos.size();) {
      auto comma = algos.find(',', pos);
      if (comma == std::string::npos) comma = algos.size();
      if (comma > pos) names.push_back(algos.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (names.empty()) throw std::invalid_argument("--algos is empty");
    std::vector<RunTrace> traces(names.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < names.size(); ++i)
      pool.emplace_back([&, i] { traces[i] = run_named_algo(names[i], problem, prob, algo); });
    for (auto& th : pool) th.join();
    const std::string dir = output_dir(out_flag);
    for (std::size_t i = 0; i < names.size(); ++i)
      emit(dir, name + "_" + names[i], traces[i]);
    write_long_csv_file(dir + "/" + name + "_long.csv", traces);
    for (std::size_t i = 0; i < names.size(); ++i)
      std::cout << names[i] << " F_final=" << traces[i].F_final << '\n';
    return 0;
  }

  if (verify->parsed()) {
    if (prob.synthetic.empty() && prob.data_path.empty()) {
      prob.synthetic = "quadratic";
      prob.n = 50;
      prob.m = 60;
      prob.condition = 100.0;
    }
    CompositeProblem problem = make_problem(prob);
    FcdConfig cfg = make_fcd_config(prob, algo);
    Vec x0(static_cast<std::size_t>(problem.dimension()), 0.0);

    // Reference gap: long exact run at a far tighter tolerance.
    FcdConfig ref = cfg;
    ref.max_iters = cfg.max_iters * 100;
    ref.tol = 1e-12;
    double f_star = fcd_run(problem, x0, ref).F_final;
    double gap = eval_F(problem, x0) - f_star;
    if (gap <= 0.0) throw std::runtime_error("initial point is already optimal");
    double eps_abs = epsilon * gap;

    ComplexityConstants consts =
        conservative_constants(problem, cfg.curvature, cfg.tau, algo.theta, algo.eta);
    BoundTheorem tag;
    if (theorem == "C-N-i") tag = BoundTheorem::CNi;
    else if (theorem == "C-N-ii") tag = BoundTheorem::CNii;
    else if (theorem == "SC-N") tag = BoundTheorem::SCN;
    else if (theorem == "C-S") tag = BoundTheorem::CS;
    else if (theorem == "SC-S") tag = BoundTheorem::SCS;
    else throw std::invalid_argument("unknown theorem '" + theorem + "'");

    double mu_F = consts.mu_f + problem.regularizer().strong_convexity();
    double radius = mu_F > 0.0 ? levelset_radius(gap, mu_F)
                               : levelset_radius_sampled(problem, x0,
                                                         fcd_run(problem, x0, ref).x_final,
                                                         prob.seed + 7);
    long K = k_override > 0
                 ? k_override
                 : iteration_bound(tag, consts, problem.dimension(), cfg.tau, eps_abs,
                                   rho, gap, radius);
    BoundReport report =
        validate_bound(problem, x0, cfg, tag, f_star, eps_abs, rho, K, trials);
    const std::string dir = output_dir(out_flag);
    std::filesystem::create_directories(dir);
    write_bound_report_json_file(dir + "/" + name + "_bound.json", report);
    std::cout << theorem_name(tag) << " K=" << report.K << " frequency=" << report.frequency
              << " required=" << report.required_frequency
              << (report.pass ? " PASS" : " FAIL") << '\n';
    return 0;
  }

  // gen-data: classification data only, since LIBSVM labels are binary.
  if (prob.synthetic.empty()) prob.synthetic = "logistic";
  if (prob.synthetic != "logistic")
    throw std::invalid_argument("gen-data writes classification data; use --synthetic logistic");
  auto data = generate_logistic({prob.n, prob.m, prob.margin, prob.sparsity, prob.seed});
  write_libsvm_file(gen_out, data.A, data.labels);
  std::cout << "wrote " << gen_out << " (" << data.A.rows() << " x " << data.A.cols()
            << ", nnz " << data.A.nnz() << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  }
}
