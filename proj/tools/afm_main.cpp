// Command-line harness: runs the experiment catalog and emits analysis
// tables, all as deterministic CSV.

#include <CLI11.hpp>

#include <Eigen/Dense>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "afm/analysis.hpp"
#include "afm/engine.hpp"
#include "afm/experiments.hpp"
#include "afm/oracles.hpp"
#include "afm/schedules.hpp"
#include "afm/trace.hpp"

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string sanitize(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                    c == '_' || c == '-';
    out.push_back(ok ? c : '-');
  }
  return out;
}

std::string status_name(afm::RunStatus s) {
  switch (s) {
    case afm::RunStatus::MaxIters: return "maxiters";
    case afm::RunStatus::Converged: return "converged";
    case afm::RunStatus::Diverged: return "diverged";
  }
  return "unknown";
}

Eigen::VectorXd seeded_normal(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = normal(rng);
  return v;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> split_commas(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct RunOptions {
  std::string experiment;
  int iters = 0;  // 0 uses the experiment default
  std::uint64_t seed = 1;
  std::string out = "out";
  double sigma_bar = 0.8;
  std::string restart = "none";
  std::string solvers;  // comma list; empty uses the experiment default

  // Problem-parameter overrides; 0 (or negative where 0 is meaningful)
  // selects the experiment default.
  int d = 0;
  double q = 0.0;
  int m = 0;
  int s = 0;
  double tau = 0.0;
  double eta = 0.0;
  double cond = 0.0;
  double noise_var = -1.0;
  int n_lambda = 0;
};

struct SummaryRow {
  std::string variant;
  std::string solver;
  std::string status;
  size_t rows = 0;
  long grad_evals = 0;
  long prox_evals = 0;
  double f_ref = 0.0;
  double final_rel_gap = 0.0;
  int iters_to_1e5 = 0;
  int iters_to_1e10 = 0;
};

std::string summary_csv(const std::string& experiment,
                        const std::vector<SummaryRow>& rows) {
  std::ostringstream ss;
  ss << "experiment,variant,solver,status,rows,grad_evals,prox_evals,f_ref,"
        "final_rel_gap,iters_to_1e-5,iters_to_1e-10\n";
  for (const SummaryRow& r : rows) {
    ss << experiment << ',' << r.variant << ',' << r.solver << ',' << r.status
       << ',' << r.rows << ',' << r.grad_evals << ',' << r.prox_evals << ','
       << fmt(r.f_ref) << ',' << fmt(r.final_rel_gap) << ',' << r.iters_to_1e5
       << ',' << r.iters_to_1e10 << '\n';
  }
  return ss.str();
}

SummaryRow summarize(const std::string& variant, const std::string& solver,
                     const afm::Trace& tr, double f_ref) {
  SummaryRow row;
  row.variant = variant;
  row.solver = solver;
  row.status = status_name(tr.status);
  row.rows = tr.rows.size();
  row.grad_evals = tr.grad_evals;
  row.prox_evals = tr.prox_evals;
  row.f_ref = f_ref;
  row.final_rel_gap =
      afm::relative_gap(tr, static_cast<int>(tr.rows.size()) - 1, f_ref);
  row.iters_to_1e5 = afm::iters_to_gap(tr, f_ref, 1e-5);
  row.iters_to_1e10 = afm::iters_to_gap(tr, f_ref, 1e-10);
  return row;
}

// The --restart flag applies to solvers named without their own restart
// modifier; an explicit +fr/+gr in the name wins. ista has no momentum to
// restart and is left alone, as is the horizon schedule.
void apply_restart_flag(afm::SolverSpec& spec, const std::string& flag) {
  if (flag == "none" || spec.restart != afm::RestartMode::None) return;
  if (spec.base == afm::SolverSpec::Base::Ista) return;
  if (spec.base == afm::SolverSpec::Base::Smooth && spec.method == afm::Method::OGM)
    return;
  spec.restart = flag == "fr" ? afm::RestartMode::Function
                              : afm::RestartMode::Gradient;
}

std::string trace_path(const std::string& dir, const std::string& experiment,
                       const std::string& variant, const std::string& solver) {
  std::string stem = experiment;
  if (!variant.empty()) stem += "_" + variant;
  stem += "_" + sanitize(solver);
  return (std::filesystem::path(dir) / (stem + ".csv")).string();
}

int run_smooth_experiment(const RunOptions& opt, const std::string& variant,
                          const afm::SmoothOracle& oracle, const Eigen::VectorXd& x0,
                          double f_ref, int iters,
                          const std::vector<std::string>& solvers,
                          std::vector<SummaryRow>& summary) {
  for (const std::string& name : solvers) {
    afm::SolverSpec spec = afm::parse_solver(name, opt.sigma_bar);
    apply_restart_flag(spec, opt.restart);
    const afm::Trace tr = afm::run_smooth_solver(spec, oracle, x0, iters);
    afm::write_trace_csv_file(tr, trace_path(opt.out, opt.experiment, variant, name));
    summary.push_back(summarize(variant, name, tr, f_ref));
  }
  return 0;
}

int run_composite_experiment(const RunOptions& opt, const std::string& variant,
                             const afm::CompositeProblem& prob,
                             const Eigen::VectorXd& x0, double f_ref, int iters,
                             const std::vector<std::string>& solvers,
                             std::vector<SummaryRow>& summary) {
  for (const std::string& name : solvers) {
    afm::SolverSpec spec = afm::parse_solver(name, opt.sigma_bar);
    apply_restart_flag(spec, opt.restart);
    const afm::Trace tr = afm::run_composite_solver(spec, prob, x0, iters);
    afm::write_trace_csv_file(tr, trace_path(opt.out, opt.experiment, variant, name));
    summary.push_back(summarize(variant, name, tr, f_ref));
  }
  return 0;
}

std::string emit_table3(double q) {
  std::ostringstream ss;
  ss << "method,alpha_L,beta,gamma,rho\n";
  for (const afm::RateTableRow& row : afm::rate_table(q)) {
    ss << row.method << ',' << fmt(row.alpha) << ',' << fmt(row.beta) << ','
       << fmt(row.gamma) << ',' << fmt(row.rho) << '\n';
  }
  return ss.str();
}

std::string emit_rho_curve(double q, const std::string& label, double alpha_L,
                           double beta, double gamma, int n) {
  std::ostringstream ss;
  ss << "method,lambda,r1_abs,r2_abs,rho\n";
  for (int i = 0; i < n; ++i) {
    const double lambda =
        i + 1 == n ? 1.0 : q + (1.0 - q) * static_cast<double>(i) / (n - 1);
    const afm::CharRoots roots = afm::char_roots(alpha_L, beta, gamma, lambda);
    const double rho = afm::rho_t_lambda(alpha_L, beta, gamma, lambda);
    ss << label << ',' << fmt(lambda) << ',' << fmt(std::abs(roots.plus)) << ','
       << fmt(std::abs(roots.minus)) << ',' << fmt(rho) << '\n';
  }
  return ss.str();
}

// Coefficients of a named strongly convex schedule at ratio q, in units of
// 1/L, via the rate table.
bool named_coefficients(const std::string& method, double q, double& alpha_L,
                        double& beta, double& gamma) {
  for (const afm::RateTableRow& row : afm::rate_table(q)) {
    if (row.method == method) {
      alpha_L = row.alpha;
      beta = row.beta;
      gamma = row.gamma;
      return true;
    }
  }
  return false;
}

int run_experiment(const RunOptions& opt) {
  static const std::set<std::string> known = {
      "case1", "case2", "logsumexp", "lasso", "boxqp", "table3", "rho-curve"};
  if (!known.count(opt.experiment)) {
    std::cerr << "unknown experiment '" << opt.experiment
              << "'; valid names: case1 case2 logsumexp lasso boxqp table3 "
                 "rho-curve\n";
    return 2;
  }

  std::filesystem::create_directories(opt.out);
  std::vector<SummaryRow> summary;

  if (opt.experiment == "table3") {
    const double q = opt.q > 0.0 ? opt.q : 0.1;
    write_file((std::filesystem::path(opt.out) / "table3.csv").string(),
               emit_table3(q));
    return 0;
  }

  if (opt.experiment == "rho-curve") {
    const double q = opt.q > 0.0 ? opt.q : 0.1;
    const int n = opt.n_lambda > 0 ? opt.n_lambda : 401;
    double alpha_L = 1.0, beta = 0.0, gamma = 0.0;
    named_coefficients("ogm-q", q, alpha_L, beta, gamma);
    write_file((std::filesystem::path(opt.out) / "rho_curve.csv").string(),
               emit_rho_curve(q, "ogm-q", alpha_L, beta, gamma, n));
    return 0;
  }

  if (opt.experiment == "case1") {
    const int d = opt.d > 0 ? opt.d : 500;
    const double q = opt.q > 0.0 ? opt.q : 1e-4;
    const int iters = opt.iters > 0 ? opt.iters : 8000;
    const afm::QuadraticProblem prob = afm::gen_quadratic(d, q, opt.seed);
    const Eigen::VectorXd x0 = seeded_normal(d, opt.seed + 0x9E3779B97F4A7C15ULL);
    const std::vector<std::string> solvers =
        opt.solvers.empty()
            ? std::vector<std::string>{"gm", "fgm", "ogmp", "fgm-q", "ogm-q",
                                       "fgm+fr", "fgm+gr", "ogmp+fr", "ogmp+gr"}
            : split_commas(opt.solvers);
    run_smooth_experiment(opt, "", prob, x0, prob.f_star(), iters, solvers, summary);
  } else if (opt.experiment == "case2") {
    const int iters = opt.iters > 0 ? opt.iters : 400;
    const afm::QuadraticProblem prob = afm::fixed_quadratic_case2();
    Eigen::VectorXd x0(2);
    x0 << 0.2, 1.0;
    const std::vector<std::string> solvers =
        opt.solvers.empty()
            ? std::vector<std::string>{"gm", "fgm+gr", "ogmp+gr+gd1.0",
                                       "ogmp+gr+gd0.8", "ogmp+gr+gd0.5"}
            : split_commas(opt.solvers);
    run_smooth_experiment(opt, "", prob, x0, prob.f_star(), iters, solvers, summary);
  } else if (opt.experiment == "logsumexp") {
    const int m = opt.m > 0 ? opt.m : 100;
    const int d = opt.d > 0 ? opt.d : 20;
    const int iters = opt.iters > 0 ? opt.iters : 2000;
    const std::vector<double> etas =
        opt.eta > 0.0 ? std::vector<double>{opt.eta} : std::vector<double>{1.0, 10.0};
    const std::vector<std::string> solvers =
        opt.solvers.empty()
            ? std::vector<std::string>{"gm", "fgm", "ogmp", "fgm+fr", "fgm+gr",
                                       "ogmp+fr", "ogmp+gr"}
            : split_commas(opt.solvers);
    for (double eta : etas) {
      const std::string variant = "eta" + sanitize(fmt_short(eta));
      auto oracle = std::make_shared<afm::LogSumExpOracle>(
          afm::gen_logsumexp(m, d, eta, opt.seed));
      const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
      afm::CompositeProblem ref_prob{oracle, std::make_shared<afm::ZeroProx>(), {}};
      const double f_ref = afm::reference_objective(ref_prob, x0, 10 * iters);
      run_smooth_experiment(opt, variant, *oracle, x0, f_ref, iters, solvers,
                            summary);
    }
  } else if (opt.experiment == "lasso") {
    const int m = opt.m > 0 ? opt.m : 500;
    const int d = opt.d > 0 ? opt.d : 2000;
    const int s = opt.s > 0 ? opt.s : 100;
    const double tau = opt.tau > 0.0 ? opt.tau : 2.0;
    const double noise_var = opt.noise_var >= 0.0 ? opt.noise_var : 0.1;
    const int iters = opt.iters > 0 ? opt.iters : 3000;
    const afm::LassoInstance inst = afm::gen_lasso(m, d, s, tau, noise_var, opt.seed);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
    const double f_ref = afm::reference_objective(inst.problem, x0, 10 * iters);
    const std::vector<std::string> solvers =
        opt.solvers.empty()
            ? std::vector<std::string>{"ista", "fista", "fista+fr", "fista+gr",
                                       "pogm+fr", "pogm+gr"}
            : split_commas(opt.solvers);
    run_composite_experiment(opt, "", inst.problem, x0, f_ref, iters, solvers,
                             summary);
  } else if (opt.experiment == "boxqp") {
    const int d = opt.d > 0 ? opt.d : 500;
    const double cond = opt.cond > 0.0 ? opt.cond : 1e7;
    const int iters = opt.iters > 0 ? opt.iters : 5000;
    const afm::BoxQpInstance inst = afm::gen_boxqp(d, cond, opt.seed);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(d);
    const double f_ref = afm::reference_objective(inst.problem, x0, 10 * iters);
    const std::vector<std::string> solvers =
        opt.solvers.empty()
            ? std::vector<std::string>{"ista", "fista", "fista+gr", "pogm+fr",
                                       "pogm+gr"}
            : split_commas(opt.solvers);
    run_composite_experiment(opt, "", inst.problem, x0, f_ref, iters, solvers,
                             summary);
  }

  write_file((std::filesystem::path(opt.out) / (opt.experiment + "_summary.csv"))
                 .string(),
             summary_csv(opt.experiment, summary));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order method toolkit: schedules, restart policies, "
               "experiment traces"};
  app.set_config("--config", "", "Read defaults from a key=value file");
  app.require_subcommand(1);

  RunOptions opt;
  CLI::App* run = app.add_subcommand("run", "Run an experiment, write CSV traces");
  run->fallthrough();  // lets --config appear after the subcommand name
  run->add_option("experiment", opt.experiment,
                  "case1 | case2 | logsumexp | lasso | boxqp | table3 | rho-curve")
      ->required();
  run->add_option("--iters", opt.iters, "Iteration budget (0 = default)");
  run->add_option("--seed", opt.seed, "Generator seed");
  run->add_option("--out", opt.out, "Output directory")->capture_default_str();
  run->add_option("--sigma-bar", opt.sigma_bar, "Default gamma-decay factor")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  run->add_option("--restart", opt.restart, "Restart applied to bare solver names")
      ->check(CLI::IsMember({"none", "fr", "gr"}))
      ->capture_default_str();
  run->add_option("--solvers", opt.solvers, "Comma-separated solver list");
  run->add_option("--d", opt.d, "Problem dimension");
  run->add_option("--q", opt.q, "Condition ratio mu/L (or table/curve q)");
  run->add_option("--m", opt.m, "Row count for generated data");
  run->add_option("--s", opt.s, "Sparsity of the planted signal");
  run->add_option("--tau", opt.tau, "l1 weight");
  run->add_option("--eta", opt.eta, "Smoothing parameter (0 = sweep {1,10})");
  run->add_option("--cond", opt.cond, "Condition number for boxqp");
  run->add_option("--noise-var", opt.noise_var, "Observation noise variance");
  run->add_option("--n", opt.n_lambda, "Grid points for rho-curve");

  double t3_q = 0.0;
  std::string t3_out;
  CLI::App* t3 = app.add_subcommand("table3", "Emit tuned coefficients as CSV");
  t3->add_option("--q", t3_q, "Condition ratio mu/L, in (0,1)")->required();
  t3->add_option("--out", t3_out, "Output file (default stdout)");

  double rc_q = 0.0, rc_beta = -1.0, rc_gamma = -1.0;
  int rc_n = 401;
  std::string rc_method, rc_out;
  CLI::App* rc = app.add_subcommand(
      "rho-curve", "Emit per-mode root magnitudes over the spectrum as CSV");
  rc->add_option("--q", rc_q, "Condition ratio mu/L, in (0,1)")->required();
  rc->add_option("--beta", rc_beta, "Momentum weight");
  rc->add_option("--gamma", rc_gamma, "Secondary momentum weight");
  rc->add_option("--method", rc_method, "gm-q | fgm-q | fgmp-q | ogm-q");
  rc->add_option("--n", rc_n, "Grid points (>= 2)")->check(CLI::Range(2, 10000000));
  rc->add_option("--out", rc_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_experiment(opt);

    if (t3->parsed()) {
      if (!(t3_q > 0.0 && t3_q < 1.0)) {
        std::cerr << "table3: --q must lie in (0, 1)\n";
        return 2;
      }
      const std::string csv = emit_table3(t3_q);
      if (t3_out.empty())
        std::cout << csv;
      else
        write_file(t3_out, csv);
      return 0;
    }

    if (rc->parsed()) {
      if (!(rc_q > 0.0 && rc_q < 1.0)) {
        std::cerr << "rho-curve: --q must lie in (0, 1)\n";
        return 2;
      }
      double alpha_L = 1.0, beta = 0.0, gamma = 0.0;
      std::string label;
      const bool has_pair = rc_beta >= 0.0 || rc_gamma >= 0.0;
      if (!rc_method.empty() && has_pair) {
        std::cerr << "rho-curve: give either --method or --beta/--gamma\n";
        return 2;
      }
      if (!rc_method.empty()) {
        if (!named_coefficients(rc_method, rc_q, alpha_L, beta, gamma)) {
          std::cerr << "rho-curve: unknown method '" << rc_method
                    << "'; valid: gm-q fgm-q fgmp-q ogm-q\n";
          return 2;
        }
        label = rc_method;
      } else if (has_pair) {
        beta = rc_beta >= 0.0 ? rc_beta : 0.0;
        gamma = rc_gamma >= 0.0 ? rc_gamma : 0.0;
        label = "custom";
      } else {
        named_coefficients("ogm-q", rc_q, alpha_L, beta, gamma);
        label = "ogm-q";
      }
      const std::string csv = emit_rho_curve(rc_q, label, alpha_L, beta, gamma, rc_n);
      if (rc_out.empty())
        std::cout << csv;
      else
        write_file(rc_out, csv);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
