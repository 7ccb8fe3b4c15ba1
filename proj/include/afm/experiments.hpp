#ifndef AFM_EXPERIMENTS_HPP
#define AFM_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "afm/engine.hpp"

namespace afm {

// Parsed form of a solver name such as "ogmp+gr+gd0.8" or "fista+fr".
// Grammar: base ("+" modifier)*, with
//   base      gm | gm-q | fgm | fgm-q | fgmp-q | ogm | ogmp | ogm-q
//             | ista | fista | pogm
//   modifier  fr | gr | gd | gd<float> | fix | fix<int>
// "gd" without a value uses the configured default sigma_bar; "fix" without
// a value derives the interval from the problem's condition ratio.
struct SolverSpec {
  enum class Base { Smooth, Ista, Fista, Pogm };

  std::string name;
  Base base = Base::Smooth;
  Method method = Method::GM;  // Smooth only
  RestartMode restart = RestartMode::None;
  std::optional<double> sigma_bar;
  std::optional<int> fixed_interval;  // 0 means "derive from q"
};

// Throws std::invalid_argument with a usable message on unknown names or
// malformed modifiers.
SolverSpec parse_solver(const std::string& name, double default_sigma_bar);

// Runs a parsed solver on a smooth problem. The *-q schedules take q from
// the oracle (strong_convexity / lipschitz); requesting them on a problem
// without known strong convexity is an error.
Trace run_smooth_solver(const SolverSpec& spec, const SmoothOracle& f,
                        const Eigen::VectorXd& x0, int max_iters,
                        double grad_tol = 0.0, bool record_iterates = false);

// Runs ista / fista / pogm variants on a composite problem.
Trace run_composite_solver(const SolverSpec& spec, const CompositeProblem& prob,
                           const Eigen::VectorXd& x0, int max_iters,
                           double grad_tol = 0.0, bool record_iterates = false);

// Best objective seen by a function-restarted proximal run of `iters`
// iterations, the reference-optimum recipe for problems without a closed
// form.
double reference_objective(const CompositeProblem& prob, const Eigen::VectorXd& x0,
                           int iters);

// First row index whose monitored relative gap (F_k - f_ref)/(F_0 - f_ref)
// is <= eps; rows() when never reached (one past the last row, a censored
// value that sorts after every real index).
int iters_to_gap(const Trace& trace, double f_ref, double eps);

// Monitored relative gap at a row, clipped below at 1e-16 for log plots.
double relative_gap(const Trace& trace, int row, double f_ref);

}  // namespace afm

#endif  // AFM_EXPERIMENTS_HPP
