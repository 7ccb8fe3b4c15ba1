#ifndef AFM_TRACE_HPP
#define AFM_TRACE_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace afm {

enum class RunStatus { MaxIters, Converged, Diverged };

// One record per accepted iterate. Row 0 is the starting point; row k >= 1
// describes the state after iteration k-1 together with the decisions that
// produced it:
//   f_y, f_x      objective at y_k and x_k (composite runs record F values;
//                 f_x may be +inf when the secondary sequence is infeasible)
//   grad_norm     residual measured at the step's base point: ||grad f(x_k)||
//                 for smooth runs (row N carries the terminal gradient), the
//                 composite gradient mapping norm for proximal runs (row 0
//                 falls back to the smooth gradient at x_0)
//   restart       the step restarted its momentum (adaptive or scheduled)
//   gd_gamma      the gradient-dot condition fired and sigma was decayed
//   sigma, beta, gamma   values used by the step (gamma is the effective
//                 sigma-scaled weight); row 0 holds 1, 0, 0
struct TraceRow {
  int k = 0;
  double f_y = 0.0;
  double f_x = 0.0;
  double grad_norm = 0.0;
  bool restart = false;
  bool gd_gamma = false;
  double sigma = 1.0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct Trace {
  std::vector<TraceRow> rows;
  RunStatus status = RunStatus::MaxIters;

  // Which objective column a summary should read: 'y' for solvers whose
  // feasible sequence is y_k (smooth methods, ISTA/FISTA), 'x' for solvers
  // monitored on the secondary sequence (POGM).
  char monitored = 'y';

  // Oracle call counters for the whole run.
  long grad_evals = 0;
  long prox_evals = 0;

  // Iterate logs, filled only on request.
  std::vector<Eigen::VectorXd> xs;
  std::vector<Eigen::VectorXd> ys;

  double monitored_value(int row) const {
    return monitored == 'x' ? rows[row].f_x : rows[row].f_y;
  }
};

// CSV with header k,f_y,F_x,grad_norm,restart,gd_gamma,sigma,beta,gamma.
// Floating-point fields use 17 significant digits so values round-trip
// bit-exactly; booleans are 0/1. Output is byte-deterministic.
void write_trace_csv(const Trace& trace, std::ostream& out);
std::string trace_csv(const Trace& trace);
void write_trace_csv_file(const Trace& trace, const std::string& path);

}  // namespace afm

#endif  // AFM_TRACE_HPP
