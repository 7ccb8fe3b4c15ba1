#ifndef AFM_ENGINE_HPP
#define AFM_ENGINE_HPP

#include <Eigen/Dense>

#include <optional>

#include "afm/oracles.hpp"
#include "afm/schedules.hpp"
#include "afm/trace.hpp"

namespace afm {

enum class RestartMode { None, Function, Gradient };

struct SolverConfig {
  ScheduleKind schedule;
  RestartMode restart = RestartMode::None;

  // Gradient-dot gamma decay: when set, sigma is multiplied by sigma_bar
  // (in [0, 1]) whenever consecutive gradients (gradient mappings for the
  // proximal solver) make an obtuse angle. Requires a gamma-bearing
  // schedule. sigma resets to 1 at every restart.
  std::optional<double> sigma_bar;

  int max_iters = 1000;

  // Stop once the recorded residual reaches this value; 0 disables the stop
  // so fixed-budget runs use their whole budget.
  double grad_tol = 0.0;

  // Scheduled restart every `interval` iterations, independent of the
  // adaptive conditions. The new cycle starts from the current secondary
  // iterate (y is re-seeded to x).
  std::optional<int> fixed_restart_interval;

  bool record_iterates = false;
};

// Runs the accelerated template
//   y_{k+1} = x_k - alpha * grad f(x_k)
//   x_{k+1} = y_{k+1} + beta_k (y_{k+1} - y_k)
//                     + sigma gamma_k (y_{k+1} - x_k)
// under any schedule, with optional adaptive restart and gamma decay.
//
// Restart semantics (strict inequalities; ties never trigger):
//  * Gradient restart fires on <-grad f(x_k), y_{k+1} - y_k> < 0 and resets
//    the schedule state and sigma before the momentum step, exactly as if
//    iteration k were iteration zero of a fresh run.
//  * Function restart fires on f(y_{k+1}) > f(y_k) and additionally rejects
//    the candidate: the step is rewound to the last accepted point
//    (y_{k+1} := y_k, x_{k+1} := y_k) so the recorded f(y_k) sequence is
//    nonincreasing by construction. The follow-up step is a plain gradient
//    step from that point.
//  * The gamma-decay condition <grad f(x_k), grad f(x_{k-1})> < 0 is only
//    tested when no restart fired (the branches are mutually exclusive) and
//    is suppressed at k = 0 where no previous gradient exists.
//
// Evaluation cost: exactly one gradient evaluation per iteration plus one
// terminal evaluation that fills the last row's residual, so
// grad_evals == rows == iterations + 1.
Trace smooth_run(const SmoothOracle& f, const SolverConfig& cfg,
                 const Eigen::VectorXd& x0);

// smooth_run with every policy disabled.
Trace afm_run(const SmoothOracle& f, const ScheduleKind& schedule,
              const Eigen::VectorXd& x0, int max_iters, double grad_tol = 0.0,
              bool record_iterates = false);

// smooth_run restricted to the adaptive-restart configurations (momentum
// schedule plus function or gradient restart, optionally gamma decay).
Trace ogm_restart_run(const SmoothOracle& f, const SolverConfig& cfg,
                      const Eigen::VectorXd& x0);

// Scheduled restart: `outer` cycles of `interval` iterations each.
Trace fixed_restart_run(const SmoothOracle& f, const ScheduleKind& schedule,
                        const Eigen::VectorXd& x0, int interval, int outer);

// Budget-optimal fixed restart interval e * sqrt(2 / q) for condition ratio
// q = mu / L (the minimizer of the per-cycle contraction (2/(q k^2))^{1/k}).
double k_fixed(double q);

// k_fixed rounded up to a usable iteration count.
int fixed_restart_interval(double q);

// Restart predicates, exposed for reuse and direct testing. Strict: a zero
// inner product returns false.
bool gr_condition(const Eigen::VectorXd& grad, const Eigen::VectorXd& y_next,
                  const Eigen::VectorXd& y);
bool gdgamma_condition(const Eigen::VectorXd& grad, const Eigen::VectorXd& grad_prev);

// G(x) = grad f(x) - (x_next - z_next) / zeta, the composite analogue of the
// gradient at the base point of a proximal step.
Eigen::VectorXd composite_gradient_mapping(const Eigen::VectorXd& grad,
                                           const Eigen::VectorXd& x_next,
                                           const Eigen::VectorXd& z_next, double zeta);

// Proximal variant of the optimized momentum update. Per iteration k:
//   u_{k+1}    = x_k - (1/L) grad f(x_k)
//   t_{k+1}    = t_next(t_k)
//   z_{k+1}    = u_{k+1} + beta_k (u_{k+1} - u_k) + sigma gamma_k (u_{k+1} - x_k)
//                - beta_k (1/(L zeta_k)) (x_k - z_k)
//   zeta_{k+1} = (1/L)(1 + beta_k + sigma gamma_k)
//   x_{k+1}    = prox_{zeta_{k+1} phi}(z_{k+1})
//   G(x_k)     = grad f(x_k) - (x_{k+1} - z_{k+1}) / zeta_{k+1}
//   y_{k+1}    = x_k - (1/L) G(x_k)
// with beta_k = (t_k - 1)/t_{k+1}, gamma_k = t_k/t_{k+1}. The restart
// conditions are tested after the step, on F(x_{k+1}) > F(x_k) (function,
// with the same reject-and-rewind semantics as smooth_run) or
// <-G(x_k), y_{k+1} - y_k> < 0 (gradient, resets t_{k+1} and sigma only);
// otherwise <G(x_k), G(x_{k-1})> < 0 decays sigma. The monitored objective
// is F(x_k). One gradient and one prox evaluation per iteration.
Trace pogm_restart_run(const CompositeProblem& prob, const SolverConfig& cfg,
                       const Eigen::VectorXd& x0);

// Proximal gradient method: y_{k+1} = prox_{phi/L}(x_k - (1/L) grad f(x_k)),
// x_{k+1} = y_{k+1}.
Trace ista_run(const CompositeProblem& prob, const Eigen::VectorXd& x0,
               int max_iters, double grad_tol = 0.0, bool record_iterates = false);

// Fast proximal gradient: the same prox step followed by
// x_{k+1} = y_{k+1} + beta_k (y_{k+1} - y_k). Supports function restart
// (reject-and-rewind on F(y)) and gradient restart
// (<y_{k+1} - x_k, y_{k+1} - y_k> < 0, resets t only). cfg.schedule and
// cfg.sigma_bar are ignored; the t-sequence momentum is built in.
Trace fista_run(const CompositeProblem& prob, const SolverConfig& cfg,
                const Eigen::VectorXd& x0);

}  // namespace afm

#endif  // AFM_ENGINE_HPP
