#include "afm/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace afm {

namespace {

bool gamma_bearing(const ScheduleKind& kind) {
  return kind.method == Method::OGMp || kind.method == Method::OGMq ||
         (kind.method == Method::Const && kind.gamma > 0.0);
}

void validate(const SolverConfig& cfg) {
  if (cfg.max_iters < 1)
    throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (cfg.grad_tol < 0.0)
    throw std::invalid_argument("SolverConfig: grad_tol must be >= 0");
  if (cfg.sigma_bar && (*cfg.sigma_bar < 0.0 || *cfg.sigma_bar > 1.0))
    throw std::invalid_argument("SolverConfig: sigma_bar must be in [0, 1]");
  if (cfg.fixed_restart_interval && *cfg.fixed_restart_interval < 1)
    throw std::invalid_argument("SolverConfig: fixed_restart_interval must be >= 1");
  if (cfg.restart != RestartMode::None && cfg.schedule.method == Method::OGM)
    throw std::invalid_argument(
        "SolverConfig: adaptive restart does not pair with the horizon schedule; "
        "use ogmp");
}

void validate_smooth(const SolverConfig& cfg) {
  validate(cfg);
  if (cfg.sigma_bar && !gamma_bearing(cfg.schedule))
    throw std::invalid_argument(
        "SolverConfig: sigma decay needs a gamma-bearing schedule (ogmp, ogm-q)");
}

bool finite_row(const TraceRow& r) {
  // f_x may legitimately be +inf when a secondary iterate is infeasible for
  // an indicator nonsmooth term; it is not a divergence signal.
  return std::isfinite(r.f_y) && std::isfinite(r.grad_norm);
}

}  // namespace

bool gr_condition(const Eigen::VectorXd& grad, const Eigen::VectorXd& y_next,
                  const Eigen::VectorXd& y) {
  // <-grad, y_next - y> < 0, written without the negation.
  return grad.dot(y_next - y) > 0.0;
}

bool gdgamma_condition(const Eigen::VectorXd& grad, const Eigen::VectorXd& grad_prev) {
  return grad.dot(grad_prev) < 0.0;
}

Eigen::VectorXd composite_gradient_mapping(const Eigen::VectorXd& grad,
                                           const Eigen::VectorXd& x_next,
                                           const Eigen::VectorXd& z_next, double zeta) {
  return grad - (x_next - z_next) / zeta;
}

Trace smooth_run(const SmoothOracle& f, const SolverConfig& cfg,
                 const Eigen::VectorXd& x0) {
  validate_smooth(cfg);
  Schedule sched(cfg.schedule, f.lipschitz());
  const double alpha = sched.alpha();

  Trace tr;
  tr.monitored = 'y';
  tr.rows.reserve(static_cast<size_t>(cfg.max_iters) + 1);

  Eigen::VectorXd x = x0, y = x0;
  Eigen::VectorXd g = f.gradient(x);
  ++tr.grad_evals;
  Eigen::VectorXd g_prev = g;
  double fy = f.value(y);
  double sigma = 1.0;

  tr.rows.push_back({0, fy, fy, g.norm(), false, false, sigma, 0.0, 0.0});
  if (cfg.record_iterates) {
    tr.xs.push_back(x);
    tr.ys.push_back(y);
  }
  if (!finite_row(tr.rows.back())) {
    tr.status = RunStatus::Diverged;
    return tr;
  }

  for (int k = 0; k < cfg.max_iters; ++k) {
    if (cfg.grad_tol > 0.0 && tr.rows.back().grad_norm <= cfg.grad_tol) {
      tr.status = RunStatus::Converged;
      return tr;
    }

    Eigen::VectorXd y1 = x - alpha * g;
    double fy1 = f.value(y1);
    bool fired_restart = false, fired_gd = false;
    double beta_used = 0.0, gamma_used = 0.0;
    Eigen::VectorXd x1;

    if (cfg.restart == RestartMode::Function && fy1 > fy) {
      // Reject the candidate and restart from the last accepted point; the
      // next step is then a plain gradient step from y, which cannot
      // increase f. Keeps the monitored sequence nonincreasing.
      fired_restart = true;
      y1 = y;
      fy1 = fy;
      x1 = y;
      sched.reset();
      sigma = 1.0;
    } else {
      if (cfg.restart == RestartMode::Gradient && gr_condition(g, y1, y)) {
        fired_restart = true;
        sched.reset();
        sigma = 1.0;
      } else if (cfg.sigma_bar && k >= 1 && gdgamma_condition(g, g_prev)) {
        fired_gd = true;
        sigma *= *cfg.sigma_bar;
      }
      Coefficients c = sched.step();
      beta_used = c.beta;
      gamma_used = sigma * c.gamma;
      x1 = y1 + beta_used * (y1 - y) + gamma_used * (y1 - x);
    }

    if (cfg.fixed_restart_interval && (k + 1) % *cfg.fixed_restart_interval == 0) {
      // Cycle boundary: the next cycle starts fresh from the secondary
      // iterate.
      fired_restart = true;
      y1 = x1;
      fy1 = f.value(x1);
      sched.reset();
      sigma = 1.0;
    }

    g_prev = g;
    g = f.gradient(x1);
    ++tr.grad_evals;
    tr.rows.push_back({k + 1, fy1, f.value(x1), g.norm(), fired_restart, fired_gd,
                       sigma, beta_used, gamma_used});
    if (cfg.record_iterates) {
      tr.xs.push_back(x1);
      tr.ys.push_back(y1);
    }
    x = std::move(x1);
    y = std::move(y1);
    fy = fy1;
    if (!finite_row(tr.rows.back()) || !std::isfinite(tr.rows.back().f_x)) {
      tr.status = RunStatus::Diverged;
      return tr;
    }
  }

  tr.status = (cfg.grad_tol > 0.0 && tr.rows.back().grad_norm <= cfg.grad_tol)
                  ? RunStatus::Converged
                  : RunStatus::MaxIters;
  return tr;
}

Trace afm_run(const SmoothOracle& f, const ScheduleKind& schedule,
              const Eigen::VectorXd& x0, int max_iters, double grad_tol,
              bool record_iterates) {
  SolverConfig cfg;
  cfg.schedule = schedule;
  cfg.max_iters = max_iters;
  cfg.grad_tol = grad_tol;
  cfg.record_iterates = record_iterates;
  return smooth_run(f, cfg, x0);
}

Trace ogm_restart_run(const SmoothOracle& f, const SolverConfig& cfg,
                      const Eigen::VectorXd& x0) {
  if (cfg.schedule.method != Method::FGM && cfg.schedule.method != Method::OGMp)
    throw std::invalid_argument(
        "ogm_restart_run: requires a t-sequence schedule (fgm or ogmp)");
  return smooth_run(f, cfg, x0);
}

Trace fixed_restart_run(const SmoothOracle& f, const ScheduleKind& schedule,
                        const Eigen::VectorXd& x0, int interval, int outer) {
  if (interval < 1 || outer < 1)
    throw std::invalid_argument("fixed_restart_run: interval and outer must be >= 1");
  SolverConfig cfg;
  cfg.schedule = schedule;
  cfg.max_iters = interval * outer;
  cfg.fixed_restart_interval = interval;
  return smooth_run(f, cfg, x0);
}

double k_fixed(double q) {
  if (!(q > 0.0)) throw std::invalid_argument("k_fixed: q must be > 0");
  return std::exp(1.0) * std::sqrt(2.0 / q);
}

int fixed_restart_interval(double q) {
  return static_cast<int>(std::ceil(k_fixed(q)));
}

Trace pogm_restart_run(const CompositeProblem& prob, const SolverConfig& cfg,
                       const Eigen::VectorXd& x0) {
  validate(cfg);
  const SmoothOracle& f = *prob.smooth;
  const ProxOracle& phi = *prob.nonsmooth;
  const double L = f.lipschitz();

  Trace tr;
  tr.monitored = 'x';
  tr.rows.reserve(static_cast<size_t>(cfg.max_iters) + 1);

  Eigen::VectorXd x = x0, y = x0, u = x0, z = x0;
  double t = 1.0, zeta = 1.0, sigma = 1.0;
  double Fx = prob.F(x0);
  Eigen::VectorXd g = f.gradient(x);  // reused by iteration 0
  ++tr.grad_evals;
  Eigen::VectorXd G_prev = g;

  tr.rows.push_back({0, Fx, Fx, g.norm(), false, false, sigma, 0.0, 0.0});
  if (cfg.record_iterates) {
    tr.xs.push_back(x);
    tr.ys.push_back(y);
  }
  if (!std::isfinite(Fx) || !std::isfinite(tr.rows.back().grad_norm)) {
    tr.status = RunStatus::Diverged;
    return tr;
  }

  for (int k = 0; k < cfg.max_iters; ++k) {
    if (cfg.grad_tol > 0.0 && tr.rows.back().grad_norm <= cfg.grad_tol) {
      tr.status = RunStatus::Converged;
      return tr;
    }
    if (k > 0) {
      g = f.gradient(x);
      ++tr.grad_evals;
    }

    double t1 = t_next(t);
    double beta = (t - 1.0) / t1;
    double gam = sigma * t / t1;
    Eigen::VectorXd u1 = x - (1.0 / L) * g;
    Eigen::VectorXd z1 = u1 + beta * (u1 - u) + gam * (u1 - x) -
                         beta * (1.0 / (L * zeta)) * (x - z);
    double zeta1 = (1.0 + beta + gam) / L;
    Eigen::VectorXd x1 = phi.prox(z1, zeta1);
    ++tr.prox_evals;
    Eigen::VectorXd G = composite_gradient_mapping(g, x1, z1, zeta1);
    Eigen::VectorXd y1 = x - (1.0 / L) * G;
    double Fx1 = prob.F(x1);
    double Fy1 = prob.F(y1);

    bool fired_restart = false, fired_gd = false;
    if (cfg.restart == RestartMode::Function && Fx1 > Fx) {
      // Reject-and-rewind, as in smooth_run: the next iteration starts a
      // fresh cycle from x_k. The stale zeta1 is harmless because the next
      // step multiplies it by beta = 0 and x - z = 0.
      fired_restart = true;
      x1 = x;
      z1 = x;
      u1 = x;
      y1 = x;
      Fx1 = Fx;
      Fy1 = Fx;
      t1 = 1.0;
      sigma = 1.0;
    } else if (cfg.restart == RestartMode::Gradient && gr_condition(G, y1, y)) {
      fired_restart = true;
      t1 = 1.0;
      sigma = 1.0;
    } else if (cfg.sigma_bar && k >= 1 && gdgamma_condition(G, G_prev)) {
      fired_gd = true;
      sigma *= *cfg.sigma_bar;
    }

    tr.rows.push_back({k + 1, Fy1, Fx1, G.norm(), fired_restart, fired_gd, sigma,
                       beta, gam});
    if (cfg.record_iterates) {
      tr.xs.push_back(x1);
      tr.ys.push_back(y1);
    }
    G_prev = std::move(G);
    x = std::move(x1);
    y = std::move(y1);
    u = std::move(u1);
    z = std::move(z1);
    t = t1;
    zeta = zeta1;
    Fx = Fx1;
    if (!std::isfinite(Fx) || !std::isfinite(tr.rows.back().grad_norm)) {
      tr.status = RunStatus::Diverged;
      return tr;
    }
  }

  tr.status = (cfg.grad_tol > 0.0 && tr.rows.back().grad_norm <= cfg.grad_tol)
                  ? RunStatus::Converged
                  : RunStatus::MaxIters;
  return tr;
}

namespace {

Trace proximal_momentum_run(const CompositeProblem& prob, const SolverConfig& cfg,
                            const Eigen::VectorXd& x0, bool momentum) {
  validate(cfg);
  const SmoothOracle& f = *prob.smooth;
  const ProxOracle& phi = *prob.nonsmooth;
  const double L = f.lipschitz();

  Trace tr;
  tr.monitored = 'y';
  tr.rows.reserve(static_cast<size_t>(cfg.max_iters) + 1);

  Eigen::VectorXd x = x0, y = x0;
  double t = 1.0;
  double Fy = prob.F(x0);
  Eigen::VectorXd g = f.gradient(x);  // reused by iteration 0
  ++tr.grad_evals;

  tr.rows.push_back({0, Fy, Fy, g.norm(), false, false, 1.0, 0.0, 0.0});
  if (cfg.record_iterates) {
    tr.xs.push_back(x);
    tr.ys.push_back(y);
  }
  if (!std::isfinite(Fy) || !std::isfinite(tr.rows.back().grad_norm)) {
    tr.status = RunStatus::Diverged;
    return tr;
  }

  for (int k = 0; k < cfg.max_iters; ++k) {
    if (cfg.grad_tol > 0.0 && tr.rows.back().grad_norm <= cfg.grad_tol) {
      tr.status = RunStatus::Converged;
      return tr;
    }
    if (k > 0) {
      g = f.gradient(x);
      ++tr.grad_evals;
    }

    Eigen::VectorXd y1 = phi.prox(x - (1.0 / L) * g, 1.0 / L);
    ++tr.prox_evals;
    double Gn = L * (x - y1).norm();
    double Fy1 = prob.F(y1);

    bool fired_restart = false;
    double beta_used = 0.0;
    Eigen::VectorXd x1;
    if (momentum && cfg.restart == RestartMode::Function && Fy1 > Fy) {
      fired_restart = true;
      y1 = y;
      Fy1 = Fy;
      x1 = y;
      t = 1.0;
    } else {
      if (momentum && cfg.restart == RestartMode::Gradient &&
          (y1 - x).dot(y1 - y) < 0.0) {
        fired_restart = true;
        t = 1.0;
      }
      if (momentum) {
        double tn = t_next(t);
        beta_used = (t - 1.0) / tn;
        x1 = y1 + beta_used * (y1 - y);
        t = tn;
      } else {
        x1 = y1;
      }
    }

    tr.rows.push_back(
        {k + 1, Fy1, prob.F(x1), Gn, fired_restart, false, 1.0, beta_used, 0.0});
    if (cfg.record_iterates) {
      tr.xs.push_back(x1);
      tr.ys.push_back(y1);
    }
    x = std::move(x1);
    y = std::move(y1);
    Fy = Fy1;
    if (!finite_row(tr.rows.back())) {
      tr.status = RunStatus::Diverged;
      return tr;
    }
  }

  tr.status = (cfg.grad_tol > 0.0 && tr.rows.back().grad_norm <= cfg.grad_tol)
                  ? RunStatus::Converged
                  : RunStatus::MaxIters;
  return tr;
}

}  // namespace

Trace ista_run(const CompositeProblem& prob, const Eigen::VectorXd& x0, int max_iters,
               double grad_tol, bool record_iterates) {
  SolverConfig cfg;
  cfg.max_iters = max_iters;
  cfg.grad_tol = grad_tol;
  cfg.record_iterates = record_iterates;
  return proximal_momentum_run(prob, cfg, x0, /*momentum=*/false);
}

Trace fista_run(const CompositeProblem& prob, const SolverConfig& cfg,
                const Eigen::VectorXd& x0) {
  return proximal_momentum_run(prob, cfg, x0, /*momentum=*/true);
}

}  // namespace afm
