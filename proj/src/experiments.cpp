#include "afm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace afm {

namespace {

std::vector<std::string> split_plus(const std::string& s) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = s.find('+', start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void bad_solver(const std::string& name, const std::string& why) {
  throw std::invalid_argument("solver '" + name + "': " + why);
}

}  // namespace

SolverSpec parse_solver(const std::string& name, double default_sigma_bar) {
  SolverSpec spec;
  spec.name = name;

  const std::vector<std::string> parts = split_plus(name);
  const std::string& base = parts.front();

  if (base == "gm") {
    spec.method = Method::GM;
  } else if (base == "gm-q") {
    spec.method = Method::GMq;
  } else if (base == "fgm") {
    spec.method = Method::FGM;
  } else if (base == "fgm-q") {
    spec.method = Method::FGMq;
  } else if (base == "fgmp-q") {
    spec.method = Method::FGMpq;
  } else if (base == "ogm") {
    spec.method = Method::OGM;
  } else if (base == "ogmp") {
    spec.method = Method::OGMp;
  } else if (base == "ogm-q") {
    spec.method = Method::OGMq;
  } else if (base == "ista") {
    spec.base = SolverSpec::Base::Ista;
  } else if (base == "fista") {
    spec.base = SolverSpec::Base::Fista;
  } else if (base == "pogm") {
    spec.base = SolverSpec::Base::Pogm;
  } else {
    bad_solver(name, "unknown base '" + base + "'");
  }

  for (size_t i = 1; i < parts.size(); ++i) {
    const std::string& mod = parts[i];
    if (mod == "fr" || mod == "gr") {
      if (spec.restart != RestartMode::None)
        bad_solver(name, "at most one restart modifier");
      spec.restart = mod == "fr" ? RestartMode::Function : RestartMode::Gradient;
    } else if (mod.rfind("gd", 0) == 0) {
      if (spec.sigma_bar) bad_solver(name, "duplicate gd modifier");
      double value = default_sigma_bar;
      if (mod.size() > 2) {
        try {
          size_t used = 0;
          value = std::stod(mod.substr(2), &used);
          if (used != mod.size() - 2) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
          bad_solver(name, "cannot parse gd value in '" + mod + "'");
        }
      }
      if (!(value >= 0.0 && value <= 1.0))
        bad_solver(name, "gd value must be in [0, 1]");
      spec.sigma_bar = value;
    } else if (mod.rfind("fix", 0) == 0) {
      if (spec.fixed_interval) bad_solver(name, "duplicate fix modifier");
      int value = 0;
      if (mod.size() > 3) {
        try {
          size_t used = 0;
          value = std::stoi(mod.substr(3), &used);
          if (used != mod.size() - 3) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
          bad_solver(name, "cannot parse fix value in '" + mod + "'");
        }
        if (value < 1) bad_solver(name, "fix value must be >= 1");
      }
      spec.fixed_interval = value;
    } else {
      bad_solver(name, "unknown modifier '" + mod + "'");
    }
  }

  if (spec.base == SolverSpec::Base::Ista &&
      (spec.restart != RestartMode::None || spec.sigma_bar || spec.fixed_interval))
    bad_solver(name, "ista takes no modifiers");
  if (spec.base == SolverSpec::Base::Fista && spec.sigma_bar)
    bad_solver(name, "gd applies to gamma-bearing solvers only");
  if (spec.base != SolverSpec::Base::Smooth && spec.fixed_interval)
    bad_solver(name, "fix applies to smooth solvers only");
  if (spec.base == SolverSpec::Base::Smooth && spec.sigma_bar &&
      !(spec.method == Method::OGMp || spec.method == Method::OGMq))
    bad_solver(name, "gd applies to gamma-bearing solvers only");
  return spec;
}

namespace {

double problem_q(const SmoothOracle& f, const std::string& name) {
  const std::optional<double> mu = f.strong_convexity();
  if (!mu || !(*mu > 0.0))
    throw std::invalid_argument("solver '" + name +
                                "' needs a known strong convexity parameter");
  return *mu / f.lipschitz();
}

}  // namespace

Trace run_smooth_solver(const SolverSpec& spec, const SmoothOracle& f,
                        const Eigen::VectorXd& x0, int max_iters, double grad_tol,
                        bool record_iterates) {
  if (spec.base != SolverSpec::Base::Smooth)
    throw std::invalid_argument("solver '" + spec.name +
                                "' is proximal; this problem is smooth");

  ScheduleKind kind;
  switch (spec.method) {
    case Method::GM:
      kind = ScheduleKind::gm();
      break;
    case Method::GMq:
      kind = ScheduleKind::gm_q(problem_q(f, spec.name));
      break;
    case Method::FGM:
      kind = ScheduleKind::fgm();
      break;
    case Method::FGMq:
      kind = ScheduleKind::fgm_q(problem_q(f, spec.name));
      break;
    case Method::FGMpq:
      kind = ScheduleKind::fgmp_q(problem_q(f, spec.name));
      break;
    case Method::OGM:
      kind = ScheduleKind::ogm(max_iters);
      break;
    case Method::OGMp:
      kind = ScheduleKind::ogmp();
      break;
    case Method::OGMq:
      kind = ScheduleKind::ogm_q(problem_q(f, spec.name));
      break;
    case Method::Const:
      throw std::invalid_argument("solver '" + spec.name + "' has no schedule");
  }

  SolverConfig cfg;
  cfg.schedule = kind;
  cfg.restart = spec.restart;
  cfg.sigma_bar = spec.sigma_bar;
  cfg.max_iters = max_iters;
  cfg.grad_tol = grad_tol;
  cfg.record_iterates = record_iterates;
  if (spec.fixed_interval) {
    cfg.fixed_restart_interval = *spec.fixed_interval > 0
                                     ? *spec.fixed_interval
                                     : fixed_restart_interval(problem_q(f, spec.name));
  }
  return smooth_run(f, cfg, x0);
}

Trace run_composite_solver(const SolverSpec& spec, const CompositeProblem& prob,
                           const Eigen::VectorXd& x0, int max_iters, double grad_tol,
                           bool record_iterates) {
  SolverConfig cfg;
  cfg.restart = spec.restart;
  cfg.sigma_bar = spec.sigma_bar;
  cfg.max_iters = max_iters;
  cfg.grad_tol = grad_tol;
  cfg.record_iterates = record_iterates;

  switch (spec.base) {
    case SolverSpec::Base::Ista:
      return ista_run(prob, x0, max_iters, grad_tol, record_iterates);
    case SolverSpec::Base::Fista:
      return fista_run(prob, cfg, x0);
    case SolverSpec::Base::Pogm:
      return pogm_restart_run(prob, cfg, x0);
    case SolverSpec::Base::Smooth:
      break;
  }
  throw std::invalid_argument("solver '" + spec.name +
                              "' is smooth; this problem is composite");
}

double reference_objective(const CompositeProblem& prob, const Eigen::VectorXd& x0,
                           int iters) {
  SolverConfig cfg;
  cfg.restart = RestartMode::Function;
  cfg.max_iters = iters;
  const Trace tr = pogm_restart_run(prob, cfg, x0);
  double best = tr.rows.front().f_x;
  for (const TraceRow& r : tr.rows) best = std::min(best, r.f_x);
  return best;
}

int iters_to_gap(const Trace& trace, double f_ref, double eps) {
  const double f0 = trace.monitored_value(0);
  const double denom = f0 - f_ref;
  for (size_t i = 0; i < trace.rows.size(); ++i) {
    const double gap = trace.monitored_value(static_cast<int>(i)) - f_ref;
    if (gap <= eps * denom) return trace.rows[i].k;
  }
  return static_cast<int>(trace.rows.size());
}

double relative_gap(const Trace& trace, int row, double f_ref) {
  const double denom = trace.monitored_value(0) - f_ref;
  const double gap = (trace.monitored_value(row) - f_ref) / denom;
  return std::max(gap, 1e-16);
}

}  // namespace afm
