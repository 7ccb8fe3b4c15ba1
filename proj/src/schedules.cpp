#include "afm/schedules.hpp"

#include <cmath>
#include <stdexcept>

#include "afm/analysis.hpp"

namespace afm {

double t_next(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

double theta_next(double theta, bool is_last) {
  double c = is_last ? 8.0 : 4.0;
  return 0.5 * (1.0 + std::sqrt(1.0 + c * theta * theta));
}

namespace {

bool needs_q(Method m) {
  return m == Method::GMq || m == Method::FGMq || m == Method::FGMpq ||
         m == Method::OGMq;
}

}  // namespace

Schedule::Schedule(const ScheduleKind& kind, double lipschitz) : kind_(kind) {
  if (!(lipschitz > 0.0))
    throw std::invalid_argument("Schedule: lipschitz must be > 0");
  if (needs_q(kind_.method) && (!(kind_.q > 0.0) || kind_.q > 1.0))
    throw std::invalid_argument("Schedule: q must be in (0, 1]");
  if (kind_.method == Method::OGM && kind_.horizon < 1)
    throw std::invalid_argument("Schedule: OGM requires a horizon >= 1");
  if (kind_.method == Method::Const && (kind_.beta < 0.0 || kind_.gamma < -1.0))
    throw std::invalid_argument("Schedule: constant coefficients out of range");

  const double L = lipschitz, q = kind_.q;
  switch (kind_.method) {
    case Method::GMq:
      alpha_ = 2.0 / ((1.0 + q) * L);
      break;
    case Method::FGMpq:
      alpha_ = 4.0 / ((3.0 + q) * L);
      const_beta_ =
          (std::sqrt(3.0 + q) - 2.0 * std::sqrt(q)) / (std::sqrt(3.0 + q) + 2.0 * std::sqrt(q));
      break;
    case Method::FGMq:
      alpha_ = 1.0 / L;
      const_beta_ = (1.0 - std::sqrt(q)) / (1.0 + std::sqrt(q));
      break;
    case Method::OGMq: {
      alpha_ = 1.0 / L;
      OgmQCoefficients c = ogm_q_coeffs(q);
      const_beta_ = c.beta;
      const_gamma_ = c.gamma;
      break;
    }
    case Method::Const:
      alpha_ = 1.0 / L;
      const_beta_ = kind_.beta;
      const_gamma_ = kind_.gamma;
      break;
    default:
      alpha_ = 1.0 / L;
      break;
  }
}

Coefficients Schedule::step() {
  Coefficients c{alpha_, 0.0, 0.0};
  switch (kind_.method) {
    case Method::GM:
    case Method::GMq:
      break;
    case Method::FGMq:
    case Method::FGMpq:
      c.beta = const_beta_;
      break;
    case Method::OGMq:
    case Method::Const:
      c.beta = const_beta_;
      c.gamma = const_gamma_;
      break;
    case Method::FGM: {
      double tn = t_next(t_);
      c.beta = (t_ - 1.0) / tn;
      t_ = tn;
      break;
    }
    case Method::OGMp: {
      double tn = t_next(t_);
      c.beta = (t_ - 1.0) / tn;
      c.gamma = t_ / tn;
      t_ = tn;
      break;
    }
    case Method::OGM: {
      double tn = theta_next(t_, pos_ + 1 == kind_.horizon);
      c.beta = (t_ - 1.0) / tn;
      c.gamma = t_ / tn;
      t_ = tn;
      break;
    }
  }
  ++pos_;
  return c;
}

void Schedule::reset() {
  t_ = 1.0;
  pos_ = 0;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::GM: return "gm";
    case Method::GMq: return "gm-q";
    case Method::FGM: return "fgm";
    case Method::FGMq: return "fgm-q";
    case Method::FGMpq: return "fgmp-q";
    case Method::OGM: return "ogm";
    case Method::OGMp: return "ogmp";
    case Method::OGMq: return "ogm-q";
    case Method::Const: return "const";
  }
  return "unknown";
}

}  // namespace afm
