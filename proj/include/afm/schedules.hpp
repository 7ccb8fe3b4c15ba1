#ifndef AFM_SCHEDULES_HPP
#define AFM_SCHEDULES_HPP

#include <string>

namespace afm {

// Momentum parameter families for the accelerated first-order template
//   y_{k+1} = x_k - alpha * grad f(x_k)
//   x_{k+1} = y_{k+1} + beta_k (y_{k+1} - y_k) + gamma_k (y_{k+1} - x_k).
enum class Method { GM, GMq, FGM, FGMq, FGMpq, OGM, OGMp, OGMq, Const };

struct ScheduleKind {
  Method method = Method::GM;
  double q = 0.0;   // mu/L, required by the *-q methods, in (0, 1]
  int horizon = 0;  // total iteration count N, required by OGM
  double beta = 0.0, gamma = 0.0;  // Const only

  static ScheduleKind gm() { return {Method::GM}; }
  static ScheduleKind gm_q(double q) { return {Method::GMq, q}; }
  static ScheduleKind fgm() { return {Method::FGM}; }
  static ScheduleKind fgm_q(double q) { return {Method::FGMq, q}; }
  static ScheduleKind fgmp_q(double q) { return {Method::FGMpq, q}; }
  static ScheduleKind ogm(int horizon) { return {Method::OGM, 0.0, horizon}; }
  static ScheduleKind ogmp() { return {Method::OGMp}; }
  static ScheduleKind ogm_q(double q) { return {Method::OGMq, q}; }
  static ScheduleKind constant(double beta, double gamma) {
    return {Method::Const, 0.0, 0, beta, gamma};
  }
};

struct Coefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2
double t_next(double t);

// Same recursion, except the final step uses 1 + 8 theta^2 under the root.
double theta_next(double theta, bool is_last);

// Iterator-style coefficient source. step() returns the coefficients for the
// current iteration and advances the internal momentum state; reset() puts
// the state back to iteration zero (t = 1) without touching the step size.
// All step sizes are constant per method, exposed via alpha().
class Schedule {
public:
  // mu is derived as q * lipschitz for the *-q methods. Throws
  // std::invalid_argument on lipschitz <= 0, q outside (0, 1] where
  // required, or OGM without a positive horizon.
  Schedule(const ScheduleKind& kind, double lipschitz);

  double alpha() const { return alpha_; }
  Coefficients step();
  void reset();

  const ScheduleKind& kind() const { return kind_; }

private:
  ScheduleKind kind_;
  double alpha_;
  double const_beta_ = 0.0, const_gamma_ = 0.0;
  double t_ = 1.0;  // t_k or theta_k
  int pos_ = 0;     // iterations taken since the last reset (OGM horizon)
};

std::string method_name(Method m);

}  // namespace afm

#endif  // AFM_SCHEDULES_HPP
