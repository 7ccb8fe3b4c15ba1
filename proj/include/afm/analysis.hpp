#ifndef AFM_ANALYSIS_HPP
#define AFM_ANALYSIS_HPP

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace afm {

// Spectral analysis of the constant-coefficient iteration on a quadratic
// with Hessian eigenvalue lambda. Per mode, the secondary sequence obeys
//   v_{k+2} = ((1+beta)(1 - alpha*lambda) - gamma*alpha*lambda) v_{k+1}
//             - beta (1 - alpha*lambda) v_k,
// so the characteristic polynomial is
//   r^2 - ((1+beta)(1 - alpha*lambda) - gamma*alpha*lambda) r
//       + beta (1 - alpha*lambda).
// Only the products alpha*lambda matter; callers may pass normalized
// quantities (alpha in units of 1/L, lambda in units of L) or raw ones.

struct CharRoots {
  std::complex<double> plus;   // quadratic-formula '+' branch
  std::complex<double> minus;  // '-' branch
};

CharRoots char_roots(double alpha, double beta, double gamma, double lambda);

// Discriminant of the characteristic polynomial; negative means a complex
// (under-damped) pair.
double char_discriminant(double alpha, double beta, double gamma, double lambda);

// Spectral radius of the 2x2 companion block for one mode:
//   0.5 (|trace| + sqrt(disc))     when disc >= 0
//   sqrt(beta (1 - alpha*lambda))  otherwise.
double rho_t_lambda(double alpha, double beta, double gamma, double lambda);

// Constant-coefficient system on a normalized spectrum: lambdas ascending
// with lambdas(0) = q and lambdas(d-1) = 1, alpha in units of 1/L.
struct QuadSystem {
  double q = 0.0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  Eigen::VectorXd lambdas;

  // Validates q in (0, 1], beta >= 0, gamma >= -1, the ordering of lambdas
  // and its endpoints. Throws std::invalid_argument.
  static QuadSystem make(double q, double alpha, double beta, double gamma,
                         Eigen::VectorXd lambdas);
};

// max over lambda in {q, 1}; interior eigenvalues never exceed the endpoint
// maximum because rho is quasi-convex in lambda.
double rho_t(const QuadSystem& sys);

// Critical momentum for the mode at the lower endpoint:
//   beta*(gamma) = (1 - sqrt(q (1 + gamma)))^2 / (1 - q).
// Rejects q = 1 (callers use the q -> 1 limit, 0).
double beta_star_of_gamma(double q, double gamma);

// Stationary pair of the endpoint trade-off rho(T_mu) = |gamma| = rho(T_L):
//   gamma* = (2 + q - sqrt(q^2 + 8 q)) / 2,  beta* = gamma*^2 / (1 - q),
// with rho* = gamma*. Accepts q in (0, 1]; at q = 1 both collapse to 0.
struct OgmQCoefficients {
  double beta = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
};
OgmQCoefficients ogm_q_coeffs(double q);

// Critical momentum of an interior mode with ratio lambda/L in (0, 1):
//   (1 - sqrt((1 + gamma) ratio))^2 / (1 - ratio).
// Rejects ratio = 1; that mode is low-momentum for every beta in [0, 1].
double beta_i_star(double lambda_ratio, double gamma);

// Oscillation frequency of an under-damped mode,
//   arccos(((1+beta)(1-ratio) - gamma*ratio) / (2 sqrt(beta (1-ratio)))).
// Throws std::domain_error when the mode is not under-damped (the arccos
// argument falls outside [-1, 1] beyond roundoff slack).
double psi(double beta, double gamma, double lambda_ratio);

enum class Regime { LowMomentum, Optimal, HighMomentum };

// Per-mode evolution of the primary (w, from y_k) and secondary (v, from
// x_k) sequences, seeded with w_0 = v_0 and
//   w_{1,i} = (1 - lambda_i) w_{0,i}
//   v_{1,i} = ((1 + beta + gamma)(1 - lambda_i) - (beta + gamma)) v_{0,i}.
// Rows index iterations 0..iters, columns index modes. regimes classifies
// beta against beta_i_star with tolerance 1e-9; the lambda = 1 mode is
// always LowMomentum.
struct ModeTrace {
  Eigen::MatrixXd w;
  Eigen::MatrixXd v;
  std::vector<Regime> regimes;
};
ModeTrace simulate_modes(const QuadSystem& sys, const Eigen::VectorXd& w0, int iters);

// Closed-form coefficients and worst-case spectral radius of the four
// strongly convex schedules, sorted by rho ascending. alpha is reported in
// units of 1/L.
struct RateTableRow {
  std::string method;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, rho = 0.0;
};
std::vector<RateTableRow> rate_table(double q);

// Full 2d x 2d one-step matrix for state (x_k, x_{k-1}):
//   [ (1+beta)(I - alpha Q) - gamma alpha Q   -beta (I - alpha Q) ]
//   [ I                                        0                  ]
Eigen::MatrixXd assemble_system_matrix(double alpha, double beta, double gamma,
                                       const Eigen::MatrixXd& Q);

}  // namespace afm

#endif  // AFM_ANALYSIS_HPP
