#include "afm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace afm {

namespace {

// Trace and determinant of the 2x2 companion block for one mode.
struct ModeCharacteristic {
  double trace;
  double det;
};

ModeCharacteristic mode_char(double alpha, double beta, double gamma, double lambda) {
  double al = alpha * lambda;
  return {(1.0 + beta) * (1.0 - al) - gamma * al, beta * (1.0 - al)};
}

}  // namespace

CharRoots char_roots(double alpha, double beta, double gamma, double lambda) {
  auto [b, c] = mode_char(alpha, beta, gamma, lambda);
  std::complex<double> disc(b * b - 4.0 * c, 0.0);
  std::complex<double> s = std::sqrt(disc);
  return {(b + s) / 2.0, (b - s) / 2.0};
}

double char_discriminant(double alpha, double beta, double gamma, double lambda) {
  auto [b, c] = mode_char(alpha, beta, gamma, lambda);
  return b * b - 4.0 * c;
}

double rho_t_lambda(double alpha, double beta, double gamma, double lambda) {
  auto [b, c] = mode_char(alpha, beta, gamma, lambda);
  double disc = b * b - 4.0 * c;
  if (disc >= 0.0) return 0.5 * (std::abs(b) + std::sqrt(disc));
  return std::sqrt(c);  // complex pair, modulus sqrt(det); disc < 0 forces c > 0
}

QuadSystem QuadSystem::make(double q, double alpha, double beta, double gamma,
                            Eigen::VectorXd lambdas) {
  if (!(q > 0.0) || q > 1.0)
    throw std::invalid_argument("QuadSystem: q must be in (0, 1]");
  if (!(alpha > 0.0)) throw std::invalid_argument("QuadSystem: alpha must be > 0");
  if (beta < 0.0 || gamma < -1.0)
    throw std::invalid_argument("QuadSystem: coefficients out of range");
  if (lambdas.size() < 1) throw std::invalid_argument("QuadSystem: empty spectrum");
  for (int i = 1; i < lambdas.size(); ++i)
    if (lambdas(i) < lambdas(i - 1))
      throw std::invalid_argument("QuadSystem: lambdas must be ascending");
  const double tol = 1e-9;
  if (std::abs(lambdas(lambdas.size() - 1) - 1.0) > tol ||
      std::abs(lambdas(0) - q) > tol)
    throw std::invalid_argument("QuadSystem: spectrum must be normalized to [q, 1]");
  return {q, alpha, beta, gamma, std::move(lambdas)};
}

double rho_t(const QuadSystem& sys) {
  return std::max(rho_t_lambda(sys.alpha, sys.beta, sys.gamma, sys.q),
                  rho_t_lambda(sys.alpha, sys.beta, sys.gamma, 1.0));
}

double beta_star_of_gamma(double q, double gamma) {
  if (!(q > 0.0) || q >= 1.0)
    throw std::invalid_argument(
        "beta_star_of_gamma: q must be in (0, 1); the q -> 1 limit is 0");
  if (gamma < -1.0) throw std::invalid_argument("beta_star_of_gamma: gamma < -1");
  double r = 1.0 - std::sqrt(q * (1.0 + gamma));
  return r * r / (1.0 - q);
}

OgmQCoefficients ogm_q_coeffs(double q) {
  if (!(q > 0.0) || q > 1.0)
    throw std::invalid_argument("ogm_q_coeffs: q must be in (0, 1]");
  double gamma = 0.5 * (2.0 + q - std::sqrt(q * q + 8.0 * q));
  double beta = q == 1.0 ? 0.0 : gamma * gamma / (1.0 - q);
  return {beta, gamma, gamma};
}

double beta_i_star(double lambda_ratio, double gamma) {
  if (!(lambda_ratio > 0.0) || lambda_ratio >= 1.0)
    throw std::invalid_argument(
        "beta_i_star: lambda/L must be in (0, 1); the top mode has no critical "
        "momentum");
  double r = 1.0 - std::sqrt((1.0 + gamma) * lambda_ratio);
  return r * r / (1.0 - lambda_ratio);
}

double psi(double beta, double gamma, double lambda_ratio) {
  auto [b, c] = mode_char(1.0, beta, gamma, lambda_ratio);
  if (!(c > 0.0))
    throw std::domain_error("psi: mode is not under-damped (real roots)");
  double arg = b / (2.0 * std::sqrt(c));
  if (std::abs(arg) > 1.0 + 1e-12)
    throw std::domain_error(
        "psi: mode is not under-damped; raise beta above beta_i_star first");
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

ModeTrace simulate_modes(const QuadSystem& sys, const Eigen::VectorXd& w0, int iters) {
  const int d = static_cast<int>(sys.lambdas.size());
  if (w0.size() != d)
    throw std::invalid_argument("simulate_modes: w0 must match the spectrum size");
  if (iters < 1) throw std::invalid_argument("simulate_modes: iters must be >= 1");

  ModeTrace trace;
  trace.w.resize(iters + 1, d);
  trace.v.resize(iters + 1, d);
  trace.regimes.resize(d);

  for (int i = 0; i < d; ++i) {
    const double lam = sys.lambdas(i);
    if (lam >= 1.0 - 1e-12) {
      trace.regimes[i] = Regime::LowMomentum;
    } else {
      double crit = beta_i_star(lam, sys.gamma);
      if (std::abs(sys.beta - crit) <= 1e-9)
        trace.regimes[i] = Regime::Optimal;
      else
        trace.regimes[i] = sys.beta < crit ? Regime::LowMomentum : Regime::HighMomentum;
    }

    auto [a, b] = mode_char(sys.alpha, sys.beta, sys.gamma, lam);
    const double al = sys.alpha * lam;
    trace.w(0, i) = w0(i);
    trace.v(0, i) = w0(i);
    trace.w(1, i) = (1.0 - al) * w0(i);
    trace.v(1, i) =
        ((1.0 + sys.beta + sys.gamma) * (1.0 - al) - (sys.beta + sys.gamma)) * w0(i);
    for (int k = 0; k + 2 <= iters; ++k) {
      trace.w(k + 2, i) = a * trace.w(k + 1, i) - b * trace.w(k, i);
      trace.v(k + 2, i) = a * trace.v(k + 1, i) - b * trace.v(k, i);
    }
  }
  return trace;
}

std::vector<RateTableRow> rate_table(double q) {
  if (!(q > 0.0) || q > 1.0)
    throw std::invalid_argument("rate_table: q must be in (0, 1]");
  double sq = std::sqrt(q);
  std::vector<RateTableRow> rows;
  rows.push_back({"gm-q", 2.0 / (1.0 + q), 0.0, 0.0, (1.0 - q) / (1.0 + q)});
  rows.push_back({"fgm-q", 1.0, (1.0 - sq) / (1.0 + sq), 0.0, 1.0 - sq});
  rows.push_back({"fgmp-q", 4.0 / (3.0 + q),
                  (std::sqrt(3.0 + q) - 2.0 * sq) / (std::sqrt(3.0 + q) + 2.0 * sq),
                  0.0, 1.0 - 2.0 * sq / std::sqrt(3.0 + q)});
  OgmQCoefficients c = ogm_q_coeffs(q);
  rows.push_back({"ogm-q", 1.0, c.beta, c.gamma, c.rho});
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RateTableRow& a, const RateTableRow& b) { return a.rho < b.rho; });
  return rows;
}

Eigen::MatrixXd assemble_system_matrix(double alpha, double beta, double gamma,
                                       const Eigen::MatrixXd& Q) {
  const int d = static_cast<int>(Q.rows());
  if (Q.cols() != d) throw std::invalid_argument("assemble_system_matrix: Q not square");
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd M = I - alpha * Q;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  T.topLeftCorner(d, d) = (1.0 + beta) * M - gamma * alpha * Q;
  T.topRightCorner(d, d) = -beta * M;
  T.bottomLeftCorner(d, d) = I;
  return T;
}

}  // namespace afm
