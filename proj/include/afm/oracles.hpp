#ifndef AFM_ORACLES_HPP
#define AFM_ORACLES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>

namespace afm {

/// First-order oracle for an L-smooth convex function f.
class SmoothOracle {
public:
  virtual ~SmoothOracle() = default;

  virtual int dim() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;

  /// Valid Lipschitz constant of the gradient, strictly positive.
  virtual double lipschitz() const = 0;

  /// Strong convexity parameter when known (>= 0); nullopt when unknown.
  virtual std::optional<double> strong_convexity() const { return std::nullopt; }
};

/// Proximal oracle for a closed convex function phi. value() may return +inf
/// (indicator functions); prox() must be a true proximal map,
///   prox(z, zeta) = argmin_u 0.5*||u - z||^2 + zeta*phi(u),  zeta > 0.
class ProxOracle {
public:
  virtual ~ProxOracle() = default;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd prox(const Eigen::VectorXd& z, double zeta) const = 0;
};

/// f(x) = 0.5 x'Qx - p'x with Q symmetric positive semidefinite.
/// Eigenstructure is computed once at construction; eigenvalues() is sorted
/// ascending and eigenvectors() columns follow that order.
class QuadraticProblem final : public SmoothOracle {
public:
  QuadraticProblem(Eigen::MatrixXd Q, Eigen::VectorXd p);

  int dim() const override { return static_cast<int>(p_.size()); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  double lipschitz() const override { return eigenvalues_(eigenvalues_.size() - 1); }
  std::optional<double> strong_convexity() const override { return eigenvalues_(0); }

  const Eigen::MatrixXd& Q() const { return Q_; }
  const Eigen::VectorXd& p() const { return p_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

  /// Solution of Qx = p. Requires Q positive definite.
  const Eigen::VectorXd& x_star() const { return x_star_; }
  /// f(x_star) in the algebraically stable form -0.5 p'x_star.
  double f_star() const { return f_star_; }

private:
  Eigen::MatrixXd Q_;
  Eigen::VectorXd p_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd x_star_;
  double f_star_;
};

/// Random positive definite quadratic with exact spectrum endpoints:
/// the eigenvalues of a seeded Wishart matrix A'A are affinely rescaled so
/// that lambda_min = q and lambda_max = 1, then Q is reassembled in the
/// original eigenbasis. p is drawn from the same stream after A.
/// Requires d >= 2 and q in (0, 1]; q = 1 collapses the spectrum to {1}.
QuadraticProblem gen_quadratic(int d, double q, std::uint64_t seed);

/// The 2-d diagonal quadratic Q = diag(0.01, 1), p = 0 used by the
/// two-mode restart experiment (CLI experiment "case2").
QuadraticProblem fixed_quadratic_case2();

/// f(x) = eta * log(sum_i exp((a_i'x - b_i) / eta)), rows a_i' of A.
/// Evaluation shifts by the max exponent, so value/gradient stay finite for
/// arguments far from the origin. lipschitz() = lambda_max(A'A) / eta.
class LogSumExpOracle final : public SmoothOracle {
public:
  LogSumExpOracle(Eigen::MatrixXd A, Eigen::VectorXd b, double eta);

  int dim() const override { return static_cast<int>(A_.cols()); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  double lipschitz() const override { return lipschitz_; }

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }
  double eta() const { return eta_; }

private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  double eta_;
  double lipschitz_;
};

/// Seeded instance with standard normal A (m x d) and b (stream order: A
/// row-major, then b).
LogSumExpOracle gen_logsumexp(int m, int d, double eta, std::uint64_t seed);

/// Elementwise sign(z_i) * max(|z_i| - t, 0). Requires t >= 0.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& z, double t);

/// Elementwise clamp of z to [lo_i, hi_i]. Rejects lo_i > hi_i.
Eigen::VectorXd box_projection(const Eigen::VectorXd& z, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi);
Eigen::VectorXd box_projection(const Eigen::VectorXd& z, double lo, double hi);

/// phi(x) = tau * ||x||_1, prox = soft threshold with level zeta * tau.
class L1Prox final : public ProxOracle {
public:
  explicit L1Prox(double tau);
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd prox(const Eigen::VectorXd& z, double zeta) const override;
  double tau() const { return tau_; }

private:
  double tau_;
};

/// Indicator of the box [lo, hi]^d; prox is the projection for every zeta.
class BoxProx final : public ProxOracle {
public:
  BoxProx(double lo, double hi);
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd prox(const Eigen::VectorXd& z, double zeta) const override;

private:
  double lo_, hi_;
};

/// phi = 0. Turns any composite solver into its smooth counterpart.
class ZeroProx final : public ProxOracle {
public:
  double value(const Eigen::VectorXd&) const override { return 0.0; }
  Eigen::VectorXd prox(const Eigen::VectorXd& z, double) const override { return z; }
};

/// F = f + phi with shared ownership of both parts. f_ref, when set, is a
/// certified reference objective: no iterate of a correct solver may fall
/// below it by more than roundoff.
struct CompositeProblem {
  std::shared_ptr<const SmoothOracle> smooth;
  std::shared_ptr<const ProxOracle> nonsmooth;
  std::optional<double> f_ref;

  double F(const Eigen::VectorXd& x) const {
    return smooth->value(x) + nonsmooth->value(x);
  }
};

/// 0.5 ||Ax - b||^2 with lipschitz() = lambda_max(A'A).
class LeastSquaresOracle final : public SmoothOracle {
public:
  LeastSquaresOracle(Eigen::MatrixXd A, Eigen::VectorXd b);

  int dim() const override { return static_cast<int>(A_.cols()); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  double lipschitz() const override { return lipschitz_; }

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }

private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  double lipschitz_;
};

/// Sparse regression instance: x_true keeps the s largest-magnitude entries
/// of a seeded normal vector, b = A x_true + noise. Stream order: x_true
/// base vector, then A row-major, then noise. Rejects s > d.
struct LassoInstance {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd x_true;
  double tau;
  CompositeProblem problem;
};
LassoInstance gen_lasso(int m, int d, int s, double tau, double noise_var,
                        std::uint64_t seed);

/// Box-constrained quadratic on [-1, 1]^d; Q spans [1/cond, 1] exactly
/// (cond = 1 gives the identity spectrum). Stream order: A, then p.
struct BoxQpInstance {
  std::shared_ptr<const QuadraticProblem> quadratic;
  CompositeProblem problem;
};
BoxQpInstance gen_boxqp(int d, double cond, std::uint64_t seed);

/// Largest eigenvalue of a symmetric matrix: exact solve up to dimension
/// 2000, power iteration with relative tolerance 1e-10 above that.
double largest_eigenvalue(const Eigen::MatrixXd& S);

/// lambda_max(A'A) computed through the smaller of the two Gram matrices.
double gram_largest_eigenvalue(const Eigen::MatrixXd& A);

/// Power iteration on a symmetric matrix, exposed for cross-checking the
/// dense path. Deterministic start vector.
double power_iteration_lmax(const Eigen::MatrixXd& S, double tol, int max_sweeps = 100000);

}  // namespace afm

#endif  // AFM_ORACLES_HPP
