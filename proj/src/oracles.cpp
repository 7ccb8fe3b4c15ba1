#include "afm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace afm {

namespace {

constexpr int kDenseEigLimit = 2000;

Eigen::MatrixXd draw_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = normal(rng);
  return M;
}

Eigen::VectorXd draw_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace

QuadraticProblem::QuadraticProblem(Eigen::MatrixXd Q, Eigen::VectorXd p)
    : Q_(std::move(Q)), p_(std::move(p)) {
  if (Q_.rows() != Q_.cols() || Q_.rows() != p_.size() || p_.size() < 1)
    throw std::invalid_argument("QuadraticProblem: Q must be square and match p");
  Q_ = ((Q_ + Q_.transpose()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q_);
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
  if (eigenvalues_(0) <= 0.0)
    throw std::invalid_argument("QuadraticProblem: Q must be positive definite");
  Eigen::VectorXd c = eigenvectors_.transpose() * p_;
  x_star_ = eigenvectors_ * (c.array() / eigenvalues_.array()).matrix();
  // + 0.0 normalizes the p = 0 case to positive zero.
  f_star_ = -0.5 * p_.dot(x_star_) + 0.0;
}

double QuadraticProblem::value(const Eigen::VectorXd& x) const {
  return 0.5 * x.dot(Q_ * x) - p_.dot(x);
}

Eigen::VectorXd QuadraticProblem::gradient(const Eigen::VectorXd& x) const {
  return Q_ * x - p_;
}

QuadraticProblem gen_quadratic(int d, double q, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("gen_quadratic: d must be >= 2");
  if (!(q > 0.0) || q > 1.0)
    throw std::invalid_argument("gen_quadratic: q must be in (0, 1]");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd A = draw_matrix(rng, d, d);
  Eigen::VectorXd p = draw_vector(rng, d);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A.transpose() * A);
  const Eigen::VectorXd& e = eig.eigenvalues();
  double lo = e(0), hi = e(d - 1);
  Eigen::VectorXd lambda(d);
  if (hi - lo <= 0.0) {
    lambda.setOnes();  // degenerate draw, collapse to the q = 1 spectrum
  } else {
    for (int i = 0; i < d; ++i) lambda(i) = q + (1.0 - q) * (e(i) - lo) / (hi - lo);
    lambda(0) = q;
    lambda(d - 1) = 1.0;
  }
  Eigen::MatrixXd Q =
      eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();
  return QuadraticProblem(std::move(Q), std::move(p));
}

QuadraticProblem fixed_quadratic_case2() {
  Eigen::MatrixXd Q = Eigen::Vector2d(0.01, 1.0).asDiagonal();
  return QuadraticProblem(Q, Eigen::Vector2d::Zero());
}

LogSumExpOracle::LogSumExpOracle(Eigen::MatrixXd A, Eigen::VectorXd b, double eta)
    : A_(std::move(A)), b_(std::move(b)), eta_(eta) {
  if (A_.rows() != b_.size() || A_.rows() < 1)
    throw std::invalid_argument("LogSumExpOracle: A rows must match b");
  if (!(eta_ > 0.0)) throw std::invalid_argument("LogSumExpOracle: eta must be > 0");
  lipschitz_ = gram_largest_eigenvalue(A_) / eta_;
}

double LogSumExpOracle::value(const Eigen::VectorXd& x) const {
  Eigen::ArrayXd r = ((A_ * x - b_) / eta_).array();
  double shift = r.maxCoeff();
  return eta_ * (shift + std::log((r - shift).exp().sum()));
}

Eigen::VectorXd LogSumExpOracle::gradient(const Eigen::VectorXd& x) const {
  Eigen::ArrayXd r = ((A_ * x - b_) / eta_).array();
  double shift = r.maxCoeff();
  Eigen::ArrayXd w = (r - shift).exp();
  return A_.transpose() * (w / w.sum()).matrix();
}

LogSumExpOracle gen_logsumexp(int m, int d, double eta, std::uint64_t seed) {
  if (m < 1 || d < 1) throw std::invalid_argument("gen_logsumexp: m, d must be >= 1");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd A = draw_matrix(rng, m, d);
  Eigen::VectorXd b = draw_vector(rng, m);
  return LogSumExpOracle(std::move(A), std::move(b), eta);
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& z, double t) {
  if (t < 0.0) throw std::invalid_argument("soft_threshold: level must be >= 0");
  return z.unaryExpr([t](double v) {
    double m = std::abs(v) - t;
    return m > 0.0 ? (v > 0.0 ? m : -m) : 0.0;
  });
}

Eigen::VectorXd box_projection(const Eigen::VectorXd& z, const Eigen::VectorXd& lo,
                               const Eigen::VectorXd& hi) {
  if (lo.size() != z.size() || hi.size() != z.size())
    throw std::invalid_argument("box_projection: bound sizes must match z");
  if ((lo.array() > hi.array()).any())
    throw std::invalid_argument("box_projection: requires lo <= hi elementwise");
  return z.cwiseMax(lo).cwiseMin(hi);
}

Eigen::VectorXd box_projection(const Eigen::VectorXd& z, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("box_projection: requires lo <= hi");
  return z.unaryExpr([lo, hi](double v) { return std::clamp(v, lo, hi); });
}

L1Prox::L1Prox(double tau) : tau_(tau) {
  if (tau_ < 0.0) throw std::invalid_argument("L1Prox: tau must be >= 0");
}

double L1Prox::value(const Eigen::VectorXd& x) const {
  return tau_ * x.lpNorm<1>();
}

Eigen::VectorXd L1Prox::prox(const Eigen::VectorXd& z, double zeta) const {
  return soft_threshold(z, zeta * tau_);
}

BoxProx::BoxProx(double lo, double hi) : lo_(lo), hi_(hi) {
  if (lo > hi) throw std::invalid_argument("BoxProx: requires lo <= hi");
}

double BoxProx::value(const Eigen::VectorXd& x) const {
  for (int i = 0; i < x.size(); ++i)
    if (x(i) < lo_ || x(i) > hi_) return std::numeric_limits<double>::infinity();
  return 0.0;
}

Eigen::VectorXd BoxProx::prox(const Eigen::VectorXd& z, double) const {
  return box_projection(z, lo_, hi_);
}

LeastSquaresOracle::LeastSquaresOracle(Eigen::MatrixXd A, Eigen::VectorXd b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size() || A_.rows() < 1 || A_.cols() < 1)
    throw std::invalid_argument("LeastSquaresOracle: A rows must match b");
  lipschitz_ = gram_largest_eigenvalue(A_);
}

double LeastSquaresOracle::value(const Eigen::VectorXd& x) const {
  return 0.5 * (A_ * x - b_).squaredNorm();
}

Eigen::VectorXd LeastSquaresOracle::gradient(const Eigen::VectorXd& x) const {
  return A_.transpose() * (A_ * x - b_);
}

LassoInstance gen_lasso(int m, int d, int s, double tau, double noise_var,
                        std::uint64_t seed) {
  if (m < 1 || d < 1) throw std::invalid_argument("gen_lasso: m, d must be >= 1");
  if (s < 1 || s > d) throw std::invalid_argument("gen_lasso: s must be in [1, d]");
  if (noise_var < 0.0) throw std::invalid_argument("gen_lasso: noise_var must be >= 0");
  std::mt19937_64 rng(seed);

  Eigen::VectorXd base = draw_vector(rng, d);
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(base(a)) > std::abs(base(b));
  });
  Eigen::VectorXd x_true = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < s; ++i) x_true(idx[i]) = base(idx[i]);

  Eigen::MatrixXd A = draw_matrix(rng, m, d);
  Eigen::VectorXd noise = draw_vector(rng, m);
  Eigen::VectorXd b = A * x_true + std::sqrt(noise_var) * noise;

  LassoInstance inst;
  inst.A = A;
  inst.b = b;
  inst.x_true = std::move(x_true);
  inst.tau = tau;
  inst.problem.smooth = std::make_shared<LeastSquaresOracle>(std::move(A), std::move(b));
  inst.problem.nonsmooth = std::make_shared<L1Prox>(tau);
  return inst;
}

BoxQpInstance gen_boxqp(int d, double cond, std::uint64_t seed) {
  if (cond < 1.0) throw std::invalid_argument("gen_boxqp: cond must be >= 1");
  auto quad = std::make_shared<QuadraticProblem>(gen_quadratic(d, 1.0 / cond, seed));
  BoxQpInstance inst;
  inst.quadratic = quad;
  inst.problem.smooth = quad;
  inst.problem.nonsmooth = std::make_shared<BoxProx>(-1.0, 1.0);
  return inst;
}

double largest_eigenvalue(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols() || S.rows() < 1)
    throw std::invalid_argument("largest_eigenvalue: matrix must be square");
  if (S.rows() <= kDenseEigLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(S.rows() - 1);
  }
  return power_iteration_lmax(S, 1e-10);
}

double gram_largest_eigenvalue(const Eigen::MatrixXd& A) {
  if (A.rows() <= A.cols())
    return largest_eigenvalue(Eigen::MatrixXd(A * A.transpose()));
  return largest_eigenvalue(Eigen::MatrixXd(A.transpose() * A));
}

double power_iteration_lmax(const Eigen::MatrixXd& S, double tol, int max_sweeps) {
  const int n = static_cast<int>(S.rows());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
  // Break symmetry so eigenvectors orthogonal to the all-ones vector are
  // still reachable.
  for (int i = 0; i < n; ++i) v(i) += 1e-3 * static_cast<double>(i % 7);
  v.normalize();
  double lambda = 0.0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Eigen::VectorXd w = S * v;
    double norm = w.norm();
    if (norm == 0.0) return 0.0;
    double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace afm
