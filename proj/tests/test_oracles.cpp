#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>

#include "afm/oracles.hpp"
#include "support.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("gen_quadratic is deterministic for a fixed seed") {
  const afm::QuadraticProblem a = afm::gen_quadratic(12, 0.05, 42);
  const afm::QuadraticProblem b = afm::gen_quadratic(12, 0.05, 42);
  CHECK((a.Q() - b.Q()).norm() == 0.0);
  CHECK((a.p() - b.p()).norm() == 0.0);

  const afm::QuadraticProblem c = afm::gen_quadratic(12, 0.05, 43);
  CHECK((a.Q() - c.Q()).norm() > 0.0);
}

TEST_CASE("gen_quadratic hits the requested spectrum endpoints") {
  const afm::QuadraticProblem prob = afm::gen_quadratic(30, 0.05, 7);
  const VectorXd& ev = prob.eigenvalues();
  CHECK(ev(0) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(ev(ev.size() - 1) == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i + 1 < ev.size(); ++i) CHECK(ev(i) <= ev(i + 1));
  CHECK(prob.lipschitz() == ev(ev.size() - 1));
  CHECK(prob.strong_convexity().value() == ev(0));
}

TEST_CASE("gen_quadratic with q = 1 is the identity spectrum") {
  const afm::QuadraticProblem prob = afm::gen_quadratic(8, 1.0, 3);
  CHECK((prob.Q() - MatrixXd::Identity(8, 8)).norm() <= 1e-12);
}

TEST_CASE("quadratic value, gradient, and optimum are consistent") {
  const afm::QuadraticProblem prob = afm::gen_quadratic(10, 0.1, 17);
  for (int trial = 0; trial < 5; ++trial) {
    const VectorXd x = testsupport::seeded_normal(10, 100 + trial);
    const VectorXd g = prob.gradient(x);
    const VectorXd g_fd = testsupport::fd_gradient(prob, x);
    CHECK((g - g_fd).norm() <= 1e-6 * (1.0 + g.norm()));

    // Exact forms.
    CHECK(prob.value(x) ==
          doctest::Approx(0.5 * x.dot(prob.Q() * x) - prob.p().dot(x))
              .epsilon(1e-14));
  }
  CHECK(prob.gradient(prob.x_star()).norm() <= 1e-12 * prob.p().norm());
  CHECK(prob.value(prob.x_star()) ==
        doctest::Approx(prob.f_star()).epsilon(1e-12));
}

TEST_CASE("quadratic rejects non-positive-definite input") {
  MatrixXd Q = MatrixXd::Zero(2, 2);
  Q(1, 1) = 1.0;
  CHECK_THROWS_AS(afm::QuadraticProblem(Q, VectorXd::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(afm::QuadraticProblem(MatrixXd::Identity(2, 2), VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("the fixed two-dimensional instance") {
  const afm::QuadraticProblem prob = afm::fixed_quadratic_case2();
  CHECK(prob.Q()(0, 0) == 0.01);
  CHECK(prob.Q()(1, 1) == 1.0);
  CHECK(prob.Q()(0, 1) == 0.0);
  CHECK(prob.p().norm() == 0.0);
  CHECK(prob.lipschitz() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(prob.strong_convexity().value() == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(prob.f_star() == 0.0);

  Eigen::Vector2d x0(0.2, 1.0);
  CHECK(prob.value(x0) == doctest::Approx(0.5002).epsilon(1e-15));
}

TEST_CASE("log-sum-exp bounds, gradient, and curvature constant") {
  const afm::LogSumExpOracle f = afm::gen_logsumexp(30, 10, 2.0, 5);
  for (int trial = 0; trial < 5; ++trial) {
    const VectorXd x = testsupport::seeded_normal(10, 200 + trial);
    const VectorXd r = f.A() * x - f.b();
    const double hard_max = r.maxCoeff();
    const double v = f.value(x);
    CHECK(v >= hard_max - 1e-12);
    CHECK(v <= hard_max + f.eta() * std::log(static_cast<double>(r.size())) + 1e-12);

    const VectorXd g_fd = testsupport::fd_gradient(f, x);
    CHECK((f.gradient(x) - g_fd).norm() <= 1e-6 * (1.0 + g_fd.norm()));
  }

  CHECK(f.lipschitz() * f.eta() ==
        doctest::Approx(afm::gram_largest_eigenvalue(f.A())).epsilon(1e-12));

  // Max-shift keeps huge arguments finite.
  const VectorXd big = 1e3 * VectorXd::Ones(10);
  CHECK(std::isfinite(f.value(big)));
  CHECK(std::isfinite(f.gradient(big).norm()));
}

TEST_CASE("soft threshold on known values") {
  Eigen::Vector3d z(3.0, -0.5, 0.2);
  const VectorXd s = afm::soft_threshold(z, 1.0);
  CHECK(s(0) == 2.0);
  CHECK(s(1) == 0.0);
  CHECK(s(2) == 0.0);
  CHECK_THROWS_AS(afm::soft_threshold(z, -0.1), std::invalid_argument);

  const afm::L1Prox l1(0.5);
  const VectorXd via_prox = l1.prox(z, 2.0);  // level = zeta * tau = 1
  CHECK((via_prox - s).norm() == 0.0);
  CHECK(l1.value(z) == doctest::Approx(0.5 * 3.7).epsilon(1e-15));
}

TEST_CASE("box projection clamps and validates bounds") {
  Eigen::Vector3d z(-2.0, 0.3, 5.0);
  const VectorXd p = afm::box_projection(z, -1.0, 1.0);
  CHECK(p(0) == -1.0);
  CHECK(p(1) == 0.3);
  CHECK(p(2) == 1.0);

  Eigen::Vector3d lo(-1.0, -1.0, -1.0), hi(1.0, 1.0, 1.0);
  CHECK((afm::box_projection(z, lo, hi) - p).norm() == 0.0);
  CHECK_THROWS_AS(afm::box_projection(z, 1.0, -1.0), std::invalid_argument);

  const afm::BoxProx box(-1.0, 1.0);
  CHECK(box.value(p) == 0.0);
  CHECK(box.value(z) == std::numeric_limits<double>::infinity());
}

// prox_{zeta phi}(z) minimizes phi(w) + ||w - z||^2 / (2 zeta); the output
// must beat every other candidate, and the map must be nonexpansive.
TEST_CASE("prox optimality and nonexpansiveness") {
  const afm::L1Prox l1(0.7);
  const afm::BoxProx box(-1.0, 1.0);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (const afm::ProxOracle* phi :
       {static_cast<const afm::ProxOracle*>(&l1),
        static_cast<const afm::ProxOracle*>(&box)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const VectorXd z1 = testsupport::seeded_normal(6, 300 + trial);
      const VectorXd z2 = testsupport::seeded_normal(6, 400 + trial);
      const double zeta = 0.1 + 0.5 * (trial % 5);

      const VectorXd p1 = phi->prox(z1, zeta);
      const VectorXd p2 = phi->prox(z2, zeta);
      CHECK((p1 - p2).norm() <= (z1 - z2).norm() + 1e-12);

      const double obj_p = phi->value(p1) + (p1 - z1).squaredNorm() / (2.0 * zeta);
      for (int probe = 0; probe < 30; ++probe) {
        VectorXd w = p1;
        for (int i = 0; i < w.size(); ++i) w(i) += 0.3 * normal(rng);
        const double obj_w = phi->value(w) + (w - z1).squaredNorm() / (2.0 * zeta);
        CHECK(obj_p <= obj_w + 1e-12);
      }
    }
  }
}

TEST_CASE("gen_lasso shapes, sparsity, and determinism") {
  const afm::LassoInstance inst = afm::gen_lasso(200, 400, 20, 1.0, 0.1, 3);
  CHECK(inst.A.rows() == 200);
  CHECK(inst.A.cols() == 400);
  CHECK(inst.b.size() == 200);
  CHECK(inst.tau == 1.0);

  int nonzeros = 0;
  for (int i = 0; i < inst.x_true.size(); ++i)
    if (inst.x_true(i) != 0.0) ++nonzeros;
  CHECK(nonzeros == 20);

  const afm::LassoInstance again = afm::gen_lasso(200, 400, 20, 1.0, 0.1, 3);
  CHECK((inst.A * inst.x_true - again.A * again.x_true).norm() == 0.0);
  CHECK((inst.b - again.b).norm() == 0.0);

  CHECK(inst.problem.smooth->lipschitz() ==
        doctest::Approx(afm::gram_largest_eigenvalue(inst.A)).epsilon(1e-12));

  CHECK_THROWS_AS(afm::gen_lasso(10, 5, 6, 1.0, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(afm::gen_lasso(10, 5, 0, 1.0, 0.1, 1), std::invalid_argument);
}

TEST_CASE("least-squares oracle matches its closed forms") {
  const MatrixXd A = testsupport::seeded_normal(12, 8).reshaped(4, 3);
  const VectorXd b = testsupport::seeded_normal(4, 9);
  const afm::LeastSquaresOracle f{MatrixXd(A), VectorXd(b)};
  const VectorXd x = testsupport::seeded_normal(3, 10);
  CHECK(f.value(x) == doctest::Approx(0.5 * (A * x - b).squaredNorm()).epsilon(1e-14));
  CHECK((f.gradient(x) - A.transpose() * (A * x - b)).norm() <= 1e-13);
  const VectorXd g_fd = testsupport::fd_gradient(f, x);
  CHECK((f.gradient(x) - g_fd).norm() <= 1e-6 * (1.0 + g_fd.norm()));
}

TEST_CASE("gen_boxqp spectrum and feasible prox") {
  const afm::BoxQpInstance inst = afm::gen_boxqp(20, 1e4, 11);
  const double mu = inst.quadratic->strong_convexity().value();
  const double L = inst.quadratic->lipschitz();
  CHECK(mu / L == doctest::Approx(1e-4).epsilon(1e-9));
  CHECK(L == doctest::Approx(1.0).epsilon(1e-12));

  const VectorXd z = 3.0 * testsupport::seeded_normal(20, 12);
  const VectorXd p = inst.problem.nonsmooth->prox(z, 0.7);
  CHECK(p.maxCoeff() <= 1.0);
  CHECK(p.minCoeff() >= -1.0);

  const afm::BoxQpInstance id = afm::gen_boxqp(6, 1.0, 2);
  CHECK((id.quadratic->Q() - MatrixXd::Identity(6, 6)).norm() <= 1e-12);
}

TEST_CASE("largest eigenvalue: dense and power-iteration paths agree") {
  const MatrixXd B = testsupport::seeded_normal(50 * 50, 21).reshaped(50, 50);
  const MatrixXd S = B.transpose() * B + 50.0 * MatrixXd::Identity(50, 50);
  const double dense = afm::largest_eigenvalue(S);
  const double power = afm::power_iteration_lmax(S, 1e-12);
  CHECK(power == doctest::Approx(dense).epsilon(1e-8));

  const MatrixXd A = testsupport::seeded_normal(40 * 30, 22).reshaped(40, 30);
  CHECK(afm::gram_largest_eigenvalue(A) ==
        doctest::Approx(afm::largest_eigenvalue(MatrixXd(A.transpose() * A)))
            .epsilon(1e-8));
}
