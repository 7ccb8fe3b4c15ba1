#ifndef AFM_TESTS_SUPPORT_HPP
#define AFM_TESTS_SUPPORT_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "afm/oracles.hpp"

namespace testsupport {

inline Eigen::VectorXd seeded_normal(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = normal(rng);
  return v;
}

// Central difference with per-coordinate step 1e-6 (1 + |x_i|).
inline Eigen::VectorXd fd_gradient(const afm::SmoothOracle& f,
                                   const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x(i)));
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    g(i) = (f.value(xp) - f.value(xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
  }
  return g;
}

// Least-squares slope of ys against 0..n-1.
inline double slope(const std::vector<double>& ys) {
  const double n = static_cast<double>(ys.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < ys.size(); ++i) {
    const double x = static_cast<double>(i);
    sx += x;
    sy += ys[i];
    sxx += x * x;
    sxy += x * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Forwards an oracle while misreporting its curvature bound, for driving
// the divergence path deliberately.
class ScaledLipschitz final : public afm::SmoothOracle {
public:
  ScaledLipschitz(const afm::SmoothOracle& inner, double scale)
      : inner_(inner), scale_(scale) {}

  int dim() const override { return inner_.dim(); }
  double value(const Eigen::VectorXd& x) const override { return inner_.value(x); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override {
    return inner_.gradient(x);
  }
  double lipschitz() const override { return scale_ * inner_.lipschitz(); }
  std::optional<double> strong_convexity() const override {
    return inner_.strong_convexity();
  }

private:
  const afm::SmoothOracle& inner_;
  double scale_;
};

}  // namespace testsupport

#endif  // AFM_TESTS_SUPPORT_HPP
