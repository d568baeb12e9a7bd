#include "l1median/poly.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace l1m {

std::vector<double> solve_quadratic(double a, double b, double c) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return {};
  a /= scale;
  b /= scale;
  c /= scale;
  if (std::abs(a) <= 1e-13) {
    if (std::abs(b) <= 1e-13) return {};
    return {-c / b};
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < -1e-12) return {};
  if (disc < 0.0) disc = 0.0;
  if (disc == 0.0) return {-b / (2.0 * a)};
  // Citardauq form avoids cancellation.
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = q / a;
  double r2 = q != 0.0 ? c / q : -r1;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

std::vector<double> real_roots(std::vector<double> c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  for (double& v : c) v /= scale;
  while (!c.empty() && std::abs(c.back()) <= 1e-13) c.pop_back();
  if (c.size() <= 1) return {};
  if (c.size() == 2) return {-c[0] / c[1]};
  if (c.size() == 3) return solve_quadratic(c[2], c[1], c[0]);

  const int k = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) companion(i, k - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  const Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  const Eigen::VectorXcd ev = es.eigenvalues();

  auto eval = [&](double t, double& d) {
    double p = 0.0;
    d = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) {
      d = d * t + p;
      p = p * t + c[i];
    }
    return p;
  };
  std::vector<double> out;
  for (int i = 0; i < k; ++i) {
    const std::complex<double> z = ev(i);
    if (std::abs(z.imag()) > 1e-7 * std::max(1.0, std::abs(z))) continue;
    double t = z.real();
    for (int it = 0; it < 3; ++it) {
      double d = 0.0;
      const double p = eval(t, d);
      if (d == 0.0) break;
      const double step = p / d;
      if (!std::isfinite(step) || std::abs(step) > 1e-3 * std::max(1.0, std::abs(t))) break;
      t -= step;
    }
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace l1m
