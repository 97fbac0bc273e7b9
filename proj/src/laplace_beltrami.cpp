#include "bbeltrami/laplace_beltrami.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bbeltrami/errors.hpp"

namespace bbeltrami {

DiscreteLaplaceBeltrami::DiscreteLaplaceBeltrami(const SurfaceMetric& metric, int grid_n)
    : n_(grid_n), h_(2.0 * std::numbers::pi / grid_n) {
  if (grid_n < 16) throw SpecError("discrete Laplace-Beltrami requires gridN >= 16");
  metric.validate(grid_n);
  const std::size_t total = static_cast<std::size_t>(n_) * n_;
  a_xedge_.resize(total);
  c_yedge_.resize(total);
  b_corner_.resize(total);
  weight_.resize(total);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double x = i * h_, y = j * h_;
      const std::size_t k = idx(i, j);
      weight_[k] = metric.sqrt_det(x, y);
      a_xedge_[k] = metric.h22()(x + 0.5 * h_, y) / metric.sqrt_det(x + 0.5 * h_, y);
      c_yedge_[k] = metric.h11()(x, y + 0.5 * h_) / metric.sqrt_det(x, y + 0.5 * h_);
      b_corner_[k] =
          metric.h12()(x + 0.5 * h_, y + 0.5 * h_) / metric.sqrt_det(x + 0.5 * h_, y + 0.5 * h_);
    }
  }
}

std::vector<double> DiscreteLaplaceBeltrami::apply(std::span<const double> u) const {
  const std::size_t total = static_cast<std::size_t>(n_) * n_;
  if (u.size() != total) throw SpecError("grid function has the wrong size");
  std::vector<double> out(total, 0.0);
  const double inv_h2 = 1.0 / (h_ * h_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const std::size_t k = idx(i, j);
      // x-edge (i+1/2, j) and y-edge (i, j+1/2) fluxes, distributed to both ends.
      const double fx = a_xedge_[k] * (u[idx(i + 1, j)] - u[k]) * inv_h2;
      out[k] += fx;
      out[idx(i + 1, j)] -= fx;
      const double fy = c_yedge_[k] * (u[idx(i, j + 1)] - u[k]) * inv_h2;
      out[k] += fy;
      out[idx(i, j + 1)] -= fy;

      const double b = b_corner_[k];
      if (b == 0.0) continue;
      const double u00 = u[k], u10 = u[idx(i + 1, j)], u01 = u[idx(i, j + 1)],
                   u11 = u[idx(i + 1, j + 1)];
      const double ux = (u10 + u11 - u00 - u01) / (2.0 * h_);
      const double uy = (u01 + u11 - u00 - u10) / (2.0 * h_);
      const double s = b / (2.0 * h_);
      out[k] += s * (-uy - ux);
      out[idx(i + 1, j)] += s * (uy - ux);
      out[idx(i, j + 1)] += s * (-uy + ux);
      out[idx(i + 1, j + 1)] += s * (uy + ux);
    }
  }
  for (std::size_t k = 0; k < total; ++k) out[k] /= weight_[k];
  return out;
}

std::vector<double> DiscreteLaplaceBeltrami::sample(const SurfaceFunction& f) const {
  std::vector<double> out(static_cast<std::size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[idx(i, j)] = f(i * h_, j * h_);
  return out;
}

double eigen_residual_check(const SurfaceFunction& xz, const SurfaceMetric& metric, double lambda,
                            int grid_n) {
  const DiscreteLaplaceBeltrami op(metric, grid_n);
  const auto u = op.sample(xz);
  const auto lu = op.apply(u);
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    worst = std::max(worst, std::abs(lu[k] + lambda * lambda * u[k]));
  return worst;
}

double eigen_residual_check(const TrigPolynomial& xz, const SurfaceMetric& metric, double lambda,
                            int grid_n) {
  return eigen_residual_check([&xz](double x, double y) { return xz(x, y); }, metric, lambda,
                              grid_n);
}

double analytic_eigen_residual(const TrigPolynomial& xz, double lambda, int grid_n) {
  const TrigPolynomial r = xz.laplacian() + (lambda * lambda) * xz;
  const double h = 2.0 * std::numbers::pi / grid_n;
  double worst = 0.0;
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) worst = std::max(worst, std::abs(r(i * h, j * h)));
  return worst;
}

SurfaceFunction shear_pullback(const TrigPolynomial& f, double s) {
  return [f, s](double x, double y) { return f(x + s * std::sin(y), y); };
}

}  // namespace bbeltrami
