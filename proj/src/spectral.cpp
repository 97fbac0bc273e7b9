#include "bbeltrami/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <limits>
#include <sstream>
#include <tuple>

namespace bbeltrami {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kNewtonMaxIter = 50;
constexpr double kNewtonTol = 1e-12;

}  // namespace

EmptyEigenspaceError::EmptyEigenspaceError(int mu)
    : SpecError("empty eigenspace: " + std::to_string(mu) + " is not a sum of two squares"),
      mu_(mu) {}

EigenspaceBasis enumerate_eigenspace(int mu) {
  if (mu < 1) throw SpecError("eigenvalue mu must be a positive integer");
  EigenspaceBasis out;
  out.mu = mu;
  const int r = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(mu))));
  for (int k1 = 0; k1 <= r; ++k1) {
    for (int k2 = -r; k2 <= r; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      if (k1 * k1 + k2 * k2 == mu) out.modes.emplace_back(k1, k2);
    }
  }
  if (out.modes.empty()) throw EmptyEigenspaceError(mu);
  for (const auto& [k1, k2] : out.modes) {
    out.basis.push_back(TrigPolynomial::single(k1, k2, Phase::Cos));
    out.basis.push_back(TrigPolynomial::single(k1, k2, Phase::Sin));
  }
  return out;
}

TrigPolynomial combine(const EigenspaceBasis& basis, std::span<const double> coeffs) {
  if (coeffs.size() != basis.dim()) throw SpecError("coefficient count does not match eigenspace dimension");
  TrigPolynomial f;
  for (std::size_t i = 0; i < coeffs.size(); ++i) f += coeffs[i] * basis.basis[i];
  return f;
}

std::vector<double> gaussian_coefficients(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto uniform = [&engine] {
    // 53 random bits in (0, 1]
    return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
  };
  std::vector<double> out;
  out.reserve(n + 1);
  while (out.size() < n) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = kTwoPi * uniform();
    out.push_back(r * std::cos(t));
    out.push_back(r * std::sin(t));
  }
  out.resize(n);
  return out;
}

TrigPolynomial sample_eigenfunction(const EigenspaceBasis& basis, std::uint64_t seed) {
  const auto a = gaussian_coefficients(basis.dim(), seed);
  TrigPolynomial f = combine(basis, a);
  const int n = std::max(64, 16 * f.max_abs_wavenumber());
  const double sup = f.sup_norm_estimate(n);
  if (sup > 0.0) f *= 1.0 / sup;
  return f;
}

std::string to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::Min: return "min";
    case CriticalKind::Saddle: return "saddle";
    case CriticalKind::Max: return "max";
    case CriticalKind::Degenerate: return "degenerate";
  }
  return "degenerate";
}

int MorseAudit::count(CriticalKind kind) const {
  return static_cast<int>(std::count_if(critical_points.begin(), critical_points.end(),
                                        [kind](const CriticalPoint& c) { return c.kind == kind; }));
}

int MorseAudit::euler_characteristic() const {
  return count(CriticalKind::Min) - count(CriticalKind::Saddle) + count(CriticalKind::Max);
}

NewtonNonConvergence::NewtonNonConvergence(std::vector<std::pair<int, int>> cells, int grid_n)
    : CheckError([&] {
        std::ostringstream os;
        os << "Newton non-convergence in " << cells.size() << " seed cell(s) at gridN=" << grid_n
           << ":";
        for (std::size_t i = 0; i < std::min<std::size_t>(cells.size(), 8); ++i)
          os << " (" << cells[i].first << "," << cells[i].second << ")";
        os << "; try a larger gridN";
        return os.str();
      }()),
      cells_(std::move(cells)) {}

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double torus_distance(double x1, double y1, double x2, double y2) {
  auto d = [](double a, double b) {
    const double t = std::abs(wrap_angle(a - b));
    return std::min(t, kTwoPi - t);
  };
  return std::hypot(d(x1, x2), d(y1, y2));
}

namespace {

/// Damped Newton on grad f = 0 with a pseudo-inverse for singular Hessians.
constexpr int kMaxSubdivision = 10;
constexpr int kNewtonDepth = 1;

bool newton_critical_point(const TrigPolynomial& f, double& x, double& y, double grad_tol) {
  auto grad_norm = [](const Jet& j) { return std::hypot(j.fx, j.fy); };
  Jet j = f.jet(x, y);
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    double g = grad_norm(j);
    if (g <= grad_tol) {
      // Two polishing steps, kept only if they do not increase the residual.
      for (int p = 0; p < 2; ++p) {
        Eigen::Matrix2d hess;
        hess << j.fxx, j.fxy, j.fxy, j.fyy;
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(hess, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-10);
        const Eigen::Vector2d step = svd.solve(Eigen::Vector2d(j.fx, j.fy));
        const Jet jn = f.jet(x - step[0], y - step[1]);
        if (grad_norm(jn) > g) break;
        x -= step[0];
        y -= step[1];
        j = jn;
        g = grad_norm(j);
      }
      return true;
    }
    Eigen::Matrix2d hess;
    hess << j.fxx, j.fxy, j.fxy, j.fyy;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(hess, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-10);
    Eigen::Vector2d step = svd.solve(Eigen::Vector2d(j.fx, j.fy));
    if (!step.allFinite()) return false;
    // Backtrack on |grad f|.
    double t = 1.0;
    Jet jn = f.jet(x - step[0], y - step[1]);
    while (grad_norm(jn) > g && t > 1e-4) {
      t *= 0.5;
      jn = f.jet(x - t * step[0], y - t * step[1]);
    }
    x -= t * step[0];
    y -= t * step[1];
    j = jn;
  }
  return grad_norm(j) <= grad_tol;
}

}  // namespace

MorseAudit morse_audit(const TrigPolynomial& f, int grid_n, double tol) {
  if (grid_n < 32) throw SpecError("morse audit requires gridN >= 32");
  if (!(tol > 0.0)) throw SpecError("morse audit tolerance must be positive");

  MorseAudit audit;
  audit.grid_n = grid_n;
  audit.tol = tol;
  double grad_scale = 0.0, hess_scale = 0.0;
  for (const auto& [m, a] : f.terms()) {
    grad_scale += std::abs(a) * std::sqrt(static_cast<double>(m.norm_sq()));
    hess_scale += std::abs(a) * m.norm_sq();
  }
  audit.hessian_tol = tol * std::max(hess_scale * hess_scale, 1e-300);
  audit.value_tol = tol * std::max(f.l1_norm(), 1e-300);
  const double grad_tol = kNewtonTol * std::max(1.0, grad_scale);

  // Bounds on the third derivatives: on a square of half-width w around c,
  // |fx(p) - fx(c) - grad fx(c).(p - c)| <= mx w^2, likewise for fy.
  double mx = 0.0, my = 0.0, m3 = 0.0;  // m3 bounds the Hessian's Lipschitz constant
  for (const auto& [m, a] : f.terms()) {
    const double k2 = static_cast<double>(m.norm_sq());
    mx += std::abs(a) * std::abs(m.k1) * k2;
    my += std::abs(a) * std::abs(m.k2) * k2;
    m3 += std::abs(a) * k2 * std::sqrt(k2);
  }

  const double h = kTwoPi / grid_n;
  // Converged roots are accurate far below this; distinct critical points can
  // sit much closer than a grid cell.
  const double dedup = 1e-6;
  std::vector<std::pair<int, int>> failed;
  auto record = [&](double x, double y) {
    x = wrap_angle(x);
    y = wrap_angle(y);
    const bool seen = std::any_of(audit.critical_points.begin(), audit.critical_points.end(),
                                  [&](const CriticalPoint& c) {
                                    return torus_distance(c.x, c.y, x, y) < dedup;
                                  });
    if (seen) return;
    const Jet jt = f.jet(x, y);
    CriticalPoint cp{x, y, jt.f, jt.hessian_det(), jt.fxx, jt.fxy, jt.fyy, CriticalKind::Degenerate};
    if (std::abs(cp.hessian_det) > audit.hessian_tol) {
      if (cp.hessian_det < 0.0) cp.kind = CriticalKind::Saddle;
      else cp.kind = jt.fxx + jt.fyy > 0.0 ? CriticalKind::Min : CriticalKind::Max;
    }
    audit.critical_points.push_back(cp);
  };

  // Each grid cell is subdivided until every piece is either excluded by a
  // Taylor bound or provably holds at most the Newton root found from it.
  // Only pieces that reach the last level without a root count as failures.
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      bool cell_failed = false;
      std::vector<std::tuple<double, double, double, int>> stack{{i * h, j * h, h, 0}};
      while (!stack.empty()) {
        const auto [x0, y0, size, depth] = stack.back();
        stack.pop_back();
        const double xc = x0 + 0.5 * size, yc = y0 + 0.5 * size;
        const double w = 0.5 * size;
        const Jet jc = f.jet(xc, yc);
        if (std::abs(jc.fx) > (std::abs(jc.fxx) + std::abs(jc.fxy)) * w + mx * w * w ||
            std::abs(jc.fy) > (std::abs(jc.fxy) + std::abs(jc.fyy)) * w + my * w * w)
          continue;
        // Preconditioned test: on the piece grad f = g + H (p - c) + R with
        // |R| <= |(mx, my)| w^2, so a zero lies within |R| / sigma_min of c - H^-1 g.
        Eigen::Matrix2d hess;
        hess << jc.fxx, jc.fxy, jc.fxy, jc.fyy;
        const Eigen::JacobiSVD<Eigen::Matrix2d> svd(hess, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::Vector2d sv = svd.singularValues();
        if (sv[1] > 0.0) {
          const Eigen::Vector2d n = -svd.solve(Eigen::Vector2d(jc.fx, jc.fy));
          const double rho = std::hypot(mx, my) * w * w / sv[1];
          if (std::abs(n[0]) > w + rho || std::abs(n[1]) > w + rho) continue;
        }
        double x = xc, y = yc;
        bool converged = false;
        if (depth >= kNewtonDepth && newton_critical_point(f, x, y, grad_tol)) {
          converged = true;
          record(x, y);
          // A degenerate root already decides the audit; refining around a
          // critical curve would only multiply pieces.
          if (std::abs(f.jet(x, y).hessian_det()) <= audit.hessian_tol) continue;
          // If the Hessian stays nonsingular on a disc around the centre that
          // covers the piece and the root, grad f is injective there and the
          // root is the only critical point the piece can hold.
          const double reach = std::max(w * std::numbers::sqrt2, std::hypot(x - xc, y - yc));
          if (sv[1] > m3 * reach) continue;
        }
        if (depth == kMaxSubdivision) {
          cell_failed = cell_failed || !converged;
          continue;
        }
        const double half = 0.5 * size;
        for (int q = 0; q < 4; ++q)
          stack.emplace_back(x0 + (q & 1) * half, y0 + (q >> 1) * half, half, depth + 1);
      }
      if (cell_failed) failed.emplace_back(i, j);
    }
  }
  if (!failed.empty()) throw NewtonNonConvergence(std::move(failed), grid_n);

  std::sort(audit.critical_points.begin(), audit.critical_points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              return std::tie(a.x, a.y) < std::tie(b.x, b.y);
            });
  audit.min_abs_critical_value = std::numeric_limits<double>::infinity();
  audit.min_abs_hessian_det = std::numeric_limits<double>::infinity();
  for (const auto& c : audit.critical_points) {
    audit.min_abs_critical_value = std::min(audit.min_abs_critical_value, std::abs(c.value));
    audit.min_abs_hessian_det = std::min(audit.min_abs_hessian_det, std::abs(c.hessian_det));
  }
  if (audit.critical_points.empty()) {
    audit.min_abs_critical_value = 0.0;
    audit.min_abs_hessian_det = 0.0;
  }
  audit.is_morse = !audit.critical_points.empty() && audit.min_abs_hessian_det > audit.hessian_tol;
  audit.zero_set_regular =
      !audit.critical_points.empty() && audit.min_abs_critical_value > audit.value_tol;
  return audit;
}

}  // namespace bbeltrami
