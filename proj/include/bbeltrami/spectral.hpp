#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bbeltrami/errors.hpp"
#include "bbeltrami/trig_polynomial.hpp"

namespace bbeltrami {

/// Eigenspace of the flat Laplacian on T^2 for eigenvalue mu = |k|^2.
struct EigenspaceBasis {
  int mu = 0;
  /// One representative per +-k class: k1 > 0, or k1 == 0 and k2 > 0;
  /// sorted lexicographically.
  std::vector<std::pair<int, int>> modes;
  /// cos(k.x), sin(k.x) for each mode, in that order.
  std::vector<TrigPolynomial> basis;

  std::size_t dim() const { return basis.size(); }
};

/// Thrown when mu is not a sum of two squares.
class EmptyEigenspaceError : public SpecError {
 public:
  explicit EmptyEigenspaceError(int mu);
  int mu() const { return mu_; }

 private:
  int mu_;
};

EigenspaceBasis enumerate_eigenspace(int mu);

/// sum a_i f_i for the given coefficients (size must equal dim).
TrigPolynomial combine(const EigenspaceBasis& basis, std::span<const double> coeffs);

/// Standard-normal coefficients from a seeded 64-bit Mersenne twister
/// (Box-Muller, so the stream is identical on every platform).
std::vector<double> gaussian_coefficients(std::size_t n, std::uint64_t seed);

/// Random element of the eigenspace, scaled to unit sup-norm estimate.
TrigPolynomial sample_eigenfunction(const EigenspaceBasis& basis, std::uint64_t seed);

enum class CriticalKind { Min, Saddle, Max, Degenerate };
std::string to_string(CriticalKind kind);

struct CriticalPoint {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
  double hessian_det = 0.0;
  double hxx = 0.0, hxy = 0.0, hyy = 0.0;
  CriticalKind kind = CriticalKind::Degenerate;
};

struct MorseAudit {
  std::vector<CriticalPoint> critical_points;
  bool is_morse = false;
  bool zero_set_regular = false;
  double min_abs_critical_value = 0.0;
  double min_abs_hessian_det = 0.0;
  /// Effective thresholds: tol scaled by (sum |a| |k|^2)^2 and sum |a|.
  double hessian_tol = 0.0;
  double value_tol = 0.0;
  int grid_n = 0;
  double tol = 0.0;

  int count(CriticalKind kind) const;
  /// #min - #saddle + #max; 0 on the torus for Morse functions.
  int euler_characteristic() const;
};

/// Thrown when Newton seeds fail to converge; lists the offending cells.
class NewtonNonConvergence : public CheckError {
 public:
  NewtonNonConvergence(std::vector<std::pair<int, int>> cells, int grid_n);
  const std::vector<std::pair<int, int>>& cells() const { return cells_; }

 private:
  std::vector<std::pair<int, int>> cells_;
};

/// Critical points of f from Newton iterations seeded in every grid cell
/// where both gradient components change sign.
MorseAudit morse_audit(const TrigPolynomial& f, int grid_n = 64, double tol = 1e-8);

/// Periodic distance on T^2.
double torus_distance(double x1, double y1, double x2, double y2);
/// Wraps an angle into [0, 2pi).
double wrap_angle(double a);

}  // namespace bbeltrami
