#pragma once

#include <compare>
#include <map>
#include <string>

namespace bbeltrami {

enum class Phase { Cos, Sin };

std::string to_string(Phase phase);
Phase phase_from_string(const std::string& name);

/// Lattice wave vector with a phase.  Canonical modes have k1 > 0, or
/// k1 == 0 and k2 >= 0; (0,0,sin) is never a valid mode.
struct Mode {
  int k1 = 0;
  int k2 = 0;
  Phase phase = Phase::Cos;

  int norm_sq() const { return k1 * k1 + k2 * k2; }
  auto operator<=>(const Mode&) const = default;
};

/// Value and derivatives up to second order at one point.
struct Jet {
  double f = 0.0;
  double fx = 0.0;
  double fy = 0.0;
  double fxx = 0.0;
  double fxy = 0.0;
  double fyy = 0.0;

  double hessian_det() const { return fxx * fyy - fxy * fxy; }
};

/// Real trigonometric polynomial on the torus (R / 2pi Z)^2:
///   f(x, y) = sum a_m * cos(k1 x + k2 y)  or  a_m * sin(k1 x + k2 y).
///
/// Terms are kept canonical (see Mode), so two polynomials describing the
/// same function have identical term maps.  Zero amplitudes are dropped.
/// Derivatives are exact and stay inside the same set of wave vectors.
class TrigPolynomial {
 public:
  using TermMap = std::map<Mode, double>;

  TrigPolynomial() = default;

  static TrigPolynomial constant(double value);
  static TrigPolynomial single(int k1, int k2, Phase phase, double amp = 1.0);

  /// Adds amp * phase(k1 x + k2 y), folding (-k1,-k2) onto its canonical
  /// representative.  Accumulates onto an existing term.
  TrigPolynomial& add_term(int k1, int k2, Phase phase, double amp);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  double operator()(double x, double y) const;
  Jet jet(double x, double y) const;

  TrigPolynomial dx() const { return derivative(1, 0); }
  TrigPolynomial dy() const { return derivative(0, 1); }
  TrigPolynomial derivative(int order_x, int order_y) const;
  TrigPolynomial laplacian() const;

  /// g(x, y) = f(x + a, y + b).
  TrigPolynomial translated(double a, double b) const;

  /// Sum of |amplitudes|; an upper bound for the sup norm.
  double l1_norm() const;
  /// Grid estimate of max |f| on an n x n grid.
  double sup_norm_estimate(int n) const;
  int max_abs_wavenumber() const;

  /// True when every mode has k1^2 + k2^2 == mu (the constant mode is
  /// allowed only for mu == 0).
  bool on_shell(int mu) const;

  TrigPolynomial& operator+=(const TrigPolynomial& other);
  TrigPolynomial& operator-=(const TrigPolynomial& other);
  TrigPolynomial& operator*=(double s);

  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
  friend TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b) { return a -= b; }
  friend TrigPolynomial operator*(TrigPolynomial a, double s) { return a *= s; }
  friend TrigPolynomial operator*(double s, TrigPolynomial a) { return a *= s; }
  friend TrigPolynomial operator-(TrigPolynomial a) { return a *= -1.0; }
  friend TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b);

  friend bool operator==(const TrigPolynomial& a, const TrigPolynomial& b) {
    return a.terms_ == b.terms_;
  }

  /// Human-readable form, e.g. "2*sin(y) + 1*cos(x)".
  std::string str() const;

 private:
  TermMap terms_;
};

}  // namespace bbeltrami
