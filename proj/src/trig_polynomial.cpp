#include "bbeltrami/trig_polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "bbeltrami/errors.hpp"

namespace bbeltrami {

std::string to_string(Phase phase) { return phase == Phase::Cos ? "cos" : "sin"; }

Phase phase_from_string(const std::string& name) {
  if (name == "cos") return Phase::Cos;
  if (name == "sin") return Phase::Sin;
  throw SpecError("unknown phase '" + name + "' (expected \"cos\" or \"sin\")");
}

TrigPolynomial TrigPolynomial::constant(double value) {
  TrigPolynomial p;
  p.add_term(0, 0, Phase::Cos, value);
  return p;
}

TrigPolynomial TrigPolynomial::single(int k1, int k2, Phase phase, double amp) {
  TrigPolynomial p;
  p.add_term(k1, k2, phase, amp);
  return p;
}

TrigPolynomial& TrigPolynomial::add_term(int k1, int k2, Phase phase, double amp) {
  if (k1 < 0 || (k1 == 0 && k2 < 0)) {
    k1 = -k1;
    k2 = -k2;
    if (phase == Phase::Sin) amp = -amp;
  }
  if (k1 == 0 && k2 == 0 && phase == Phase::Sin) return *this;
  if (amp == 0.0) return *this;
  const Mode mode{k1, k2, phase};
  auto it = terms_.find(mode);
  if (it == terms_.end()) {
    terms_.emplace(mode, amp);
  } else {
    it->second += amp;
    if (it->second == 0.0) terms_.erase(it);
  }
  return *this;
}

double TrigPolynomial::operator()(double x, double y) const {
  double sum = 0.0;
  for (const auto& [m, a] : terms_) {
    const double theta = m.k1 * x + m.k2 * y;
    sum += a * (m.phase == Phase::Cos ? std::cos(theta) : std::sin(theta));
  }
  return sum;
}

Jet TrigPolynomial::jet(double x, double y) const {
  Jet j;
  for (const auto& [m, a] : terms_) {
    const double theta = m.k1 * x + m.k2 * y;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // f = a*u with u in {cos, sin}; u' = v * k, u'' = -u * k k.
    const double u = m.phase == Phase::Cos ? c : s;
    const double v = m.phase == Phase::Cos ? -s : c;
    j.f += a * u;
    j.fx += a * v * m.k1;
    j.fy += a * v * m.k2;
    j.fxx -= a * u * m.k1 * m.k1;
    j.fxy -= a * u * m.k1 * m.k2;
    j.fyy -= a * u * m.k2 * m.k2;
  }
  return j;
}

TrigPolynomial TrigPolynomial::derivative(int order_x, int order_y) const {
  TrigPolynomial out;
  const int n = order_x + order_y;
  for (const auto& [m, a] : terms_) {
    double factor = a;
    for (int i = 0; i < order_x; ++i) factor *= m.k1;
    for (int i = 0; i < order_y; ++i) factor *= m.k2;
    if (factor == 0.0) continue;
    // Each derivative rotates cos -> -sin -> -cos -> sin -> cos.
    Phase phase = m.phase;
    double sign = 1.0;
    for (int i = 0; i < n % 4; ++i) {
      if (phase == Phase::Cos) {
        phase = Phase::Sin;
        sign = -sign;
      } else {
        phase = Phase::Cos;
      }
    }
    out.add_term(m.k1, m.k2, phase, sign * factor);
  }
  return out;
}

TrigPolynomial TrigPolynomial::laplacian() const {
  TrigPolynomial out;
  for (const auto& [m, a] : terms_) out.add_term(m.k1, m.k2, m.phase, -a * m.norm_sq());
  return out;
}

TrigPolynomial TrigPolynomial::translated(double a, double b) const {
  TrigPolynomial out;
  for (const auto& [m, amp] : terms_) {
    const double shift = m.k1 * a + m.k2 * b;
    const double c = std::cos(shift);
    const double s = std::sin(shift);
    if (m.phase == Phase::Cos) {
      // cos(t + d) = cos t cos d - sin t sin d
      out.add_term(m.k1, m.k2, Phase::Cos, amp * c);
      out.add_term(m.k1, m.k2, Phase::Sin, -amp * s);
    } else {
      // sin(t + d) = sin t cos d + cos t sin d
      out.add_term(m.k1, m.k2, Phase::Sin, amp * c);
      out.add_term(m.k1, m.k2, Phase::Cos, amp * s);
    }
  }
  return out;
}

double TrigPolynomial::l1_norm() const {
  double s = 0.0;
  for (const auto& [m, a] : terms_) s += std::abs(a);
  return s;
}

double TrigPolynomial::sup_norm_estimate(int n) const {
  const double h = 2.0 * std::numbers::pi / n;
  double best = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) best = std::max(best, std::abs((*this)(i * h, j * h)));
  return best;
}

int TrigPolynomial::max_abs_wavenumber() const {
  int k = 0;
  for (const auto& [m, a] : terms_) k = std::max({k, std::abs(m.k1), std::abs(m.k2)});
  return k;
}

bool TrigPolynomial::on_shell(int mu) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [mu](const auto& kv) { return kv.first.norm_sq() == mu; });
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other) {
  for (const auto& [m, a] : other.terms_) add_term(m.k1, m.k2, m.phase, a);
  return *this;
}

TrigPolynomial& TrigPolynomial::operator-=(const TrigPolynomial& other) {
  for (const auto& [m, a] : other.terms_) add_term(m.k1, m.k2, m.phase, -a);
  return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, a] : terms_) a *= s;
  return *this;
}

TrigPolynomial operator*(const TrigPolynomial& a, const TrigPolynomial& b) {
  TrigPolynomial out;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      const double h = 0.5 * ca * cb;
      const int p1 = ma.k1 + mb.k1, p2 = ma.k2 + mb.k2;  // A + B
      const int d1 = ma.k1 - mb.k1, d2 = ma.k2 - mb.k2;  // A - B
      if (ma.phase == Phase::Cos && mb.phase == Phase::Cos) {
        out.add_term(d1, d2, Phase::Cos, h);
        out.add_term(p1, p2, Phase::Cos, h);
      } else if (ma.phase == Phase::Sin && mb.phase == Phase::Sin) {
        out.add_term(d1, d2, Phase::Cos, h);
        out.add_term(p1, p2, Phase::Cos, -h);
      } else if (ma.phase == Phase::Sin) {
        // sin A cos B
        out.add_term(p1, p2, Phase::Sin, h);
        out.add_term(d1, d2, Phase::Sin, h);
      } else {
        // cos A sin B
        out.add_term(p1, p2, Phase::Sin, h);
        out.add_term(d1, d2, Phase::Sin, -h);
      }
    }
  }
  return out;
}

namespace {

std::string argument(int k1, int k2) {
  std::ostringstream os;
  auto coef = [](int k, const char* var) {
    if (k == 1) return std::string(var);
    if (k == -1) return "-" + std::string(var);
    return std::to_string(k) + var;
  };
  if (k1 != 0) os << coef(k1, "x");
  if (k2 != 0) {
    if (k1 != 0) os << (k2 > 0 ? "+" : "");
    os << coef(k2, "y");
  }
  return os.str();
}

}  // namespace

std::string TrigPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [m, a] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << a;
    if (m.k1 != 0 || m.k2 != 0) os << "*" << to_string(m.phase) << "(" << argument(m.k1, m.k2) << ")";
  }
  return os.str();
}

}  // namespace bbeltrami
