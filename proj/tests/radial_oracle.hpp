#pragma once

// Radial solution of the regularized p-Laplace equation on an annulus
// ri < |x| < ro with u(ri) = u0, u(ro) = u1. Radial symmetry reduces the
// equation to (u'^2 + eps)^((p-2)/2) u' = c / r; c is found by bisection so
// that the boundary values match, then u is tabulated by the trapezoid rule.
// Independent of the grid solver.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

class RadialOracle {
 public:
  RadialOracle(double p, double eps, double ri, double ro, double u0, double u1)
      : p_(p), eps_(eps), ri_(ri), ro_(ro), u0_(u0) {
    const double target = u1 - u0;
    double lo = 0.0, hi = 1.0;
    while (sign(target) * integral(sign(target) * hi, 4000) < std::abs(target)) hi *= 2;
    hi *= sign(target);
    if (hi < 0) std::swap(lo, hi);
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (integral(mid, 4000) < target ? lo : hi) = mid;
    }
    c_ = 0.5 * (lo + hi);
    const int m = 200000;
    table_.resize(m + 1);
    table_[0] = u0_;
    double prev = slope(ri_);
    for (int k = 1; k <= m; ++k) {
      const double s = slope(ri_ + (ro_ - ri_) * k / m);
      table_[k] = table_[k - 1] + 0.5 * (prev + s) * (ro_ - ri_) / m;
      prev = s;
    }
  }

  double operator()(double r) const {
    if (r < ri_ || r > ro_) throw std::out_of_range("radial oracle: r outside the annulus");
    const double t = (r - ri_) / (ro_ - ri_) * (table_.size() - 1);
    const std::size_t k = std::min(static_cast<std::size_t>(t), table_.size() - 2);
    const double w = t - k;
    return (1 - w) * table_[k] + w * table_[k + 1];
  }

  double flux_constant() const { return c_; }

 private:
  static double sign(double v) { return v < 0 ? -1.0 : 1.0; }

  double g(double s) const { return std::pow(s * s + eps_, 0.5 * (p_ - 2)) * s; }

  // u'(r) solving g(u') = c / r; g is odd and increasing.
  double slope(double r) const { return slope_for(c_, r); }

  double slope_for(double c, double r) const {
    const double t = std::abs(c) / r;
    if (t == 0) return 0;
    double hi = 1.0;
    while (g(hi) < t) hi *= 2;
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < t ? lo : hi) = mid;
    }
    return sign(c) * 0.5 * (lo + hi);
  }

  // Composite Simpson for the integral of u' over [ri, ro].
  double integral(double c, int m) const {
    const double h = (ro_ - ri_) / m;
    double sum = slope_for(c, ri_) + slope_for(c, ro_);
    for (int k = 1; k < m; ++k) sum += (k % 2 ? 4 : 2) * slope_for(c, ri_ + k * h);
    return sum * h / 3;
  }

  double p_, eps_, ri_, ro_, u0_;
  double c_ = 0.0;
  std::vector<double> table_;
};
