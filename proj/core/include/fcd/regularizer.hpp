#pragma once

#include <utility>

#include "fcd/subset.hpp"

namespace fcd {

enum class RegKind { Zero, L1, SquaredL2, ElasticNet };

// Coordinate-separable convex regularizer Psi(x) = sum_i Psi_i(x^i).
// All four variants admit a closed-form scalar prox and an interval-valued
// coordinate subdifferential, which is what the inexactness certificate
// projection needs.
class SeparableRegularizer {
 public:
  static SeparableRegularizer zero();
  static SeparableRegularizer l1(double c);
  static SeparableRegularizer squared_l2(double w);
  static SeparableRegularizer elastic_net(double c1, double c2);

  RegKind kind() const { return kind_; }
  double l1_weight() const { return c1_; }
  double l2_weight() const { return c2_; }

  // Strong convexity constant mu_Psi.
  double strong_convexity() const { return c2_; }

  double value_coordinate(double u) const;
  double value_subset(const Vec& xs) const;
  double value(const Vec& x) const { return value_subset(x); }

  // argmin_y Psi_i(y) + (h/2)(y - z)^2, h > 0.
  double prox_coordinate(double z, double h) const;

  // Componentwise prox of the conjugate with unit step, via Moreau:
  // prox_{Psi*}(z) = z - prox_{Psi}(z).
  double conjugate_prox_coordinate(double z) const;
  Vec conjugate_prox(const Vec& z) const;

  // Interval [lo, hi] of the coordinate subdifferential at `point`
  // (the set the certificate residual is projected onto).
  std::pair<double, double> subdifferential(double point) const;

  // Point of the subdifferential interval at `point` closest to `target`.
  double subdifferential_project(double point, double target) const;

 private:
  SeparableRegularizer(RegKind kind, double c1, double c2)
      : kind_(kind), c1_(c1), c2_(c2) {}

  RegKind kind_;
  double c1_ = 0.0;  // l1 weight
  double c2_ = 0.0;  // squared-l2 weight
};

inline double soft_threshold(double u, double v) {
  if (u > v) return u - v;
  if (u < -v) return u + v;
  return 0.0;
}

}  // namespace fcd
