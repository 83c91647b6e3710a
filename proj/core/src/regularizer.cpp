#include "fcd/regularizer.hpp"

#include <cmath>
#include <stdexcept>

namespace fcd {

SeparableRegularizer SeparableRegularizer::zero() {
  return SeparableRegularizer(RegKind::Zero, 0.0, 0.0);
}

SeparableRegularizer SeparableRegularizer::l1(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("l1 weight must be positive");
  return SeparableRegularizer(RegKind::L1, c, 0.0);
}

SeparableRegularizer SeparableRegularizer::squared_l2(double w) {
  if (!(w > 0.0)) throw std::invalid_argument("l2 weight must be positive");
  return SeparableRegularizer(RegKind::SquaredL2, 0.0, w);
}

SeparableRegularizer SeparableRegularizer::elastic_net(double c1, double c2) {
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw std::invalid_argument("elastic net weights must be positive");
  return SeparableRegularizer(RegKind::ElasticNet, c1, c2);
}

double SeparableRegularizer::value_coordinate(double u) const {
  switch (kind_) {
    case RegKind::Zero: return 0.0;
    case RegKind::L1: return c1_ * std::abs(u);
    case RegKind::SquaredL2: return 0.5 * c2_ * u * u;
    case RegKind::ElasticNet: return c1_ * std::abs(u) + 0.5 * c2_ * u * u;
  }
  return 0.0;
}

double SeparableRegularizer::value_subset(const Vec& xs) const {
  if (kind_ == RegKind::Zero) return 0.0;
  double s = 0.0;
  for (double u : xs) s += value_coordinate(u);
  return s;
}

double SeparableRegularizer::prox_coordinate(double z, double h) const {
  if (!(h > 0.0)) throw std::invalid_argument("prox curvature weight must be positive");
  switch (kind_) {
    case RegKind::Zero: return z;
    case RegKind::L1: return soft_threshold(z, c1_ / h);
    case RegKind::SquaredL2: return h * z / (h + c2_);
    case RegKind::ElasticNet: return soft_threshold(h * z, c1_) / (h + c2_);
  }
  return z;
}

double SeparableRegularizer::conjugate_prox_coordinate(double z) const {
  return z - prox_coordinate(z, 1.0);
}

Vec SeparableRegularizer::conjugate_prox(const Vec& z) const {
  Vec out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = conjugate_prox_coordinate(z[i]);
  return out;
}

std::pair<double, double> SeparableRegularizer::subdifferential(double point) const {
  switch (kind_) {
    case RegKind::Zero:
      return {0.0, 0.0};
    case RegKind::L1:
      if (point > 0.0) return {c1_, c1_};
      if (point < 0.0) return {-c1_, -c1_};
      return {-c1_, c1_};
    case RegKind::SquaredL2:
      return {c2_ * point, c2_ * point};
    case RegKind::ElasticNet: {
      const double smooth = c2_ * point;
      if (point > 0.0) return {smooth + c1_, smooth + c1_};
      if (point < 0.0) return {smooth - c1_, smooth - c1_};
      return {-c1_, c1_};
    }
  }
  return {0.0, 0.0};
}

double SeparableRegularizer::subdifferential_project(double point, double target) const {
  const auto [lo, hi] = subdifferential(point);
  if (target < lo) return lo;
  if (target > hi) return hi;
  return target;
}

}  // namespace fcd
