#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fcd {

using Vec = std::vector<double>;

// A sorted, duplicate-free set of coordinate indices: the unit of work per
// outer iteration. Gather/scatter by index stands in for U_S^T / U_S.
class CoordinateSubset {
 public:
  CoordinateSubset() = default;

  CoordinateSubset(std::vector<int> indices, int dimension)
      : indices_(std::move(indices)) {
    if (indices_.empty()) throw std::invalid_argument("empty coordinate subset");
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (indices_[i] < 0 || indices_[i] >= dimension)
        throw std::invalid_argument("subset index out of range");
      if (i > 0 && indices_[i] <= indices_[i - 1])
        throw std::invalid_argument("subset indices must be strictly increasing");
    }
  }

  int size() const { return static_cast<int>(indices_.size()); }
  int operator[](int i) const { return indices_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& indices() const { return indices_; }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  // x^S = U_S^T x.
  Vec gather(const Vec& x) const {
    Vec out(indices_.size());
    for (std::size_t i = 0; i < indices_.size(); ++i)
      out[i] = x[static_cast<std::size_t>(indices_[i])];
    return out;
  }

  // x += alpha * U_S t.
  void scatter_add(Vec& x, const Vec& t, double alpha = 1.0) const {
    for (std::size_t i = 0; i < indices_.size(); ++i)
      x[static_cast<std::size_t>(indices_[i])] += alpha * t[i];
  }

  static CoordinateSubset full(int dimension) {
    std::vector<int> idx(static_cast<std::size_t>(dimension));
    for (int i = 0; i < dimension; ++i) idx[static_cast<std::size_t>(i)] = i;
    return CoordinateSubset(std::move(idx), dimension);
  }

  bool operator==(const CoordinateSubset& o) const { return indices_ == o.indices_; }

 private:
  std::vector<int> indices_;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace fcd
