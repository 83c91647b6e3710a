#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "fcd/problem.hpp"
#include "fcd/rng.hpp"

namespace testutil {

using fcd::Vec;

// Row-major dense matrix scratch type for oracles.
struct Dense {
  int rows = 0, cols = 0;
  std::vector<double> a;
  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

inline Dense random_dense(int rows, int cols, fcd::Rng& rng, double density = 1.0) {
  Dense d{rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0)};
  for (auto& v : d.a)
    if (rng.uniform() < density) v = rng.normal();
  return d;
}

inline Vec dense_matvec(const Dense& d, const Vec& x) {
  Vec y(static_cast<std::size_t>(d.rows), 0.0);
  for (int r = 0; r < d.rows; ++r)
    for (int c = 0; c < d.cols; ++c) y[static_cast<std::size_t>(r)] += d.at(r, c) * x[static_cast<std::size_t>(c)];
  return y;
}

// Central finite difference of a scalar function.
inline Vec fd_gradient(const std::function<double(const Vec&)>& f, Vec x,
                       double h = 1e-6) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations; oracle for
// spectra of small Gram matrices.
inline std::vector<double> jacobi_eigenvalues(Dense s, int sweeps = 60) {
  const int n = s.rows;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += s.at(p, q) * s.at(p, q);
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = s.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double app = s.at(p, p), aqq = s.at(q, q);
        const double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
        const double c = std::cos(phi), si = std::sin(phi);
        for (int k = 0; k < n; ++k) {
          const double akp = s.at(k, p), akq = s.at(k, q);
          s.at(k, p) = c * akp - si * akq;
          s.at(k, q) = si * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = s.at(p, k), aqk = s.at(q, k);
          s.at(p, k) = c * apk - si * aqk;
          s.at(q, k) = si * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) eig[static_cast<std::size_t>(i)] = s.at(i, i);
  return eig;
}

inline Dense gram(const Dense& a) {
  Dense g{a.cols, a.cols, std::vector<double>(static_cast<std::size_t>(a.cols) * a.cols, 0.0)};
  for (int i = 0; i < a.cols; ++i)
    for (int j = 0; j < a.cols; ++j) {
      double v = 0.0;
      for (int r = 0; r < a.rows; ++r) v += a.at(r, i) * a.at(r, j);
      g.at(i, j) = v;
    }
  return g;
}

// Scalar minimization oracle by golden-section search on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo,
                         double hi, int iters = 200) {
  const double phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - phi * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + phi * (b - a); f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace testutil
