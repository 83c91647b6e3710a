#pragma once

#include <cstdint>

#include "fcd/problem.hpp"

namespace fcd {

// Least-squares design with a prescribed spectrum: singular values are laid
// out geometrically to hit the requested condition number of A^T A, then the
// matrix is filled in by two-sided Givens rotations (which preserve the
// spectrum exactly) until the nonzero fraction reaches `sparsity`.
struct QuadraticRecipe {
  int n = 10;
  int m = 10;
  double condition = 1.0;  // cond(A^T A) = (sigma_max / sigma_min)^2
  double sparsity = 1.0;   // target nnz fraction, in (0, 1]
  std::uint64_t seed = 0;
};

struct SyntheticQuadratic {
  SparseDesignMatrix A;
  Vec b;        // A x_star, so x_star minimizes 1/2 ||Ax - b||^2 exactly
  Vec x_star;
  double mu_f;  // sigma_min^2 when m >= n, else 0
};

SyntheticQuadratic generate_quadratic(const QuadraticRecipe& recipe);

// Sparse Gaussian rows with labels from a planted unit separator; rows whose
// margin |a^T w| falls below `margin` are redrawn.
struct LogisticRecipe {
  int n = 10;
  int m = 10;
  double margin = 0.1;
  double sparsity = 1.0;
  std::uint64_t seed = 0;
};

struct SyntheticLogistic {
  SparseDesignMatrix A;
  Vec labels;  // in {-1, +1}
  Vec separator;
};

SyntheticLogistic generate_logistic(const LogisticRecipe& recipe);

}  // namespace fcd
