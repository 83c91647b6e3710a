#include "fcd/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fcd/rng.hpp"

namespace fcd {

namespace {

// Apply a Givens rotation to a pair of dense vectors viewed through strided
// access; returns the change in the nonzero count.
long rotate_pair(std::vector<double>& a, std::size_t off1, std::size_t off2,
                 std::size_t stride, std::size_t count, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  long delta = 0;
  for (std::size_t k = 0; k < count; ++k) {
    double& u = a[off1 + k * stride];
    double& v = a[off2 + k * stride];
    const int before = (u != 0.0) + (v != 0.0);
    const double nu = c * u - s * v;
    const double nv = s * u + c * v;
    u = nu;
    v = nv;
    delta += (u != 0.0) + (v != 0.0) - before;
  }
  return delta;
}

}  // namespace

SyntheticQuadratic generate_quadratic(const QuadraticRecipe& recipe) {
  const int m = recipe.m, n = recipe.n;
  if (m < 1 || n < 1) throw std::invalid_argument("quadratic recipe: empty shape");
  if (recipe.condition < 1.0) throw std::invalid_argument("quadratic recipe: condition < 1");
  if (recipe.sparsity <= 0.0 || recipe.sparsity > 1.0)
    throw std::invalid_argument("quadratic recipe: sparsity outside (0,1]");

  Rng rng(recipe.seed);
  const int r = std::min(m, n);
  const double sigma_min = 1.0 / std::sqrt(recipe.condition);

  // Row-major dense working array, diagonal spectrum first.
  std::vector<double> dense(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < r; ++i) {
    double frac = r > 1 ? static_cast<double>(i) / static_cast<double>(r - 1) : 0.0;
    double sigma = std::pow(sigma_min, frac);  // geometric from 1 down to sigma_min
    dense[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
          static_cast<std::size_t>(i)] = sigma;
  }
  long nnz = r;
  const long target = static_cast<long>(recipe.sparsity *
                                        static_cast<double>(m) * static_cast<double>(n));

  const auto un = static_cast<std::size_t>(n);
  long guard = 0;
  const long guard_cap = 64L * (static_cast<long>(m) + static_cast<long>(n)) + 1024;
  while (nnz < target && guard++ < guard_cap) {
    double angle = rng.uniform(0.2, 1.4);
    if (n > 1) {
      int i = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
      int j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;
      nnz += rotate_pair(dense, static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                         un, static_cast<std::size_t>(m), angle);
    }
    if (nnz >= target || m <= 1) continue;
    int i = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(m)));
    int j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(m - 1)));
    if (j >= i) ++j;
    nnz += rotate_pair(dense, static_cast<std::size_t>(i) * un,
                       static_cast<std::size_t>(j) * un, 1, un, angle);
  }

  SyntheticQuadratic out{SparseDesignMatrix::from_dense(dense, m, n), {}, {}, 0.0};
  out.x_star.resize(un);
  for (auto& e : out.x_star) e = rng.normal();
  out.b = out.A.multiply(out.x_star);
  out.mu_f = m >= n ? sigma_min * sigma_min : 0.0;
  return out;
}

SyntheticLogistic generate_logistic(const LogisticRecipe& recipe) {
  const int m = recipe.m, n = recipe.n;
  if (m < 1 || n < 1) throw std::invalid_argument("logistic recipe: empty shape");
  if (recipe.margin < 0.0) throw std::invalid_argument("logistic recipe: negative margin");
  if (recipe.sparsity <= 0.0 || recipe.sparsity > 1.0)
    throw std::invalid_argument("logistic recipe: sparsity outside (0,1]");

  Rng rng(recipe.seed);
  Vec w(static_cast<std::size_t>(n));
  for (auto& e : w) e = rng.normal();
  double nw = norm2(w);
  for (auto& e : w) e /= nw;

  const int row_nnz = std::max(1, static_cast<int>(std::lround(recipe.sparsity * n)));
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);

  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<double> values;
  Vec labels(static_cast<std::size_t>(m));

  std::vector<int> cols(static_cast<std::size_t>(row_nnz));
  std::vector<double> vals(static_cast<std::size_t>(row_nnz));
  for (int j = 0; j < m; ++j) {
    double dotp = 0.0;
    for (int attempt = 0;; ++attempt) {
      for (int k = 0; k < row_nnz; ++k) {
        auto pick = k + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n - k)));
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick)]);
        cols[static_cast<std::size_t>(k)] = pool[static_cast<std::size_t>(k)];
      }
      std::sort(cols.begin(), cols.end());
      dotp = 0.0;
      for (int k = 0; k < row_nnz; ++k) {
        vals[static_cast<std::size_t>(k)] = rng.normal();
        dotp += vals[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(cols[static_cast<std::size_t>(k)])];
      }
      if (std::abs(dotp) >= recipe.margin) break;
      if (attempt >= 200)
        throw std::runtime_error("logistic recipe: margin unreachable under the sparsity pattern");
    }
    labels[static_cast<std::size_t>(j)] = dotp >= 0.0 ? 1.0 : -1.0;
    col_idx.insert(col_idx.end(), cols.begin(), cols.end());
    values.insert(values.end(), vals.begin(), vals.end());
    row_ptr.push_back(static_cast<int>(col_idx.size()));
  }

  SyntheticLogistic out{SparseDesignMatrix(m, n, std::move(row_ptr), std::move(col_idx),
                                           std::move(values)),
                        std::move(labels), std::move(w)};
  return out;
}

}  // namespace fcd
