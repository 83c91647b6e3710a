#include "fcd/sparse_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace fcd {

SparseDesignMatrix::SparseDesignMatrix(int rows, int cols, std::vector<int> row_ptr,
                                       std::vector<int> col_idx,
                                       std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0) throw std::invalid_argument("negative matrix shape");
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1)
    throw std::invalid_argument("row_ptr size mismatch");
  if (col_idx_.size() != values_.size())
    throw std::invalid_argument("index/value length mismatch");
  if (row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<int>(values_.size()))
    throw std::invalid_argument("stored nonzero count does not match header");
  for (int j = 0; j < rows_; ++j) {
    if (row_ptr_[j + 1] < row_ptr_[j]) throw std::invalid_argument("row_ptr not monotone");
    for (int k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_)
        throw std::invalid_argument("column index out of range");
      if (k > row_ptr_[j] && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("column indices within a row must be strictly increasing");
    }
  }
  build_column_view();
}

void SparseDesignMatrix::build_column_view() {
  col_ptr_.assign(static_cast<std::size_t>(cols_) + 1, 0);
  row_idx_.resize(values_.size());
  col_values_.resize(values_.size());
  for (int c : col_idx_) ++col_ptr_[static_cast<std::size_t>(c) + 1];
  for (int i = 0; i < cols_; ++i) col_ptr_[i + 1] += col_ptr_[i];
  std::vector<int> cursor(col_ptr_.begin(), col_ptr_.end() - 1);
  for (int j = 0; j < rows_; ++j) {
    for (int k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k) {
      const int c = col_idx_[k];
      row_idx_[cursor[c]] = j;
      col_values_[cursor[c]] = values_[k];
      ++cursor[c];
    }
  }
}

std::vector<double> SparseDesignMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
  for (int j = 0; j < rows_; ++j) {
    double s = 0.0;
    for (int k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k)
      s += values_[k] * x[static_cast<std::size_t>(col_idx_[k])];
    y[static_cast<std::size_t>(j)] = s;
  }
  return y;
}

double SparseDesignMatrix::col_sq_norm(int i) const {
  double s = 0.0;
  for (int k = col_ptr_[i]; k < col_ptr_[i + 1]; ++k)
    s += col_values_[k] * col_values_[k];
  return s;
}

SparseDesignMatrix SparseDesignMatrix::from_dense(const std::vector<double>& values,
                                                  int rows, int cols, double drop_tol) {
  std::vector<int> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> vals;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      const double v = values[static_cast<std::size_t>(j) * cols + i];
      if (std::abs(v) > drop_tol) {
        col_idx.push_back(i);
        vals.push_back(v);
      }
    }
    row_ptr[j + 1] = static_cast<int>(vals.size());
  }
  return SparseDesignMatrix(rows, cols, std::move(row_ptr), std::move(col_idx),
                            std::move(vals));
}

std::vector<double> SparseDesignMatrix::to_dense() const {
  std::vector<double> out(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int j = 0; j < rows_; ++j)
    for (int k = row_ptr_[j]; k < row_ptr_[j + 1]; ++k)
      out[static_cast<std::size_t>(j) * cols_ + col_idx_[k]] = values_[k];
  return out;
}

}  // namespace fcd
