#pragma once

#include <cstddef>
#include <vector>

namespace fcd {

// Design matrix in compressed row storage with a column view built at
// construction. Rows are samples, columns are coordinates; coordinate work
// (partial gradients, Lipschitz constants) runs over the column view.
class SparseDesignMatrix {
 public:
  SparseDesignMatrix() = default;
  SparseDesignMatrix(int rows, int cols, std::vector<int> row_ptr,
                     std::vector<int> col_idx, std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  // Row access (CSR).
  struct Entry {
    int index;
    double value;
  };
  class Span {
   public:
    Span(const int* idx, const double* val, int n) : idx_(idx), val_(val), n_(n) {}
    int size() const { return n_; }
    Entry operator[](int k) const { return {idx_[k], val_[k]}; }

    class Iterator {
     public:
      Iterator(const Span* s, int k) : s_(s), k_(k) {}
      Entry operator*() const { return (*s_)[k_]; }
      Iterator& operator++() { ++k_; return *this; }
      bool operator!=(const Iterator& o) const { return k_ != o.k_; }

     private:
      const Span* s_;
      int k_;
    };
    Iterator begin() const { return Iterator(this, 0); }
    Iterator end() const { return Iterator(this, n_); }

   private:
    const int* idx_;
    const double* val_;
    int n_;
  };

  Span row(int j) const {
    return Span(col_idx_.data() + row_ptr_[j], values_.data() + row_ptr_[j],
                row_ptr_[j + 1] - row_ptr_[j]);
  }
  Span col(int i) const {
    return Span(row_idx_.data() + col_ptr_[i], col_values_.data() + col_ptr_[i],
                col_ptr_[i + 1] - col_ptr_[i]);
  }

  // y = A x (dense x of length cols).
  std::vector<double> multiply(const std::vector<double>& x) const;

  // Squared Euclidean norm of column i.
  double col_sq_norm(int i) const;

  // Dense round trip, test and generator use.
  static SparseDesignMatrix from_dense(const std::vector<double>& values, int rows,
                                       int cols, double drop_tol = 0.0);
  std::vector<double> to_dense() const;

 private:
  void build_column_view();

  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_, col_idx_;
  std::vector<double> values_;
  // Column-compressed copy.
  std::vector<int> col_ptr_, row_idx_;
  std::vector<double> col_values_;
};

}  // namespace fcd
