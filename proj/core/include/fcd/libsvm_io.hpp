#pragma once

#include <iosfwd>
#include <string>

#include "fcd/sparse_matrix.hpp"
#include "fcd/subset.hpp"

namespace fcd {

struct LibsvmData {
  SparseDesignMatrix A;
  Vec labels;  // in {-1, +1}
};

// LIBSVM text format: `label idx:val idx:val ...` with 1-based, strictly
// increasing indices. Labels -1/0/1/+1 are accepted; 0 maps to -1, 1 to +1.
// `#` starts a comment. The column count is max index unless `min_cols`
// asks for more. Errors carry the 1-based line number.
LibsvmData parse_libsvm(std::istream& in, int min_cols = 0);
LibsvmData parse_libsvm_file(const std::string& path, int min_cols = 0);

void write_libsvm(std::ostream& out, const SparseDesignMatrix& A, const Vec& labels);
void write_libsvm_file(const std::string& path, const SparseDesignMatrix& A,
                       const Vec& labels);

}  // namespace fcd
