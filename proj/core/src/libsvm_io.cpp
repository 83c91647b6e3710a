#include "fcd/libsvm_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fcd {

namespace {

[[noreturn]] void fail(long line_no, const std::string& what) {
  throw std::runtime_error("libsvm line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

LibsvmData parse_libsvm(std::istream& in, int min_cols) {
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<double> values;
  Vec labels;
  int max_col = min_cols;  // columns = max 1-based index seen

  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream line(raw);
    std::string tok;
    if (!(line >> tok)) continue;  // blank or comment-only line

    double label;
    try {
      std::size_t used = 0;
      label = std::stod(tok, &used);
      if (used != tok.size()) fail(line_no, "malformed label '" + tok + "'");
    } catch (const std::logic_error&) {
      fail(line_no, "malformed label '" + tok + "'");
    }
    if (label == 0.0) label = -1.0;
    if (label != 1.0 && label != -1.0)
      fail(line_no, "label must be one of -1, 0, 1");
    labels.push_back(label);

    int prev = 0;  // 1-based; indices must strictly increase
    while (line >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        fail(line_no, "malformed feature '" + tok + "'");
      int idx;
      double val;
      try {
        std::size_t used = 0;
        idx = std::stoi(tok.substr(0, colon), &used);
        if (used != colon) fail(line_no, "malformed index in '" + tok + "'");
        val = std::stod(tok.substr(colon + 1), &used);
        if (used != tok.size() - colon - 1) fail(line_no, "malformed value in '" + tok + "'");
      } catch (const std::logic_error&) {
        fail(line_no, "malformed feature '" + tok + "'");
      }
      if (idx < 1) fail(line_no, "index " + std::to_string(idx) + " is not positive");
      if (idx <= prev)
        fail(line_no, "indices must strictly increase (saw " + std::to_string(idx) +
                          " after " + std::to_string(prev) + ")");
      prev = idx;
      max_col = std::max(max_col, idx);
      col_idx.push_back(idx - 1);
      values.push_back(val);
    }
    row_ptr.push_back(static_cast<int>(col_idx.size()));
  }

  LibsvmData out;
  out.A = SparseDesignMatrix(static_cast<int>(labels.size()), max_col,
                             std::move(row_ptr), std::move(col_idx), std::move(values));
  out.labels = std::move(labels);
  return out;
}

LibsvmData parse_libsvm_file(const std::string& path, int min_cols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_libsvm(in, min_cols);
}

void write_libsvm(std::ostream& out, const SparseDesignMatrix& A, const Vec& labels) {
  if (static_cast<int>(labels.size()) != A.rows())
    throw std::invalid_argument("write_libsvm: label count does not match rows");
  char buf[64];
  for (int j = 0; j < A.rows(); ++j) {
    out << (labels[static_cast<std::size_t>(j)] > 0 ? "+1" : "-1");
    for (const auto& e : A.row(j)) {
      std::snprintf(buf, sizeof buf, " %d:%.17g", e.index + 1, e.value);
      out << buf;
    }
    out << '\n';
  }
}

void write_libsvm_file(const std::string& path, const SparseDesignMatrix& A,
                       const Vec& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_libsvm(out, A, labels);
}

}  // namespace fcd
