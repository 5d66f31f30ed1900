#include "gavms/sparse.hpp"

#include <stdexcept>

namespace gavms {

SparseMatrix from_triplets(int rows, int cols, const Triplets& entries) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

SparseMatrix embed(const SparseMatrix& block, int rows, int cols, int row_offset, int col_offset) {
  if (row_offset + block.rows() > rows || col_offset + block.cols() > cols)
    throw std::invalid_argument("embedded block does not fit");
  Triplets t;
  t.reserve(block.nonZeros());
  for (int r = 0; r < block.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(block, r); it; ++it)
      t.emplace_back(r + row_offset, it.col() + col_offset, it.value());
  return from_triplets(rows, cols, t);
}

SparseSystem reduce(const SparseMatrix& full, const Vector& full_rhs, const Vector& constrained,
                    const std::vector<int>& free_index, int free_count) {
  const int n = static_cast<int>(full.rows());
  if (full.cols() != n || full_rhs.size() != n || constrained.size() != n ||
      static_cast<int>(free_index.size()) != n)
    throw std::invalid_argument("reduce: dimension mismatch");

  SparseSystem sys;
  sys.rhs.resize(free_count);
  SparseMatrix& m = sys.matrix;
  m.resize(free_count, free_count);
  m.reserve(full.nonZeros());
  // free_index is increasing over free entries, so rows and columns stay sorted.
  for (int r = 0; r < n; ++r) {
    const int fr = free_index[r];
    if (fr < 0) continue;
    double b = full_rhs[r];
    m.startVec(fr);
    for (SparseMatrix::InnerIterator it(full, r); it; ++it) {
      const int fc = free_index[it.col()];
      if (fc >= 0) m.insertBack(fr, fc) = it.value();
      else b -= it.value() * constrained[it.col()];
    }
    sys.rhs[fr] = b;
  }
  m.finalize();
  m.makeCompressed();
  return sys;
}

Vector expand(const Vector& reduced, const Vector& constrained, const std::vector<int>& free_index) {
  Vector out = constrained;
  for (std::size_t i = 0; i < free_index.size(); ++i)
    if (free_index[i] >= 0) out[static_cast<Eigen::Index>(i)] = reduced[free_index[i]];
  return out;
}

}  // namespace gavms
