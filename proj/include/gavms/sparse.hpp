#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "gavms/space.hpp"

namespace gavms {

/// Compressed sparse row storage; after makeCompressed() column indices are
/// sorted and unique within each row.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Triplet = Eigen::Triplet<double, int>;
using Triplets = std::vector<Triplet>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& entries);

/// Places `block` at (row_offset, col_offset) of an otherwise empty rows x cols matrix.
SparseMatrix embed(const SparseMatrix& block, int rows, int cols, int row_offset, int col_offset);

/// Constraint-eliminated linear system over the free dofs.
struct SparseSystem {
  SparseMatrix matrix;
  Vector rhs;

  int size() const { return static_cast<int>(rhs.size()); }
};

/// Restricts `full * x = full_rhs` to the free rows/columns given by `free_index`
/// (-1 marks constrained entries), moving constrained columns, valued by
/// `constrained`, to the right-hand side.
SparseSystem reduce(const SparseMatrix& full, const Vector& full_rhs, const Vector& constrained,
                    const std::vector<int>& free_index, int free_count);

/// Scatters a reduced solution back into a full vector whose constrained entries
/// are taken from `constrained`.
Vector expand(const Vector& reduced, const Vector& constrained, const std::vector<int>& free_index);

}  // namespace gavms
