#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gavms/sparse.hpp"

namespace gavms {

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(int pivot, const std::string& what) : std::runtime_error(what), pivot_(pivot) {}
  /// Position in the pivot sequence where a zero pivot appeared.
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

/// Sparse LU with threshold partial pivoting (UMFPACK).
///
/// The CSR matrix A is handed to UMFPACK as the CSC matrix A^T, so the stored
/// factors satisfy P R A^T Q = L U with R the row scaling. Solves use the
/// transposed system, which is A x = b.
///
/// Symbolic analysis is kept across refactor() calls while the sparsity pattern
/// is unchanged. Solves on a finished factorization are safe to run concurrently.
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(const SparseMatrix& a) { refactor(a); }
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;
  Factorization(Factorization&& other) noexcept;
  Factorization& operator=(Factorization&& other) noexcept;
  ~Factorization();

  void refactor(const SparseMatrix& a);
  Vector solve(const Vector& rhs) const;

  int size() const { return n_; }
  bool empty() const { return numeric_ == nullptr; }
  /// Number of symbolic analyses performed so far.
  int analyses() const { return analyses_; }

  struct Factors {
    SparseMatrix lower;  ///< unit lower triangular
    SparseMatrix upper;
    std::vector<int> row_permutation;  ///< P[k] = row of A^T that became pivot row k
    std::vector<int> col_permutation;
    Vector row_scale;
    bool scale_multiplies = true;  ///< false: rows of A^T are divided by row_scale
  };
  Factors factors() const;

  /// Iterative refinement steps per solve.
  static constexpr int kRefinementSteps = 0;

 private:
  void release_numeric();
  void release_symbolic();

  int n_ = 0;
  std::vector<int> outer_;
  std::vector<int> inner_;
  std::vector<double> values_;
  void* symbolic_ = nullptr;
  void* numeric_ = nullptr;
  int analyses_ = 0;
};

Factorization factorize(const SparseMatrix& a);
Vector solve(const Factorization& f, const Vector& rhs);

}  // namespace gavms
