#include "gavms/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include <umfpack.h>

extern "C" void dtrsm_(const char* side, const char* uplo, const char* trans, const char* diag, const int* m,
                       const int* n, const double* alpha, const double* a, const int* lda, double* b, const int* ldb);

namespace gavms {

namespace {

// Some virtualised hosts advertise AVX-512 extensions whose OpenBLAS kernels then
// return wrong results. The kernel is chosen when the BLAS library loads, so the
// only remedy is to restart the process with an explicit core type.
bool blas_triangular_solve_ok() {
  const int n = 96;
  std::vector<double> l(n * n), b(n * n), x;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      l[i + j * n] = i > j ? 0.5 / (1 + i + j) : 0.0;
      b[i + j * n] = std::sin(1.0 + i + 7.0 * j);
    }
  x = b;
  const double one = 1.0;
  dtrsm_("L", "L", "N", "U", &n, &n, &one, l.data(), &n, x.data(), &n);
  double err = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double s = x[i + j * n];
      for (int k = 0; k < i; ++k) s += l[i + k * n] * x[k + j * n];
      err = std::max(err, std::abs(s - b[i + j * n]));
    }
  return err < 1e-10;
}

__attribute__((constructor)) void check_blas_kernel(int /*argc*/, char** argv, char** /*envp*/) {
  if (blas_triangular_solve_ok()) return;
  if (std::getenv("OPENBLAS_CORETYPE") == nullptr && argv != nullptr) {
    setenv("OPENBLAS_CORETYPE", "Haswell", 1);
    execv("/proc/self/exe", argv);
  }
  std::fprintf(stderr, "warning: BLAS triangular solve self-check failed; sparse LU results are unreliable\n");
}

}  // namespace

Factorization::Factorization(Factorization&& other) noexcept { *this = std::move(other); }

Factorization& Factorization::operator=(Factorization&& other) noexcept {
  if (this != &other) {
    release_numeric();
    release_symbolic();
    n_ = std::exchange(other.n_, 0);
    outer_ = std::move(other.outer_);
    inner_ = std::move(other.inner_);
    values_ = std::move(other.values_);
    symbolic_ = std::exchange(other.symbolic_, nullptr);
    numeric_ = std::exchange(other.numeric_, nullptr);
    analyses_ = std::exchange(other.analyses_, 0);
  }
  return *this;
}

Factorization::~Factorization() {
  release_numeric();
  release_symbolic();
}

void Factorization::release_numeric() {
  if (numeric_) umfpack_di_free_numeric(&numeric_);
  numeric_ = nullptr;
}

void Factorization::release_symbolic() {
  if (symbolic_) umfpack_di_free_symbolic(&symbolic_);
  symbolic_ = nullptr;
}

void Factorization::refactor(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("factorize: matrix is not square");
  if (!a.isCompressed()) throw std::invalid_argument("factorize: matrix must be compressed");
  const int n = static_cast<int>(a.rows());
  const int nnz = static_cast<int>(a.nonZeros());
  const int* outer = a.outerIndexPtr();
  const int* inner = a.innerIndexPtr();

  const bool same_pattern = symbolic_ && n == n_ && static_cast<int>(inner_.size()) == nnz &&
                            std::equal(outer, outer + n + 1, outer_.begin()) &&
                            std::equal(inner, inner + nnz, inner_.begin());
  release_numeric();
  if (!same_pattern) {
    release_symbolic();
    n_ = n;
    outer_.assign(outer, outer + n + 1);
    inner_.assign(inner, inner + nnz);
  }
  values_.assign(a.valuePtr(), a.valuePtr() + nnz);

  double control[UMFPACK_CONTROL];
  umfpack_di_defaults(control);
  // Taylor-Hood saddle systems are structurally symmetric; AMD/METIS on A+A^T
  // gives markedly less fill than the column ordering.
  control[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
  control[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
  if (!symbolic_) {
    const int status = umfpack_di_symbolic(n, n, outer_.data(), inner_.data(), values_.data(), &symbolic_,
                                           control, nullptr);
    if (status != UMFPACK_OK)
      throw std::runtime_error("umfpack symbolic analysis failed with status " + std::to_string(status));
    ++analyses_;
  }
  const int status =
      umfpack_di_numeric(outer_.data(), inner_.data(), values_.data(), symbolic_, &numeric_, control, nullptr);
  if (status == UMFPACK_WARNING_singular_matrix) {
    int pivot = -1;
    std::vector<double> diag(n);
    umfpack_di_get_numeric(nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,
                           diag.data(), nullptr, nullptr, numeric_);
    for (int k = 0; k < n; ++k)
      if (diag[k] == 0.0) {
        pivot = k;
        break;
      }
    release_numeric();
    throw SingularMatrixError(pivot, "singular matrix: zero pivot at position " + std::to_string(pivot));
  }
  if (status != UMFPACK_OK && status != UMFPACK_WARNING_determinant_underflow &&
      status != UMFPACK_WARNING_determinant_overflow) {
    release_numeric();
    throw std::runtime_error("umfpack numeric factorization failed with status " + std::to_string(status));
  }
}

Vector Factorization::solve(const Vector& rhs) const {
  if (!numeric_) throw std::logic_error("solve called on an empty factorization");
  if (rhs.size() != n_)
    throw std::invalid_argument("solve: rhs has size " + std::to_string(rhs.size()) + ", expected " +
                                std::to_string(n_));
  Vector x(n_);
  if (n_ == 0) return x;
  // The stored matrix is A^T in CSC form; UMFPACK_At solves (A^T)^T x = b.
  double control[UMFPACK_CONTROL];
  umfpack_di_defaults(control);
  control[UMFPACK_IRSTEP] = kRefinementSteps;
  const int status = umfpack_di_solve(UMFPACK_At, outer_.data(), inner_.data(), values_.data(), x.data(),
                                      rhs.data(), numeric_, control, nullptr);
  if (status != UMFPACK_OK) throw std::runtime_error("umfpack solve failed with status " + std::to_string(status));
  return x;
}

Factorization::Factors Factorization::factors() const {
  if (!numeric_) throw std::logic_error("factors of an empty factorization");
  int lnz = 0, unz = 0, rows = 0, cols = 0, nz_udiag = 0;
  umfpack_di_get_lunz(&lnz, &unz, &rows, &cols, &nz_udiag, numeric_);

  std::vector<int> lp(n_ + 1), lj(lnz), up(n_ + 1), ui(unz), p(n_), q(n_);
  std::vector<double> lx(lnz), ux(unz), rs(n_);
  int do_recip = 0;
  umfpack_di_get_numeric(lp.data(), lj.data(), lx.data(), up.data(), ui.data(), ux.data(), p.data(), q.data(),
                         nullptr, &do_recip, rs.data(), numeric_);

  Factors f;
  Triplets tl, tu;
  for (int r = 0; r < n_; ++r)
    for (int k = lp[r]; k < lp[r + 1]; ++k) tl.emplace_back(r, lj[k], lx[k]);
  for (int c = 0; c < n_; ++c)
    for (int k = up[c]; k < up[c + 1]; ++k) tu.emplace_back(ui[k], c, ux[k]);
  f.lower = from_triplets(n_, n_, tl);
  f.upper = from_triplets(n_, n_, tu);
  f.row_permutation = std::move(p);
  f.col_permutation = std::move(q);
  f.row_scale = Eigen::Map<Vector>(rs.data(), n_);
  f.scale_multiplies = do_recip != 0;
  return f;
}

Factorization factorize(const SparseMatrix& a) { return Factorization(a); }

Vector solve(const Factorization& f, const Vector& rhs) { return f.solve(rhs); }

}  // namespace gavms
