#pragma once

#include <array>

#include "gavms/solver.hpp"
#include "gavms/space.hpp"
#include "gavms/sparse.hpp"

namespace gavms {

/// Default volume rule: exact for P2 * P2 * grad P2 products.
inline constexpr int kVolumeQuadratureDegree = 5;
/// Gauss points per interface edge.
inline constexpr int kInterfaceQuadraturePoints = 3;

enum class ConvectionForm { skew, raw };

/// Vector P2 mass matrix (both components), size velocity_dofs^2.
SparseMatrix assemble_mass(const DomainSpace& space);
/// Scalar P1 mass matrix on the vertices.
SparseMatrix assemble_p1_mass(const DomainSpace& space);
/// viscosity * (grad u, grad v) for the vector P2 space. Rejects negative viscosity.
SparseMatrix assemble_stiffness(const DomainSpace& space, double viscosity);
/// Matrix C(w) with (C(w) u, v) = c(w; u, v). The skew form is
/// 1/2 (w.grad u, v) - 1/2 (w.grad v, u); the raw form is (w.grad u, v).
SparseMatrix assemble_convection(const DomainSpace& space, const Vector& advecting, ConvectionForm form);
/// Repeated convection assembly on a fixed scalar P2 pattern. Caches the element
/// quadrature data and the pattern position of every element entry, so each call
/// is a single pass over the elements with no sorting.
class ConvectionAssembler {
 public:
  ConvectionAssembler(const DomainSpace& space, ConvectionForm form);

  /// Scalar P2 pattern (p2_node_count squared); the vector operator repeats it on
  /// both component blocks.
  const SparseMatrix& scalar_pattern() const { return pattern_; }
  /// Values of the scalar block for the advecting field, aligned with
  /// scalar_pattern().valuePtr().
  void assemble(const Vector& advecting, std::vector<double>& values) const;
  /// Same operator as assemble_convection, expanded to both components.
  SparseMatrix matrix(const Vector& advecting) const;

 private:
  const DomainSpace* space_;
  ConvectionForm form_;
  SparseMatrix pattern_;
  std::vector<std::array<int, 36>> slots_;
  int points_ = 0;
  std::vector<double> weights_;          ///< element-major, quadrature weight times det
  std::vector<std::array<Vec2, 6>> gradients_;
  std::vector<std::array<double, 6>> values_;  ///< reference values per point
};

/// Rows are P1 pressure test functions: (B u)_q = (div u, q).
SparseMatrix assemble_divergence(const DomainSpace& space);
/// Load vector (f, v) for a vector-valued source.
Vector assemble_load(const DomainSpace& space, const VelocityFunction& f);

using VelocityPair = std::array<Vector, 2>;

/// Interface quantities at one quadrature point, sampled identically from both sides.
struct InterfacePoint {
  int segment = 0;
  double s = 0.0;       ///< edge parameter in [0,1]
  Vec2 position;
  double weight = 0.0;  ///< quadrature weight times segment length
  std::array<Vec2, 2> velocity;  ///< level-n trace per domain
  double jump = 0.0;             ///< |[u^n]|
  double jump_previous = 0.0;    ///< |[u^{n-1}]|, valid when InterfaceTrace::has_previous
};

struct InterfaceTrace {
  std::vector<InterfacePoint> points;
  bool has_previous = false;
};

/// Samples the level-n traces and jump magnitudes, plus |[u^{n-1}]| when `previous` is given.
InterfaceTrace sample_interface_trace(const Space& space, const VelocityPair& current,
                                      const VelocityPair* previous = nullptr,
                                      int points = kInterfaceQuadraturePoints);

enum class InterfaceCoupling {
  geometric_average,  ///< kappa |[u^n]| u_i^{n+1} implicit, kappa u_j^n |[u^n]|^1/2 |[u^{n-1}]|^1/2 explicit
  imex,               ///< kappa |[u^n]| u_i^{n+1} implicit, kappa |[u^n]| u_j^n explicit
  monolithic,         ///< kappa |[u^n]| [u^{n+1}] fully implicit, cross-domain block
};

struct InterfaceBlocks {
  std::array<SparseMatrix, 2> implicit;     ///< own-domain velocity block per domain
  std::array<Vector, 2> explicit_rhs;       ///< right-hand-side contribution per domain
  /// cross[i]: rows velocity dofs of domain i, columns velocity dofs of the other domain.
  /// Empty (0 nonzeros) unless coupling is monolithic.
  std::array<SparseMatrix, 2> cross;
};

/// Interface contributions. `scale[i]` multiplies every contribution of domain i
/// (1 for the standard schemes; (nu_i + nu_T)/nu_i for the alternative VMS scaling).
InterfaceBlocks assemble_interface_blocks(const Space& space, const InterfaceTrace& trace, double kappa,
                                          InterfaceCoupling coupling, std::array<double, 2> scale = {1.0, 1.0});

/// L2 projection of the velocity gradient onto continuous P1 tensors. Holds the
/// factorised P1 mass matrix of its subdomain.
class GradientProjector {
 public:
  explicit GradientProjector(const DomainSpace& space);
  /// Returns 4 * vertex_count coefficients; entry (r,c) occupies block 2r+c.
  Vector project(const Vector& velocity) const;

 private:
  const DomainSpace* space_;
  Factorization mass_;
};

Vector project_gradient(const DomainSpace& space, const Vector& velocity);

/// nu_T (G, grad v) for every velocity test function.
Vector assemble_vms_rhs(const DomainSpace& space, const Vector& large_scale, double nu_t);

/// Quadrature integrals used by the energy bookkeeping.
double gradient_norm_squared(const DomainSpace& space, const Vector& velocity);
double large_scale_norm_squared(const DomainSpace& space, const Vector& large_scale);
/// ||grad u - G||^2
double small_scale_norm_squared(const DomainSpace& space, const Vector& velocity, const Vector& large_scale);
/// (G, grad u - G) for every P1 tensor direction is zero for a projection; returns
/// the largest |(grad u - G, L_k)| over the basis tensors L_k.
double projection_orthogonality_defect(const DomainSpace& space, const Vector& velocity, const Vector& large_scale);

}  // namespace gavms
