#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gavms/mesh.hpp"
#include "gavms/quadrature.hpp"

namespace gavms {

using Vector = Eigen::VectorXd;

/// Row-major 2x2 tensor: {d0/dx, d0/dy, d1/dx, d1/dy} for a vector field.
using Tensor2 = std::array<double, 4>;

/// Affine map from the reference triangle with cached barycentric gradients.
struct ElementGeometry {
  std::array<Vec2, 3> corners;
  std::array<Vec2, 3> grad_lambda;
  double det = 0.0;  ///< twice the triangle area

  explicit ElementGeometry(const std::array<Vec2, 3>& corners);
  Vec2 map(const std::array<double, 3>& lambda) const;
  double area() const { return 0.5 * det; }
  std::array<double, 3> barycentric(Vec2 p) const;
};

/// Quadratic Lagrange basis. Local nodes 0..2 are the vertices, 3..5 the midpoints
/// of edges (0,1), (1,2), (2,0).
std::array<double, 6> p2_values(const std::array<double, 3>& lambda);
std::array<Vec2, 6> p2_gradients(const std::array<double, 3>& lambda,
                                 const std::array<Vec2, 3>& grad_lambda);

/// Quadratic 1D basis on an edge parametrised by s in [0,1]: start, midpoint, end.
std::array<double, 3> edge_p2_values(double s);

enum class DofKind : unsigned char { free, dirichlet, interface_normal };

/// Degree-of-freedom layout of one subdomain.
///
/// Scalar P2 nodes are the vertices followed by the edge midpoints. Velocity dofs
/// are component-blocked: dof = component * p2_node_count + node. The saddle-point
/// system orders all velocity dofs first, then the P1 pressure dofs (one per vertex).
/// The large-scale tensor space stores four P1 fields, entry (r,c) at block 2r+c.
class DomainSpace {
 public:
  DomainSpace(std::shared_ptr<const CoupledMesh> mesh, Domain domain);

  Domain domain() const { return domain_; }
  const DomainMesh& mesh() const { return (*mesh_)[domain_]; }

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int p2_node_count() const { return vertex_count_ + edge_count(); }
  int velocity_dofs() const { return 2 * p2_node_count(); }
  int pressure_dofs() const { return vertex_count_; }
  int large_scale_dofs() const { return 4 * vertex_count_; }
  int system_size() const { return velocity_dofs() + pressure_dofs(); }
  int element_count() const { return static_cast<int>(element_nodes_.size()); }

  int velocity_dof(int component, int node) const { return component * p2_node_count() + node; }
  const std::array<int, 6>& element_nodes(int triangle) const { return element_nodes_[triangle]; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  /// P2 node sitting at the midpoint of local edge `local_edge` of `triangle`.
  int midpoint_node(int triangle, int local_edge) const { return element_nodes_[triangle][3 + local_edge]; }
  Vec2 node_position(int node) const { return node_positions_[node]; }
  ElementGeometry geometry(int triangle) const;

  const std::vector<DofKind>& velocity_constraints() const { return velocity_kind_; }
  std::optional<int> pinned_pressure() const { return pinned_pressure_; }
  bool has_outflow() const { return has_outflow_; }

  /// Map from saddle-system index to reduced (free) index; -1 for constrained entries.
  const std::vector<int>& free_index() const { return free_index_; }
  int free_count() const { return free_count_; }

 private:
  std::shared_ptr<const CoupledMesh> mesh_;
  Domain domain_;
  int vertex_count_ = 0;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 6>> element_nodes_;
  std::vector<Vec2> node_positions_;
  std::vector<DofKind> velocity_kind_;
  std::optional<int> pinned_pressure_;
  bool has_outflow_ = false;
  std::vector<int> free_index_;
  int free_count_ = 0;
};

/// One matched interface segment with P2 trace nodes listed start, midpoint, end
/// along a shared parametrisation in both domains.
struct InterfaceSegment {
  std::array<std::array<int, 3>, 2> nodes;  ///< indexed by Domain
  std::array<int, 2> triangles;             ///< owning triangle per domain
  Vec2 start;
  Vec2 end;
  double length = 0.0;
};

/// Finite element spaces on both subdomains: Taylor-Hood P2/P1 velocity/pressure
/// and P1 tensors for the projected large-scale gradient.
class Space {
 public:
  explicit Space(CoupledMesh mesh);

  const CoupledMesh& mesh() const { return *mesh_; }
  const DomainSpace& operator[](Domain d) const { return domains_[index(d)]; }
  const std::vector<InterfaceSegment>& interface_segments() const { return segments_; }

 private:
  std::shared_ptr<const CoupledMesh> mesh_;
  std::array<DomainSpace, 2> domains_;
  std::vector<InterfaceSegment> segments_;
};

Space build_space(CoupledMesh mesh);

using VelocityFunction = std::function<Vec2(Vec2)>;
using GradientFunction = std::function<Tensor2(Vec2)>;
using ScalarFunction = std::function<double(Vec2)>;

/// Nodal interpolation into the P2 velocity space (all dofs, constraints ignored).
Vector interpolate_velocity(const DomainSpace& space, const VelocityFunction& u);
/// Nodal interpolation into the P1 space at the vertices.
Vector interpolate_p1(const DomainSpace& space, const ScalarFunction& f);

struct VelocitySample {
  Vec2 value;
  Tensor2 gradient{};
};

struct ScalarSample {
  double value = 0.0;
  Vec2 gradient;
};

/// Locates `point` in the subdomain (throws std::out_of_range when outside) and
/// evaluates the P2 velocity field with its gradient.
VelocitySample evaluate_velocity(const DomainSpace& space, const Vector& velocity, Vec2 point);
/// Same for a P1 field stored at vertices (pressure, or one tensor entry).
ScalarSample evaluate_p1(const DomainSpace& space, const Vector& values, Vec2 point);

/// Returns the triangle containing `point`, or -1.
int locate(const DomainSpace& space, Vec2 point);

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

/// Quadrature-evaluated ||u - u_h|| and ||grad(u - u_h)|| on one subdomain.
ErrorNorms error_norms(const DomainSpace& space, const Vector& velocity, const VelocityFunction& exact,
                       const GradientFunction& exact_gradient, int quadrature_degree = 6);

/// Applies the Dirichlet and interface-normal constraints to a velocity vector:
/// Dirichlet dofs take `boundary(x)`, interface-normal dofs are zeroed.
void apply_velocity_constraints(const DomainSpace& space, Vector& velocity, const VelocityFunction& boundary);

}  // namespace gavms
