#include "gavms/space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace gavms {

ElementGeometry::ElementGeometry(const std::array<Vec2, 3>& c) : corners(c) {
  const Vec2 e1 = c[1] - c[0];
  const Vec2 e2 = c[2] - c[0];
  det = e1.x * e2.y - e2.x * e1.y;
  // Rows of J^{-1}: gradients of lambda1 and lambda2.
  grad_lambda[1] = {e2.y / det, -e2.x / det};
  grad_lambda[2] = {-e1.y / det, e1.x / det};
  grad_lambda[0] = {-grad_lambda[1].x - grad_lambda[2].x, -grad_lambda[1].y - grad_lambda[2].y};
}

Vec2 ElementGeometry::map(const std::array<double, 3>& l) const {
  return {l[0] * corners[0].x + l[1] * corners[1].x + l[2] * corners[2].x,
          l[0] * corners[0].y + l[1] * corners[1].y + l[2] * corners[2].y};
}

std::array<double, 3> ElementGeometry::barycentric(Vec2 p) const {
  const Vec2 d = p - corners[0];
  const double l1 = dot(grad_lambda[1], d);
  const double l2 = dot(grad_lambda[2], d);
  return {1.0 - l1 - l2, l1, l2};
}

std::array<double, 6> p2_values(const std::array<double, 3>& l) {
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

std::array<Vec2, 6> p2_gradients(const std::array<double, 3>& l, const std::array<Vec2, 3>& g) {
  std::array<Vec2, 6> out;
  for (int k = 0; k < 3; ++k) out[k] = (4.0 * l[k] - 1.0) * g[k];
  out[3] = 4.0 * (l[0] * g[1] + l[1] * g[0]);
  out[4] = 4.0 * (l[1] * g[2] + l[2] * g[1]);
  out[5] = 4.0 * (l[2] * g[0] + l[0] * g[2]);
  return out;
}

std::array<double, 3> edge_p2_values(double s) {
  return {(1.0 - s) * (1.0 - 2.0 * s), 4.0 * s * (1.0 - s), s * (2.0 * s - 1.0)};
}

DomainSpace::DomainSpace(std::shared_ptr<const CoupledMesh> mesh, Domain domain)
    : mesh_(std::move(mesh)), domain_(domain) {
  const DomainMesh& m = (*mesh_)[domain_];
  vertex_count_ = static_cast<int>(m.vertices.size());

  std::map<std::pair<int, int>, int> edge_id;
  element_nodes_.reserve(m.triangles.size());
  for (const auto& t : m.triangles) {
    std::array<int, 6> nodes{t[0], t[1], t[2], -1, -1, -1};
    for (int k = 0; k < 3; ++k) {
      const auto key = std::minmax(t[k], t[(k + 1) % 3]);
      auto [it, inserted] = edge_id.emplace(key, static_cast<int>(edges_.size()));
      if (inserted) edges_.push_back({key.first, key.second});
      nodes[3 + k] = vertex_count_ + it->second;
    }
    element_nodes_.push_back(nodes);
  }

  node_positions_ = m.vertices;
  for (const auto& e : edges_) node_positions_.push_back(0.5 * (m.vertices[e[0]] + m.vertices[e[1]]));

  const int n = p2_node_count();
  velocity_kind_.assign(2 * n, DofKind::free);
  auto edge_nodes = [&](const BoundaryEdge& e) {
    return std::array<int, 3>{e.vertices[0], e.vertices[1], midpoint_node(e.triangle, e.local_edge)};
  };
  for (const auto& e : m.boundary_edges) {
    if (e.tag == BoundaryTag::outflow) has_outflow_ = true;
    if (e.tag != BoundaryTag::interface) continue;
    const Vec2 d = m.vertices[e.vertices[1]] - m.vertices[e.vertices[0]];
    int normal_component;
    if (d.y == 0.0) normal_component = 1;
    else if (d.x == 0.0) normal_component = 0;
    else throw std::invalid_argument("interface edges must be axis aligned");
    for (int node : edge_nodes(e)) velocity_kind_[velocity_dof(normal_component, node)] = DofKind::interface_normal;
  }
  for (const auto& e : m.boundary_edges) {
    if (e.tag != BoundaryTag::dirichlet) continue;
    for (int node : edge_nodes(e))
      for (int c = 0; c < 2; ++c) velocity_kind_[velocity_dof(c, node)] = DofKind::dirichlet;
  }
  if (!has_outflow_) pinned_pressure_ = 0;

  free_index_.assign(system_size(), -1);
  for (int i = 0; i < velocity_dofs(); ++i)
    if (velocity_kind_[i] == DofKind::free) free_index_[i] = free_count_++;
  for (int q = 0; q < pressure_dofs(); ++q)
    if (!pinned_pressure_ || *pinned_pressure_ != q) free_index_[velocity_dofs() + q] = free_count_++;
}

ElementGeometry DomainSpace::geometry(int triangle) const {
  const DomainMesh& m = mesh();
  const auto& t = m.triangles[triangle];
  return ElementGeometry({m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]});
}

Space::Space(CoupledMesh mesh)
    : mesh_(std::make_shared<const CoupledMesh>(std::move(mesh))),
      domains_{DomainSpace(mesh_, Domain::atmosphere), DomainSpace(mesh_, Domain::ocean)} {
  const DomainMesh& atm = (*mesh_)[Domain::atmosphere];
  const DomainMesh& ocn = (*mesh_)[Domain::ocean];
  for (const InterfacePair& p : mesh_->interface_pairs) {
    const BoundaryEdge& a = atm.boundary_edges[p.atmosphere_edge];
    const BoundaryEdge& o = ocn.boundary_edges[p.ocean_edge];
    InterfaceSegment seg;
    seg.nodes[0] = {a.vertices[0], domains_[0].midpoint_node(a.triangle, a.local_edge), a.vertices[1]};
    const int o0 = p.reversed ? o.vertices[1] : o.vertices[0];
    const int o1 = p.reversed ? o.vertices[0] : o.vertices[1];
    seg.nodes[1] = {o0, domains_[1].midpoint_node(o.triangle, o.local_edge), o1};
    seg.triangles = {a.triangle, o.triangle};
    seg.start = atm.vertices[a.vertices[0]];
    seg.end = atm.vertices[a.vertices[1]];
    seg.length = norm(seg.end - seg.start);
    segments_.push_back(seg);
  }
}

Space build_space(CoupledMesh mesh) { return Space(std::move(mesh)); }

Vector interpolate_velocity(const DomainSpace& space, const VelocityFunction& u) {
  const int n = space.p2_node_count();
  Vector out(2 * n);
  for (int node = 0; node < n; ++node) {
    const Vec2 v = u(space.node_position(node));
    out[node] = v.x;
    out[n + node] = v.y;
  }
  return out;
}

Vector interpolate_p1(const DomainSpace& space, const ScalarFunction& f) {
  Vector out(space.vertex_count());
  for (int v = 0; v < space.vertex_count(); ++v) out[v] = f(space.node_position(v));
  return out;
}

int locate(const DomainSpace& space, Vec2 point) {
  constexpr double tol = 1e-12;
  for (int t = 0; t < space.element_count(); ++t) {
    const auto l = space.geometry(t).barycentric(point);
    if (l[0] >= -tol && l[1] >= -tol && l[2] >= -tol) return t;
  }
  return -1;
}

VelocitySample evaluate_velocity(const DomainSpace& space, const Vector& velocity, Vec2 point) {
  const int t = locate(space, point);
  if (t < 0) throw std::out_of_range("point outside the subdomain");
  const ElementGeometry geo = space.geometry(t);
  const auto l = geo.barycentric(point);
  const auto phi = p2_values(l);
  const auto dphi = p2_gradients(l, geo.grad_lambda);
  const auto& nodes = space.element_nodes(t);
  VelocitySample s;
  for (int k = 0; k < 6; ++k) {
    const double u0 = velocity[space.velocity_dof(0, nodes[k])];
    const double u1 = velocity[space.velocity_dof(1, nodes[k])];
    s.value.x += u0 * phi[k];
    s.value.y += u1 * phi[k];
    s.gradient[0] += u0 * dphi[k].x;
    s.gradient[1] += u0 * dphi[k].y;
    s.gradient[2] += u1 * dphi[k].x;
    s.gradient[3] += u1 * dphi[k].y;
  }
  return s;
}

ScalarSample evaluate_p1(const DomainSpace& space, const Vector& values, Vec2 point) {
  const int t = locate(space, point);
  if (t < 0) throw std::out_of_range("point outside the subdomain");
  const ElementGeometry geo = space.geometry(t);
  const auto l = geo.barycentric(point);
  const auto& tri = space.mesh().triangles[t];
  ScalarSample s;
  for (int k = 0; k < 3; ++k) {
    s.value += values[tri[k]] * l[k];
    s.gradient = s.gradient + values[tri[k]] * geo.grad_lambda[k];
  }
  return s;
}

ErrorNorms error_norms(const DomainSpace& space, const Vector& velocity, const VelocityFunction& exact,
                       const GradientFunction& exact_gradient, int quadrature_degree) {
  const QuadratureRule q = triangle_quadrature(quadrature_degree);
  double l2 = 0.0, h1 = 0.0;
  for (int t = 0; t < space.element_count(); ++t) {
    const ElementGeometry geo = space.geometry(t);
    const auto& nodes = space.element_nodes(t);
    for (std::size_t p = 0; p < q.size(); ++p) {
      const auto phi = p2_values(q.points[p]);
      const auto dphi = p2_gradients(q.points[p], geo.grad_lambda);
      Vec2 uh;
      Tensor2 guh{};
      for (int k = 0; k < 6; ++k) {
        const double u0 = velocity[space.velocity_dof(0, nodes[k])];
        const double u1 = velocity[space.velocity_dof(1, nodes[k])];
        uh.x += u0 * phi[k];
        uh.y += u1 * phi[k];
        guh[0] += u0 * dphi[k].x;
        guh[1] += u0 * dphi[k].y;
        guh[2] += u1 * dphi[k].x;
        guh[3] += u1 * dphi[k].y;
      }
      const Vec2 x = geo.map(q.points[p]);
      const Vec2 e = exact(x) - uh;
      const Tensor2 ge = exact_gradient(x);
      const double w = q.weights[p] * geo.det;
      l2 += w * dot(e, e);
      for (int c = 0; c < 4; ++c) h1 += w * (ge[c] - guh[c]) * (ge[c] - guh[c]);
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

void apply_velocity_constraints(const DomainSpace& space, Vector& velocity, const VelocityFunction& boundary) {
  const int n = space.p2_node_count();
  const auto& kind = space.velocity_constraints();
  for (int node = 0; node < n; ++node) {
    const bool d0 = kind[node] == DofKind::dirichlet;
    const bool d1 = kind[n + node] == DofKind::dirichlet;
    if (d0 || d1) {
      const Vec2 g = boundary(space.node_position(node));
      if (d0) velocity[node] = g.x;
      if (d1) velocity[n + node] = g.y;
    }
    if (kind[node] == DofKind::interface_normal) velocity[node] = 0.0;
    if (kind[n + node] == DofKind::interface_normal) velocity[n + node] = 0.0;
  }
}

}  // namespace gavms
