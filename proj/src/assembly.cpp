#include "gavms/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gavms {

namespace {

// Reference P2 values at the points of a rule; gradients are element dependent.
struct ReferenceP2 {
  QuadratureRule rule;
  std::vector<std::array<double, 6>> values;

  explicit ReferenceP2(int degree) : rule(triangle_quadrature(degree)) {
    for (const auto& p : rule.points) values.push_back(p2_values(p));
  }
};

const ReferenceP2& volume_reference() {
  static const ReferenceP2 ref(kVolumeQuadratureDegree);
  return ref;
}

void require_size(const Vector& v, int n, const char* what) {
  if (v.size() != n)
    throw std::invalid_argument(std::string(what) + " has size " + std::to_string(v.size()) + ", expected " +
                                std::to_string(n));
}

// Adds a scalar P2 element matrix to both velocity components.
void scatter_vector_block(const DomainSpace& space, const std::array<int, 6>& nodes, const double (&local)[6][6],
                          Triplets& out) {
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        out.emplace_back(space.velocity_dof(c, nodes[a]), space.velocity_dof(c, nodes[b]), local[a][b]);
}

Vec2 velocity_at(const DomainSpace& space, const Vector& u, const std::array<int, 6>& nodes,
                 const std::array<double, 6>& phi) {
  Vec2 w;
  for (int k = 0; k < 6; ++k) {
    w.x += u[space.velocity_dof(0, nodes[k])] * phi[k];
    w.y += u[space.velocity_dof(1, nodes[k])] * phi[k];
  }
  return w;
}

Tensor2 gradient_at(const DomainSpace& space, const Vector& u, const std::array<int, 6>& nodes,
                    const std::array<Vec2, 6>& dphi) {
  Tensor2 g{};
  for (int k = 0; k < 6; ++k) {
    const double u0 = u[space.velocity_dof(0, nodes[k])];
    const double u1 = u[space.velocity_dof(1, nodes[k])];
    g[0] += u0 * dphi[k].x;
    g[1] += u0 * dphi[k].y;
    g[2] += u1 * dphi[k].x;
    g[3] += u1 * dphi[k].y;
  }
  return g;
}

Tensor2 large_scale_at(const DomainSpace& space, const Vector& g, const std::array<int, 3>& tri,
                       const std::array<double, 3>& lambda) {
  const int nv = space.vertex_count();
  Tensor2 out{};
  for (int e = 0; e < 4; ++e)
    for (int k = 0; k < 3; ++k) out[e] += g[e * nv + tri[k]] * lambda[k];
  return out;
}

}  // namespace

SparseMatrix assemble_mass(const DomainSpace& space) {
  const ReferenceP2& ref = volume_reference();
  Triplets t;
  t.reserve(static_cast<std::size_t>(space.element_count()) * 72);
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    double local[6][6] = {};
    for (std::size_t p = 0; p < ref.rule.size(); ++p) {
      const double w = ref.rule.weights[p] * geo.det;
      const auto& phi = ref.values[p];
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) local[a][b] += w * phi[a] * phi[b];
    }
    scatter_vector_block(space, space.element_nodes(e), local, t);
  }
  return from_triplets(space.velocity_dofs(), space.velocity_dofs(), t);
}

SparseMatrix assemble_p1_mass(const DomainSpace& space) {
  const QuadratureRule q = triangle_quadrature(2);
  Triplets t;
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    const auto& tri = space.mesh().triangles[e];
    for (std::size_t p = 0; p < q.size(); ++p) {
      const double w = q.weights[p] * geo.det;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) t.emplace_back(tri[a], tri[b], w * q.points[p][a] * q.points[p][b]);
    }
  }
  return from_triplets(space.vertex_count(), space.vertex_count(), t);
}

SparseMatrix assemble_stiffness(const DomainSpace& space, double viscosity) {
  if (viscosity < 0.0) throw std::invalid_argument("negative viscosity " + std::to_string(viscosity));
  const ReferenceP2& ref = volume_reference();
  Triplets t;
  t.reserve(static_cast<std::size_t>(space.element_count()) * 72);
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    double local[6][6] = {};
    // Gradients of P2 are linear; a degree-2 subset would do, but the shared rule is exact too.
    for (std::size_t p = 0; p < ref.rule.size(); ++p) {
      const double w = viscosity * ref.rule.weights[p] * geo.det;
      const auto dphi = p2_gradients(ref.rule.points[p], geo.grad_lambda);
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) local[a][b] += w * dot(dphi[a], dphi[b]);
    }
    scatter_vector_block(space, space.element_nodes(e), local, t);
  }
  return from_triplets(space.velocity_dofs(), space.velocity_dofs(), t);
}

SparseMatrix assemble_convection(const DomainSpace& space, const Vector& advecting, ConvectionForm form) {
  require_size(advecting, space.velocity_dofs(), "advecting field");
  const ReferenceP2& ref = volume_reference();
  Triplets t;
  t.reserve(static_cast<std::size_t>(space.element_count()) * 72);
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    const auto& nodes = space.element_nodes(e);
    double local[6][6] = {};
    for (std::size_t p = 0; p < ref.rule.size(); ++p) {
      const double w = ref.rule.weights[p] * geo.det;
      const auto& phi = ref.values[p];
      const auto dphi = p2_gradients(ref.rule.points[p], geo.grad_lambda);
      const Vec2 wv = velocity_at(space, advecting, nodes, phi);
      double adv[6];
      for (int k = 0; k < 6; ++k) adv[k] = dot(wv, dphi[k]);
      if (form == ConvectionForm::skew) {
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b) local[a][b] += 0.5 * w * (adv[b] * phi[a] - adv[a] * phi[b]);
      } else {
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b) local[a][b] += w * adv[b] * phi[a];
      }
    }
    scatter_vector_block(space, nodes, local, t);
  }
  return from_triplets(space.velocity_dofs(), space.velocity_dofs(), t);
}

ConvectionAssembler::ConvectionAssembler(const DomainSpace& space, ConvectionForm form)
    : space_(&space), form_(form) {
  const ReferenceP2& ref = volume_reference();
  const int ne = space.element_count();
  points_ = static_cast<int>(ref.rule.size());
  values_ = ref.values;
  Triplets t;
  t.reserve(static_cast<std::size_t>(ne) * 36);
  for (int e = 0; e < ne; ++e) {
    const auto& nodes = space.element_nodes(e);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) t.emplace_back(nodes[a], nodes[b], 0.0);
  }
  const int n = space.p2_node_count();
  pattern_ = from_triplets(n, n, t);

  slots_.resize(ne);
  weights_.reserve(static_cast<std::size_t>(ne) * points_);
  gradients_.reserve(static_cast<std::size_t>(ne) * points_);
  const int* outer = pattern_.outerIndexPtr();
  const int* inner = pattern_.innerIndexPtr();
  for (int e = 0; e < ne; ++e) {
    const auto& nodes = space.element_nodes(e);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        const int* first = inner + outer[nodes[a]];
        const int* last = inner + outer[nodes[a] + 1];
        slots_[e][6 * a + b] = static_cast<int>(std::lower_bound(first, last, nodes[b]) - inner);
      }
    const ElementGeometry geo = space.geometry(e);
    for (int p = 0; p < points_; ++p) {
      weights_.push_back(ref.rule.weights[p] * geo.det);
      gradients_.push_back(p2_gradients(ref.rule.points[p], geo.grad_lambda));
    }
  }
}

void ConvectionAssembler::assemble(const Vector& advecting, std::vector<double>& values) const {
  const DomainSpace& space = *space_;
  require_size(advecting, space.velocity_dofs(), "advecting field");
  values.assign(pattern_.nonZeros(), 0.0);
  const int ne = space.element_count();
  const int shift = space.p2_node_count();
  for (int e = 0; e < ne; ++e) {
    const auto& nodes = space.element_nodes(e);
    double wx[6], wy[6];
    for (int k = 0; k < 6; ++k) {
      wx[k] = advecting[nodes[k]];
      wy[k] = advecting[shift + nodes[k]];
    }
    double local[36] = {};
    for (int p = 0; p < points_; ++p) {
      const std::size_t q = static_cast<std::size_t>(e) * points_ + p;
      const double w = weights_[q];
      const auto& phi = values_[p];
      const auto& dphi = gradients_[q];
      double ux = 0.0, uy = 0.0;
      for (int k = 0; k < 6; ++k) {
        ux += wx[k] * phi[k];
        uy += wy[k] * phi[k];
      }
      double adv[6];
      for (int k = 0; k < 6; ++k) adv[k] = ux * dphi[k].x + uy * dphi[k].y;
      if (form_ == ConvectionForm::skew) {
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b) local[6 * a + b] += 0.5 * w * (adv[b] * phi[a] - adv[a] * phi[b]);
      } else {
        for (int a = 0; a < 6; ++a)
          for (int b = 0; b < 6; ++b) local[6 * a + b] += w * adv[b] * phi[a];
      }
    }
    for (int k = 0; k < 36; ++k) values[slots_[e][k]] += local[k];
  }
}

SparseMatrix ConvectionAssembler::matrix(const Vector& advecting) const {
  std::vector<double> values;
  assemble(advecting, values);
  const int n = space_->p2_node_count();
  Triplets t;
  t.reserve(2 * values.size());
  for (int r = 0; r < n; ++r)
    for (int k = pattern_.outerIndexPtr()[r]; k < pattern_.outerIndexPtr()[r + 1]; ++k)
      for (int c = 0; c < 2; ++c) t.emplace_back(c * n + r, c * n + pattern_.innerIndexPtr()[k], values[k]);
  return from_triplets(2 * n, 2 * n, t);
}

SparseMatrix assemble_divergence(const DomainSpace& space) {
  const ReferenceP2& ref = volume_reference();
  Triplets t;
  t.reserve(static_cast<std::size_t>(space.element_count()) * 36);
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    const auto& nodes = space.element_nodes(e);
    const auto& tri = space.mesh().triangles[e];
    double local[3][2][6] = {};
    for (std::size_t p = 0; p < ref.rule.size(); ++p) {
      const double w = ref.rule.weights[p] * geo.det;
      const auto& lam = ref.rule.points[p];
      const auto dphi = p2_gradients(lam, geo.grad_lambda);
      for (int q = 0; q < 3; ++q)
        for (int b = 0; b < 6; ++b) {
          local[q][0][b] += w * lam[q] * dphi[b].x;
          local[q][1][b] += w * lam[q] * dphi[b].y;
        }
    }
    for (int q = 0; q < 3; ++q)
      for (int c = 0; c < 2; ++c)
        for (int b = 0; b < 6; ++b) t.emplace_back(tri[q], space.velocity_dof(c, nodes[b]), local[q][c][b]);
  }
  return from_triplets(space.pressure_dofs(), space.velocity_dofs(), t);
}

Vector assemble_load(const DomainSpace& space, const VelocityFunction& f) {
  const ReferenceP2& ref = volume_reference();
  Vector out = Vector::Zero(space.velocity_dofs());
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    const auto& nodes = space.element_nodes(e);
    for (std::size_t p = 0; p < ref.rule.size(); ++p) {
      const double w = ref.rule.weights[p] * geo.det;
      const Vec2 fv = f(geo.map(ref.rule.points[p]));
      for (int a = 0; a < 6; ++a) {
        out[space.velocity_dof(0, nodes[a])] += w * fv.x * ref.values[p][a];
        out[space.velocity_dof(1, nodes[a])] += w * fv.y * ref.values[p][a];
      }
    }
  }
  return out;
}

InterfaceTrace sample_interface_trace(const Space& space, const VelocityPair& current, const VelocityPair* previous,
                                      int points) {
  for (Domain d : kDomains) {
    require_size(current[index(d)], space[d].velocity_dofs(), "level-n velocity");
    if (previous) require_size((*previous)[index(d)], space[d].velocity_dofs(), "level n-1 velocity");
  }
  const QuadratureRule q = edge_quadrature(points);
  auto trace_value = [&](const Vector& u, Domain d, const std::array<int, 3>& nodes, const std::array<double, 3>& n) {
    const DomainSpace& ds = space[d];
    Vec2 v;
    for (int k = 0; k < 3; ++k) {
      v.x += u[ds.velocity_dof(0, nodes[k])] * n[k];
      v.y += u[ds.velocity_dof(1, nodes[k])] * n[k];
    }
    return v;
  };

  InterfaceTrace trace;
  trace.has_previous = previous != nullptr;
  const auto& segments = space.interface_segments();
  trace.points.reserve(segments.size() * q.size());
  for (int sidx = 0; sidx < static_cast<int>(segments.size()); ++sidx) {
    const InterfaceSegment& seg = segments[sidx];
    for (std::size_t p = 0; p < q.size(); ++p) {
      InterfacePoint ip;
      ip.segment = sidx;
      ip.s = q.points[p][1];
      ip.position = seg.start + ip.s * (seg.end - seg.start);
      ip.weight = q.weights[p] * seg.length;
      const auto n = edge_p2_values(ip.s);
      for (Domain d : kDomains) ip.velocity[index(d)] = trace_value(current[index(d)], d, seg.nodes[index(d)], n);
      ip.jump = norm(ip.velocity[0] - ip.velocity[1]);
      if (previous) {
        const Vec2 a = trace_value((*previous)[0], Domain::atmosphere, seg.nodes[0], n);
        const Vec2 o = trace_value((*previous)[1], Domain::ocean, seg.nodes[1], n);
        ip.jump_previous = norm(a - o);
      }
      trace.points.push_back(ip);
    }
  }
  return trace;
}

InterfaceBlocks assemble_interface_blocks(const Space& space, const InterfaceTrace& trace, double kappa,
                                          InterfaceCoupling coupling, std::array<double, 2> scale) {
  if (coupling == InterfaceCoupling::geometric_average && !trace.has_previous)
    throw std::logic_error("geometric averaging needs the n-1 interface trace");
  const auto& segments = space.interface_segments();
  std::array<Triplets, 2> own, cross;
  InterfaceBlocks out;
  for (Domain d : kDomains) out.explicit_rhs[index(d)] = Vector::Zero(space[d].velocity_dofs());

  for (const InterfacePoint& ip : trace.points) {
    const InterfaceSegment& seg = segments[ip.segment];
    const auto n = edge_p2_values(ip.s);
    for (Domain d : kDomains) {
      const int i = index(d);
      const int j = 1 - i;
      const DomainSpace& ds = space[d];
      const DomainSpace& other_space = space[other(d)];
      const double k = kappa * scale[i] * ip.weight;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 2; ++c) {
            const double v = k * ip.jump * n[a] * n[b];
            own[i].emplace_back(ds.velocity_dof(c, seg.nodes[i][a]), ds.velocity_dof(c, seg.nodes[i][b]), v);
            if (coupling == InterfaceCoupling::monolithic)
              cross[i].emplace_back(ds.velocity_dof(c, seg.nodes[i][a]), other_space.velocity_dof(c, seg.nodes[j][b]),
                                    -v);
          }
      if (coupling == InterfaceCoupling::monolithic) continue;
      const double weight = coupling == InterfaceCoupling::geometric_average
                                ? std::sqrt(ip.jump) * std::sqrt(ip.jump_previous)
                                : ip.jump;
      const Vec2 uj = ip.velocity[j];
      for (int a = 0; a < 3; ++a) {
        out.explicit_rhs[i][ds.velocity_dof(0, seg.nodes[i][a])] += k * weight * uj.x * n[a];
        out.explicit_rhs[i][ds.velocity_dof(1, seg.nodes[i][a])] += k * weight * uj.y * n[a];
      }
    }
  }
  for (Domain d : kDomains) {
    const int i = index(d);
    out.implicit[i] = from_triplets(space[d].velocity_dofs(), space[d].velocity_dofs(), own[i]);
    out.cross[i] = from_triplets(space[d].velocity_dofs(), space[other(d)].velocity_dofs(), cross[i]);
  }
  return out;
}

GradientProjector::GradientProjector(const DomainSpace& space)
    : space_(&space), mass_(assemble_p1_mass(space)) {}

Vector GradientProjector::project(const Vector& velocity) const {
  const DomainSpace& space = *space_;
  require_size(velocity, space.velocity_dofs(), "velocity");
  const int nv = space.vertex_count();
  const QuadratureRule q = triangle_quadrature(2);
  std::array<Vector, 4> rhs;
  for (auto& r : rhs) r = Vector::Zero(nv);
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    const auto& nodes = space.element_nodes(e);
    const auto& tri = space.mesh().triangles[e];
    for (std::size_t p = 0; p < q.size(); ++p) {
      const double w = q.weights[p] * geo.det;
      const Tensor2 g = gradient_at(space, velocity, nodes, p2_gradients(q.points[p], geo.grad_lambda));
      for (int c = 0; c < 4; ++c)
        for (int k = 0; k < 3; ++k) rhs[c][tri[k]] += w * g[c] * q.points[p][k];
    }
  }
  Vector out(4 * nv);
  for (int c = 0; c < 4; ++c) out.segment(c * nv, nv) = mass_.solve(rhs[c]);
  return out;
}

Vector project_gradient(const DomainSpace& space, const Vector& velocity) {
  return GradientProjector(space).project(velocity);
}

Vector assemble_vms_rhs(const DomainSpace& space, const Vector& large_scale, double nu_t) {
  if (nu_t < 0.0) throw std::invalid_argument("negative eddy viscosity");
  require_size(large_scale, space.large_scale_dofs(), "large-scale tensor");
  Vector out = Vector::Zero(space.velocity_dofs());
  if (nu_t == 0.0) return out;
  const QuadratureRule q = triangle_quadrature(2);
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    const auto& nodes = space.element_nodes(e);
    const auto& tri = space.mesh().triangles[e];
    for (std::size_t p = 0; p < q.size(); ++p) {
      const double w = nu_t * q.weights[p] * geo.det;
      const Tensor2 g = large_scale_at(space, large_scale, tri, q.points[p]);
      const auto dphi = p2_gradients(q.points[p], geo.grad_lambda);
      for (int a = 0; a < 6; ++a) {
        out[space.velocity_dof(0, nodes[a])] += w * (g[0] * dphi[a].x + g[1] * dphi[a].y);
        out[space.velocity_dof(1, nodes[a])] += w * (g[2] * dphi[a].x + g[3] * dphi[a].y);
      }
    }
  }
  return out;
}

namespace {

template <class Integrand>
double integrate_gradients(const DomainSpace& space, Integrand&& f) {
  const QuadratureRule q = triangle_quadrature(2);
  double total = 0.0;
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    for (std::size_t p = 0; p < q.size(); ++p) total += q.weights[p] * geo.det * f(e, geo, q.points[p]);
  }
  return total;
}

}  // namespace

double gradient_norm_squared(const DomainSpace& space, const Vector& velocity) {
  require_size(velocity, space.velocity_dofs(), "velocity");
  return integrate_gradients(space, [&](int e, const ElementGeometry& geo, const std::array<double, 3>& lam) {
    const Tensor2 g = gradient_at(space, velocity, space.element_nodes(e), p2_gradients(lam, geo.grad_lambda));
    return g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
  });
}

double large_scale_norm_squared(const DomainSpace& space, const Vector& large_scale) {
  require_size(large_scale, space.large_scale_dofs(), "large-scale tensor");
  return integrate_gradients(space, [&](int e, const ElementGeometry&, const std::array<double, 3>& lam) {
    const Tensor2 g = large_scale_at(space, large_scale, space.mesh().triangles[e], lam);
    return g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
  });
}

double small_scale_norm_squared(const DomainSpace& space, const Vector& velocity, const Vector& large_scale) {
  require_size(velocity, space.velocity_dofs(), "velocity");
  require_size(large_scale, space.large_scale_dofs(), "large-scale tensor");
  return integrate_gradients(space, [&](int e, const ElementGeometry& geo, const std::array<double, 3>& lam) {
    const Tensor2 g = gradient_at(space, velocity, space.element_nodes(e), p2_gradients(lam, geo.grad_lambda));
    const Tensor2 G = large_scale_at(space, large_scale, space.mesh().triangles[e], lam);
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += (g[c] - G[c]) * (g[c] - G[c]);
    return s;
  });
}

double projection_orthogonality_defect(const DomainSpace& space, const Vector& velocity, const Vector& large_scale) {
  require_size(velocity, space.velocity_dofs(), "velocity");
  require_size(large_scale, space.large_scale_dofs(), "large-scale tensor");
  const int nv = space.vertex_count();
  const QuadratureRule q = triangle_quadrature(2);
  Vector defect = Vector::Zero(4 * nv);
  for (int e = 0; e < space.element_count(); ++e) {
    const ElementGeometry geo = space.geometry(e);
    const auto& tri = space.mesh().triangles[e];
    for (std::size_t p = 0; p < q.size(); ++p) {
      const double w = q.weights[p] * geo.det;
      const Tensor2 g =
          gradient_at(space, velocity, space.element_nodes(e), p2_gradients(q.points[p], geo.grad_lambda));
      const Tensor2 G = large_scale_at(space, large_scale, tri, q.points[p]);
      for (int c = 0; c < 4; ++c)
        for (int k = 0; k < 3; ++k) defect[c * nv + tri[k]] += w * (g[c] - G[c]) * q.points[p][k];
    }
  }
  return defect.cwiseAbs().maxCoeff();
}

}  // namespace gavms
