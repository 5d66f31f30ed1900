#include "gavms/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace gavms {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

double DomainMesh::signed_area(int triangle) const {
  const auto& t = triangles[triangle];
  const Vec2 a = vertices[t[0]], b = vertices[t[1]], c = vertices[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double DomainMesh::diameter(int triangle) const {
  const auto& t = triangles[triangle];
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d = std::max(d, norm(vertices[t[k]] - vertices[t[(k + 1) % 3]]));
  return d;
}

std::size_t DomainMesh::edge_count() const {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      edges.emplace(std::minmax(a, b), 0);
    }
  return edges.size();
}

double CoupledMesh::h() const { return std::max(domains[0].h, domains[1].h); }

namespace {

struct LatticePoint {
  int i = 0;
  int j = 0;
};

using CellFilter = std::function<bool(int i, int j)>;
using EdgeTagger = std::function<BoundaryTag(LatticePoint a, LatticePoint b)>;

// Triangulates the union of lattice cells [i/m,(i+1)/m]x[j/m,(j+1)/m] accepted by
// `keep`, for i in [i0,i1) and j in [j0,j1). Coordinates are computed from global
// integer lattice indices so that neighbouring domains reproduce shared vertices bit
// for bit.
DomainMesh build_lattice_region(int m, int i0, int i1, int j0, int j1, const CellFilter& keep,
                                const EdgeTagger& tag) {
  DomainMesh mesh;
  std::map<std::pair<int, int>, int> vertex_id;
  std::vector<LatticePoint> lattice;
  auto vid = [&](int i, int j) {
    auto [it, inserted] = vertex_id.emplace(std::make_pair(j, i), 0);
    if (inserted) {
      it->second = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});
      lattice.push_back({i, j});
    }
    return it->second;
  };

  for (int j = j0; j < j1; ++j)
    for (int i = i0; i < i1; ++i) {
      if (!keep(i, j)) continue;
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if (((i + j) % 2 + 2) % 2 == 0) {
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
      } else {
        mesh.triangles.push_back({v00, v10, v01});
        mesh.triangles.push_back({v10, v11, v01});
      }
    }

  struct Use {
    int count = 0;
    int triangle = -1;
    int local = -1;
  };
  std::map<std::pair<int, int>, Use> uses;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.triangles[t][k], b = mesh.triangles[t][(k + 1) % 3];
      auto& u = uses[std::minmax(a, b)];
      if (u.count++ == 0) {
        u.triangle = t;
        u.local = k;
      }
    }
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = mesh.triangles[t][k], b = mesh.triangles[t][(k + 1) % 3];
      const auto& u = uses.at(std::minmax(a, b));
      if (u.count != 1) continue;
      mesh.boundary_edges.push_back({{a, b}, tag(lattice[a], lattice[b]), t, k});
    }

  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t)
    mesh.h = std::max(mesh.h, mesh.diameter(t));
  return mesh;
}

void pair_interfaces(CoupledMesh& mesh) {
  auto key = [](const DomainMesh& dm, const BoundaryEdge& e) {
    Vec2 a = dm.vertices[e.vertices[0]], b = dm.vertices[e.vertices[1]];
    auto less = [](Vec2 p, Vec2 q) { return p.x < q.x || (p.x == q.x && p.y < q.y); };
    if (less(b, a)) std::swap(a, b);
    return std::array<double, 4>{a.x, a.y, b.x, b.y};
  };
  const DomainMesh& atm = mesh[Domain::atmosphere];
  const DomainMesh& ocn = mesh[Domain::ocean];
  std::map<std::array<double, 4>, int> ocean_edges;
  for (int e = 0; e < static_cast<int>(ocn.boundary_edges.size()); ++e)
    if (ocn.boundary_edges[e].tag == BoundaryTag::interface)
      ocean_edges.emplace(key(ocn, ocn.boundary_edges[e]), e);

  for (int e = 0; e < static_cast<int>(atm.boundary_edges.size()); ++e) {
    const BoundaryEdge& ae = atm.boundary_edges[e];
    if (ae.tag != BoundaryTag::interface) continue;
    auto it = ocean_edges.find(key(atm, ae));
    if (it == ocean_edges.end())
      throw std::logic_error("interface edge without a matching ocean edge");
    const BoundaryEdge& oe = ocn.boundary_edges[it->second];
    const bool reversed = !(atm.vertices[ae.vertices[0]] == ocn.vertices[oe.vertices[0]]);
    mesh.interface_pairs.push_back({e, it->second, reversed});
    ocean_edges.erase(it);
  }
  if (!ocean_edges.empty()) throw std::logic_error("unmatched ocean interface edge");
}

}  // namespace

CoupledMesh generate_two_domain_mesh(int n) {
  if (n < 1) throw std::invalid_argument("two-domain mesh needs n >= 1, got " + std::to_string(n));
  auto all = [](int, int) { return true; };
  auto tagger = [](LatticePoint a, LatticePoint b) {
    return (a.j == 0 && b.j == 0) ? BoundaryTag::interface : BoundaryTag::dirichlet;
  };
  CoupledMesh mesh;
  mesh[Domain::atmosphere] = build_lattice_region(n, 0, n, 0, n, all, tagger);
  mesh[Domain::ocean] = build_lattice_region(n, 0, n, -n, 0, all, tagger);
  pair_interfaces(mesh);
  return mesh;
}

CoupledMesh generate_step_mesh(double h_target) {
  if (!(h_target > 0.0 && h_target <= 0.5))
    throw std::invalid_argument("step mesh needs h_target in (0, 0.5], got " +
                                std::to_string(h_target));
  // Right triangles of leg 1/m have diameter sqrt(2)/m.
  const int m = std::max(1, static_cast<int>(std::ceil(std::sqrt(2.0) / h_target - 1e-9)));

  auto atmosphere_cell = [m](int i, int j) { return !(i < 2 * m && j < m); };
  auto atmosphere_tag = [m](LatticePoint a, LatticePoint b) {
    if (a.j == 0 && b.j == 0) return BoundaryTag::interface;
    if ((a.j == 2 * m && b.j == 2 * m) || (a.i == 12 * m && b.i == 12 * m))
      return BoundaryTag::outflow;
    return BoundaryTag::dirichlet;
  };
  auto ocean_tag = [m](LatticePoint a, LatticePoint b) {
    if (a.j == 0 && b.j == 0) return BoundaryTag::interface;
    if (a.i == 12 * m && b.i == 12 * m) return BoundaryTag::outflow;
    return BoundaryTag::dirichlet;
  };
  CoupledMesh mesh;
  mesh[Domain::atmosphere] =
      build_lattice_region(m, 0, 12 * m, 0, 2 * m, atmosphere_cell, atmosphere_tag);
  mesh[Domain::ocean] = build_lattice_region(
      m, 2 * m, 12 * m, -m, 0, [](int, int) { return true; }, ocean_tag);
  pair_interfaces(mesh);
  return mesh;
}

void validate(const CoupledMesh& mesh) {
  for (Domain d : kDomains) {
    const DomainMesh& dm = mesh[d];
    const std::string name = d == Domain::atmosphere ? "atmosphere" : "ocean";
    for (int t = 0; t < static_cast<int>(dm.triangles.size()); ++t)
      if (!(dm.signed_area(t) > 0.0))
        throw std::logic_error(name + ": triangle " + std::to_string(t) + " not positively oriented");

    std::map<std::pair<int, int>, int> count;
    for (const auto& t : dm.triangles)
      for (int k = 0; k < 3; ++k) ++count[std::minmax(t[k], t[(k + 1) % 3])];
    std::map<std::pair<int, int>, int> tagged;
    for (const auto& e : dm.boundary_edges) ++tagged[std::minmax(e.vertices[0], e.vertices[1])];
    for (const auto& [edge, c] : count) {
      const int expected = c == 1 ? 1 : 0;
      auto it = tagged.find(edge);
      const int got = it == tagged.end() ? 0 : it->second;
      if (got != expected) throw std::logic_error(name + ": boundary tags do not partition the boundary");
    }
    if (tagged.size() != dm.boundary_edges.size())
      throw std::logic_error(name + ": duplicate boundary edge");

    const long long V = static_cast<long long>(dm.vertices.size());
    const long long E = static_cast<long long>(count.size());
    const long long F = static_cast<long long>(dm.triangles.size());
    if (V - E + F != 1) throw std::logic_error(name + ": Euler characteristic is not 1");
  }

  const DomainMesh& atm = mesh[Domain::atmosphere];
  const DomainMesh& ocn = mesh[Domain::ocean];
  std::vector<int> seen_atm(atm.boundary_edges.size(), 0), seen_ocn(ocn.boundary_edges.size(), 0);
  for (const InterfacePair& p : mesh.interface_pairs) {
    const BoundaryEdge& a = atm.boundary_edges.at(p.atmosphere_edge);
    const BoundaryEdge& o = ocn.boundary_edges.at(p.ocean_edge);
    if (a.tag != BoundaryTag::interface || o.tag != BoundaryTag::interface)
      throw std::logic_error("interface pair references a non-interface edge");
    for (int k = 0; k < 2; ++k) {
      const int ko = p.reversed ? 1 - k : k;
      if (!(atm.vertices[a.vertices[k]] == ocn.vertices[o.vertices[ko]]))
        throw std::logic_error("interface pair endpoints do not coincide");
    }
    ++seen_atm[p.atmosphere_edge];
    ++seen_ocn[p.ocean_edge];
  }
  for (std::size_t e = 0; e < atm.boundary_edges.size(); ++e)
    if ((atm.boundary_edges[e].tag == BoundaryTag::interface) != (seen_atm[e] == 1))
      throw std::logic_error("atmosphere interface edge not paired exactly once");
  for (std::size_t e = 0; e < ocn.boundary_edges.size(); ++e)
    if ((ocn.boundary_edges[e].tag == BoundaryTag::interface) != (seen_ocn[e] == 1))
      throw std::logic_error("ocean interface edge not paired exactly once");
}

}  // namespace gavms
