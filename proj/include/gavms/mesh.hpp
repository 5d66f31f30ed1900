#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace gavms {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a);

/// The two fluid subdomains. Index 0 is the atmosphere (Omega_1), index 1 the ocean (Omega_2).
enum class Domain : int { atmosphere = 0, ocean = 1 };

inline constexpr std::array<Domain, 2> kDomains{Domain::atmosphere, Domain::ocean};
inline constexpr int index(Domain d) { return static_cast<int>(d); }
inline constexpr Domain other(Domain d) {
  return d == Domain::atmosphere ? Domain::ocean : Domain::atmosphere;
}

enum class BoundaryTag { dirichlet, interface, outflow };

struct BoundaryEdge {
  std::array<int, 2> vertices{};
  BoundaryTag tag = BoundaryTag::dirichlet;
  int triangle = -1;    ///< owning triangle
  int local_edge = -1;  ///< local edge k joins local vertices k and (k+1)%3
};

/// Conforming triangulation of one subdomain. Triangles are counter-clockwise.
struct DomainMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;  ///< maximum triangle diameter

  double signed_area(int triangle) const;
  double diameter(int triangle) const;
  std::size_t edge_count() const;
};

/// One matched segment of the interface. Edge indices refer to
/// DomainMesh::boundary_edges of the respective domain; when `reversed` is set
/// the ocean edge lists its vertices in the opposite order to the atmosphere edge.
struct InterfacePair {
  int atmosphere_edge = -1;
  int ocean_edge = -1;
  bool reversed = false;
};

struct CoupledMesh {
  std::array<DomainMesh, 2> domains;
  std::vector<InterfacePair> interface_pairs;

  const DomainMesh& operator[](Domain d) const { return domains[index(d)]; }
  DomainMesh& operator[](Domain d) { return domains[index(d)]; }
  double h() const;
};

/// Stacked unit squares: atmosphere [0,1]x[0,1], ocean [0,1]x[-1,0], interface y = 0.
/// Each square is split into n x n cells with alternating diagonals.
CoupledMesh generate_two_domain_mesh(int n);

/// Backward-facing step channel over an ocean box. Atmosphere is the inflow shelf
/// [0,2]x[1,2] joined to the channel [2,12]x[0,2]; ocean is [2,12]x[-1,0].
/// Cells are as coarse as possible with triangle diameter at most h_target.
CoupledMesh generate_step_mesh(double h_target);

/// Checks the structural invariants (orientation, tag coverage, matching interface
/// traces, Euler characteristic). Throws std::logic_error describing the first violation.
void validate(const CoupledMesh& mesh);

}  // namespace gavms
