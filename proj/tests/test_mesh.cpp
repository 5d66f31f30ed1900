#include <cmath>

#include <gtest/gtest.h>

#include "gavms/mesh.hpp"

using namespace gavms;

namespace {

double total_area(const DomainMesh& m) {
  double a = 0.0;
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) a += m.signed_area(t);
  return a;
}

double boundary_length(const DomainMesh& m, BoundaryTag tag) {
  double l = 0.0;
  for (const auto& e : m.boundary_edges)
    if (e.tag == tag) l += norm(m.vertices[e.vertices[1]] - m.vertices[e.vertices[0]]);
  return l;
}

}  // namespace

TEST(TwoDomainMesh, CountsForTwoCells) {
  const CoupledMesh mesh = generate_two_domain_mesh(2);
  for (Domain d : kDomains) {
    EXPECT_EQ(mesh[d].vertices.size(), 9u);
    EXPECT_EQ(mesh[d].triangles.size(), 8u);
    EXPECT_EQ(mesh[d].edge_count(), 16u);
    EXPECT_EQ(mesh[d].boundary_edges.size(), 8u);
  }
  EXPECT_EQ(mesh.interface_pairs.size(), 2u);
  EXPECT_DOUBLE_EQ(mesh.h(), std::sqrt(2.0) / 2);
}

TEST(TwoDomainMesh, RejectsNonPositiveN) { EXPECT_THROW(generate_two_domain_mesh(0), std::invalid_argument); }

class TwoDomainMeshSizes : public ::testing::TestWithParam<int> {};

TEST_P(TwoDomainMeshSizes, AreasTagsAndValidity) {
  const int n = GetParam();
  const CoupledMesh mesh = generate_two_domain_mesh(n);
  EXPECT_NO_THROW(validate(mesh));
  for (Domain d : kDomains) {
    const DomainMesh& m = mesh[d];
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) EXPECT_NEAR(m.signed_area(t), 0.5 / (n * n), 1e-15);
    EXPECT_NEAR(total_area(m), 1.0, 1e-12);
    EXPECT_NEAR(boundary_length(m, BoundaryTag::interface), 1.0, 1e-12);
    EXPECT_NEAR(boundary_length(m, BoundaryTag::dirichlet), 3.0, 1e-12);
    EXPECT_NEAR(boundary_length(m, BoundaryTag::outflow), 0.0, 0.0);
    for (const auto& e : m.boundary_edges)
      if (e.tag == BoundaryTag::interface) {
        EXPECT_EQ(m.vertices[e.vertices[0]].y, 0.0);
        EXPECT_EQ(m.vertices[e.vertices[1]].y, 0.0);
      }
  }
  EXPECT_EQ(static_cast<int>(mesh.interface_pairs.size()), n);
}

INSTANTIATE_TEST_SUITE_P(Sizes, TwoDomainMeshSizes, ::testing::Values(1, 2, 3, 5, 8));

TEST(StepMesh, GeometryAndTags) {
  const CoupledMesh mesh = generate_step_mesh(0.14);
  EXPECT_NO_THROW(validate(mesh));
  EXPECT_GE(mesh.h(), 0.1);
  EXPECT_LE(mesh.h(), 0.14 + 1e-12);
  const DomainMesh& atm = mesh[Domain::atmosphere];
  const DomainMesh& ocn = mesh[Domain::ocean];
  EXPECT_NEAR(total_area(atm), 2.0 * 1.0 + 10.0 * 2.0, 1e-9);
  EXPECT_NEAR(total_area(ocn), 10.0, 1e-9);
  EXPECT_NEAR(boundary_length(atm, BoundaryTag::interface), 10.0, 1e-9);
  EXPECT_NEAR(boundary_length(ocn, BoundaryTag::interface), 10.0, 1e-9);
  // top of the atmosphere and its right wall
  EXPECT_NEAR(boundary_length(atm, BoundaryTag::outflow), 12.0 + 2.0, 1e-9);
  EXPECT_NEAR(boundary_length(ocn, BoundaryTag::outflow), 1.0, 1e-9);
  // inlet, step face, step top and the ocean walls
  EXPECT_NEAR(boundary_length(atm, BoundaryTag::dirichlet), 1.0 + 1.0 + 2.0, 1e-9);
  EXPECT_NEAR(boundary_length(ocn, BoundaryTag::dirichlet), 1.0 + 10.0, 1e-9);
}

TEST(StepMesh, RejectsBadSize) {
  EXPECT_THROW(generate_step_mesh(0.0), std::invalid_argument);
  EXPECT_THROW(generate_step_mesh(0.7), std::invalid_argument);
}

TEST(Validate, DetectsFlippedTriangle) {
  CoupledMesh mesh = generate_two_domain_mesh(2);
  std::swap(mesh.domains[0].triangles[3][0], mesh.domains[0].triangles[3][1]);
  EXPECT_THROW(validate(mesh), std::logic_error);
}

TEST(Validate, DetectsMissingBoundaryTag) {
  CoupledMesh mesh = generate_two_domain_mesh(2);
  mesh.domains[1].boundary_edges.pop_back();
  EXPECT_THROW(validate(mesh), std::logic_error);
}

TEST(Validate, DetectsMismatchedInterface) {
  CoupledMesh mesh = generate_two_domain_mesh(3);
  std::swap(mesh.interface_pairs[0].ocean_edge, mesh.interface_pairs[1].ocean_edge);
  EXPECT_THROW(validate(mesh), std::logic_error);
}
